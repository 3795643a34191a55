use std::fmt;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::Rational;
use crate::poly::UniPoly;

/// A square matrix over Q, stored by rows.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalMatrix {
    rows: Vec<Vec<Rational>>,
}

impl RationalMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("matrix must be square and nonempty".into()));
        }
        Ok(RationalMatrix { rows })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, Rational::one())
    }

    pub fn scalar(n: usize, c: Rational) -> Self {
        let mut rows = vec![vec![Rational::zero(); n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = c.clone();
        }
        RationalMatrix { rows }
    }

    /// Companion matrix of a monic polynomial: ones below the diagonal and
    /// `−p_0, …, −p_{d−1}` down the last column.
    pub fn companion(p: &UniPoly<Rational>) -> Result<Self> {
        let d = p.deg();
        if d == 0 || !p.lead().is_one() {
            return Err(Error::NonMonic);
        }
        let mut rows = vec![vec![Rational::zero(); d]; d];
        for i in 1..d {
            rows[i][i - 1] = Rational::one();
        }
        for (i, row) in rows.iter_mut().enumerate() {
            row[d - 1] = -p.coeff(i);
        }
        Ok(RationalMatrix { rows })
    }

    /// Block-diagonal sum.
    pub fn block_diagonal(blocks: &[RationalMatrix]) -> Result<Self> {
        let n: usize = blocks.iter().map(|b| b.dim()).sum();
        let mut rows = vec![vec![Rational::zero(); n]; n];
        let mut off = 0;
        for b in blocks {
            for i in 0..b.dim() {
                for j in 0..b.dim() {
                    rows[off + i][off + j] = b.rows[i][j].clone();
                }
            }
            off += b.dim();
        }
        Self::new(rows)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i][j]
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.dim();
        assert_eq!(n, o.dim(), "dimension mismatch");
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(Rational::zero(), |acc, k| acc + &self.rows[i][k] * &o.rows[k][j]))
                    .collect()
            })
            .collect();
        RationalMatrix { rows }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        RationalMatrix { rows: self.rows.iter().map(|r| r.iter().map(|x| x * c).collect()).collect() }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.dim());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        self.rows.iter().map(|r| r.iter().zip(v).fold(Rational::zero(), |acc, (a, b)| acc + a * b)).collect()
    }

    pub fn det(&self) -> Rational {
        crate::dynamics_p1::determinant(self.rows.clone())
    }

    pub fn is_invertible(&self) -> bool {
        !self.det().is_zero()
    }

    /// Gauss–Jordan inverse.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.dim();
        let mut a: Vec<Vec<Rational>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                row
            })
            .collect();
        for c in 0..n {
            let piv = (c..n).find(|&r| !a[r][c].is_zero()).ok_or(Error::SingularMatrix)?;
            a.swap(piv, c);
            let inv = a[c][c].recip();
            for x in a[c].iter_mut() {
                *x = &*x * &inv;
            }
            for r in 0..n {
                if r != c && !a[r][c].is_zero() {
                    let t = a[r][c].clone();
                    for k in 0..2 * n {
                        let v = &a[c][k] * &t;
                        a[r][k] = &a[r][k] - v;
                    }
                }
            }
        }
        Ok(RationalMatrix { rows: a.into_iter().map(|r| r[n..].to_vec()).collect() })
    }

    /// Monic polynomial of least degree annihilating the matrix, from the
    /// first linear dependency among `I, M, M², …`.
    pub fn minimal_polynomial(&self) -> UniPoly<Rational> {
        let n = self.dim();
        let flat = |m: &RationalMatrix| -> Vec<Rational> { m.rows.iter().flatten().cloned().collect() };
        // reduced rows (vector, coefficients in the power basis, pivot column)
        let mut basis: Vec<(Vec<Rational>, Vec<Rational>, usize)> = Vec::new();
        let mut power = Self::identity(n);
        for i in 0..=n {
            let mut v = flat(&power);
            let mut c = vec![Rational::zero(); n + 1];
            c[i] = Rational::one();
            for (bv, bc, p) in &basis {
                if v[*p].is_zero() {
                    continue;
                }
                let t = v[*p].clone() / &bv[*p];
                for (x, y) in v.iter_mut().zip(bv) {
                    *x = &*x - &t * y;
                }
                for (x, y) in c.iter_mut().zip(bc) {
                    *x = &*x - &t * y;
                }
            }
            match v.iter().position(|x| !x.is_zero()) {
                Some(p) => basis.push((v, c, p)),
                None => {
                    c.truncate(i + 1);
                    return UniPoly::new(c).monic();
                }
            }
            power = power.mul(self);
        }
        unreachable!("Cayley–Hamilton bounds the degree by the dimension")
    }
}

/// Rank of a list of vectors by row reduction.
pub fn rank(vectors: &[Vec<Rational>]) -> usize {
    let mut rows: Vec<Vec<Rational>> = vectors.to_vec();
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(piv, r);
        for i in r + 1..rows.len() {
            if rows[i][c].is_zero() {
                continue;
            }
            let t = &rows[i][c] / &rows[r][c];
            for k in c..cols {
                let v = &rows[r][k] * &t;
                rows[i][k] = &rows[i][k] - v;
            }
        }
        r += 1;
    }
    r
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

impl Serialize for RationalMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        rows.serialize(s)
    }
}

//! Exact parser for affine rational expressions in `z`, such as
//! `z^2 - 1`, `(z^2 + 1)/(2z)` or `(1+2i) z^5`. The imaginary unit `i` is
//! accepted when the target field contains it.

use piq_lab::numeric::{Field, GaussianRational, Rational};
use piq_lab::poly::UniPoly;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Var,
    I,
    Op(char),
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' => {
                chars.next();
            }
            '0'..='9' => {
                let mut n = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        n.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Num(n));
            }
            'z' | 'x' => {
                chars.next();
                out.push(Tok::Var);
            }
            'i' => {
                chars.next();
                out.push(Tok::I);
            }
            '+' | '-' | '*' | '/' | '^' => {
                chars.next();
                out.push(Tok::Op(c));
            }
            '(' => {
                chars.next();
                out.push(Tok::LParen);
            }
            ')' => {
                chars.next();
                out.push(Tok::RParen);
            }
            other => return Err(format!("unexpected character {other:?} in {s:?}")),
        }
    }
    Ok(out)
}

/// A rational function as numerator and denominator.
type Frac<K> = (UniPoly<K>, UniPoly<K>);

struct Parser<'a, K: Field> {
    toks: &'a [Tok],
    pos: usize,
    _k: std::marker::PhantomData<K>,
}

impl<K: Field> Parser<'_, K> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Frac<K>, String> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.bump();
            let rhs = self.term()?;
            acc = if c == '+' { add(&acc, &rhs) } else { add(&acc, &neg(&rhs)) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Frac<K>, String> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = mul(&acc, &rhs);
                }
                Some(Tok::Op('/')) => {
                    self.bump();
                    let rhs = self.unary()?;
                    if rhs.0.is_zero() {
                        return Err("division by zero".into());
                    }
                    acc = mul(&acc, &(rhs.1, rhs.0));
                }
                // implicit multiplication: `2z`, `3(z+1)`, `z(z-1)`
                Some(Tok::Num(_) | Tok::Var | Tok::I | Tok::LParen) => {
                    let rhs = self.power()?;
                    acc = mul(&acc, &rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Frac<K>, String> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.bump();
                Ok(neg(&self.unary()?))
            }
            Some(Tok::Op('+')) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Frac<K>, String> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.bump();
            let Some(Tok::Num(n)) = self.bump() else {
                return Err("exponent must be a nonnegative integer".into());
            };
            let e: u32 = n.parse().map_err(|_| format!("exponent {n} too large"))?;
            return Ok((base.0.pow(e), base.1.pow(e)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Frac<K>, String> {
        match self.bump() {
            Some(Tok::Num(n)) => {
                let q: Rational = n.parse().map_err(|_| format!("bad number {n}"))?;
                Ok((UniPoly::constant(K::from_rational(&q)), UniPoly::one()))
            }
            Some(Tok::Var) => Ok((UniPoly::x(), UniPoly::one())),
            Some(Tok::I) => {
                let i = K::from_gaussian(&GaussianRational::i())
                    .ok_or_else(|| format!("i is not in the field {}", K::NAME))?;
                Ok((UniPoly::constant(i), UniPoly::one()))
            }
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err("missing closing parenthesis".into()),
                }
            }
            other => Err(format!("unexpected token {other:?}")),
        }
    }
}

fn add<K: Field>(a: &Frac<K>, b: &Frac<K>) -> Frac<K> {
    (&(&a.0 * &b.1) + &(&b.0 * &a.1), &a.1 * &b.1)
}

fn neg<K: Field>(a: &Frac<K>) -> Frac<K> {
    (-&a.0, a.1.clone())
}

fn mul<K: Field>(a: &Frac<K>, b: &Frac<K>) -> Frac<K> {
    (&a.0 * &b.0, &a.1 * &b.1)
}

/// Numerator and denominator of an expression in `z`, not yet reduced.
pub fn parse_rational_function<K: Field>(s: &str) -> Result<(UniPoly<K>, UniPoly<K>), String> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err("empty expression".into());
    }
    let mut p = Parser::<K> { toks: &toks, pos: 0, _k: std::marker::PhantomData };
    let out = p.expr()?;
    if p.pos != toks.len() {
        return Err(format!("trailing input in {s:?}"));
    }
    if out.1.is_zero() {
        return Err("division by zero".into());
    }
    Ok(out)
}

/// A constant expression such as `-3/4` or `2 + i`.
pub fn parse_constant<K: Field>(s: &str) -> Result<K, String> {
    let (n, d) = parse_rational_function::<K>(s)?;
    if n.deg() > 0 || d.deg() > 0 {
        return Err(format!("{s:?} is not a constant"));
    }
    Ok(n.coeff(0) / d.coeff(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> (UniPoly<Rational>, UniPoly<Rational>) {
        parse_rational_function::<Rational>(s).unwrap()
    }

    #[test]
    fn polynomials_and_quotients() {
        let (n, d) = q("z^2 - 1");
        assert_eq!((n, d), (UniPoly::from_ints(&[-1, 0, 1]), UniPoly::one()));
        let (n, d) = q("(z^2+1)/(2z)");
        assert_eq!(n, UniPoly::from_ints(&[1, 0, 1]));
        assert_eq!(d, UniPoly::from_ints(&[0, 2]));
        let (n, _) = q("z^3 - 3z");
        assert_eq!(n, UniPoly::from_ints(&[0, -3, 0, 1]));
        let (n, d) = q("-z(z-1) + 1/2");
        let at = |t: i64| n.eval(&Rational::from_integer(t.into())) / d.eval(&Rational::from_integer(t.into()));
        assert_eq!(at(0), Rational::new(1.into(), 2.into()));
        assert_eq!(at(3), Rational::new((-11).into(), 2.into()));
    }

    #[test]
    fn gaussian_constants() {
        let c: GaussianRational = parse_constant("(1+2i)/5").unwrap();
        assert_eq!(c, GaussianRational::new(Rational::new(1.into(), 5.into()), Rational::new(2.into(), 5.into())));
        assert!(parse_constant::<Rational>("i").is_err());
        assert!(parse_constant::<Rational>("z").is_err());
    }

    #[test]
    fn malformed_input() {
        for s in ["", "z^", "(z", "z)", "1/0", "z $ 2", "z^-1"] {
            assert!(parse_rational_function::<Rational>(s).is_err(), "{s}");
        }
    }
}

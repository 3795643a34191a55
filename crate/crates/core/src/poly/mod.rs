//! Exact polynomial arithmetic over Q and Q(i): univariate polynomials,
//! binary forms, bihomogeneous polynomials on P1 × P1, squarefree
//! decomposition, cyclotomic parts and division polynomials.

mod bihom;
mod cyclotomic;
mod division;
mod form;
mod squarefree;
mod uni;

pub use bihom::{bihom_divides, BiHomPoly};
pub use cyclotomic::{
    cyclotomic_part, cyclotomic_polynomial, euler_phi, is_cyclotomic_free, orders_with_phi_at_most, t_pow_minus_one,
};
pub use division::{cubic, division_polynomial, multiplication_x_map, DivisionPolynomial};
pub use form::BinaryForm;
pub use squarefree::{squarefree_decomposition, squarefree_part};
pub use uni::UniPoly;

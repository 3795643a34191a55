//! Exact self-maps of the projective line over Q and Q(i), their reductions
//! modulo good primes, local germs at fixed residue discs, and the induced
//! map on binary quadratics.

mod map;
mod point;
mod reduction;
mod sym2;

pub(crate) use map::determinant;
pub use map::RationalMap;
pub use point::{enumerate_gaussian_points, enumerate_points, HeightField, ProjPoint};
pub use reduction::{choose_good_prime, is_prime, local_germ, reduce_mod_p, FiniteMap};
pub use sym2::{symmetric_square_descent, QuadNumber, QuadPoint, Sym2Map, Sym2Point, TernaryForm};

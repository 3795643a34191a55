//! Exact-arithmetic laboratory for preimage stabilization of self-maps of
//! P1 x P1: rational dynamics over Q and Q(i), finite-field reductions,
//! p-adic power series and uniformization, and the linear algebra of
//! periodic subspaces.

pub mod dynamics_p1;
pub mod error;
pub mod lattes;
pub mod linalg_uniform;
pub mod numeric;
pub mod padic_series;
pub mod piq_engine;
pub mod poly;
pub mod uniformize;

pub use error::{Error, Result};

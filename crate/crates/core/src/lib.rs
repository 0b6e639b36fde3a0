//! Exact verification of the lattice, cone and dynamics computations behind
//! a potential-density argument for `S^[3]` of a degree-6 K3 surface with
//! Néron–Severi form `6x² + 16xy + 6y²`.
//!
//! Everything is exact: integers are arbitrary precision and rationals are
//! reduced fractions. No floating point touches a verification path.

pub mod arith;
pub mod conegeom;
pub mod diophant;
pub mod dynamics;
pub mod hilbscheme;
pub mod linalg;
pub mod par;
pub mod poly;
pub mod quadlat;
pub mod runner;

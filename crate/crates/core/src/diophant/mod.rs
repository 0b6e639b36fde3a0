//! Diophantine engine: binary-form enumeration, Pell-type orbits, Hilbert
//! symbols, ternary isotropy and exact parametric square-class solving.

mod conic;
mod hilbert;
mod isotropy;
mod pell;

pub use conic::{orthogonal_square_classes, represents, solve_conic, ConicSolutionSet, OrthogonalClasses, ParamSolutions, Representation};
pub use hilbert::{hilbert_symbol, Place};
pub use isotropy::{
    descent_trace, diagonalize, quad_isotropic_rank3, search_height_from_env, ternary_isotropic, DescentCase,
    DescentTrace, Diagonalization, IsotropyCertificate, LocalSymbol, Verdict, DEFAULT_SEARCH_HEIGHT,
    SEARCH_HEIGHT_ENV,
};
pub use pell::{fundamental_unit, pell_orbit, pell_sweep, pell_window, PellClass, PellSolutions};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiophantError {
    #[error("{0} is neither prime nor the infinite place")]
    NotAPlace(u64),
    #[error("Hilbert symbol arguments must be nonzero")]
    ZeroArgument,
    #[error("D = {0} must be a positive nonsquare")]
    BadPellD(i64),
    #[error("bound must be at least 1")]
    BadBound,
    #[error("quadratic form is degenerate")]
    Degenerate,
    #[error("form must be a symmetric 3x3 integer matrix")]
    NotTernary,
    #[error("direction vector must be nonzero")]
    ZeroVector,
    #[error("value {0} does not fit the machine-integer enumeration range")]
    Overflow(String),
}

//! Periodic grids and (upwind) summation-by-parts derivative operators.

mod block;
mod check;
mod circulant;
mod grid;
mod operators;
pub mod stencils;

pub use block::BlockCirculant;
pub use check::{check_identities, IdentityReport, IDENTITY_TOL, PROBE_TOL};
pub use circulant::{Circulant, FftPlan};
pub use grid::{make_grid, PeriodicGrid};
pub use operators::{
    make_fourier_operator, make_upwind_operators, signed_wavenumber, OperatorKind, OperatorSet,
};

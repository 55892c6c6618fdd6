//! Structure-preserving discretizations of the hyperbolized Korteweg-de Vries
//! system (KdVH)
//!
//! ```text
//! u_t + u u_x + w_x = 0,   τ v_t = v_x - w,   τ w_t = -(u_x - v)
//! ```
//!
//! and of its relaxation limit, the KdV equation `η_t + η η_x + η_xxx = 0`.
//!
//! The crate provides periodic summation-by-parts operators ([`sbp`]),
//! energy-conserving split-form semidiscretizations ([`model`]), additive
//! implicit-explicit Runge-Kutta time stepping ([`imex`]), relaxation for exact
//! discrete energy conservation ([`relaxation`]), traveling-wave tools
//! ([`waves`]) and the experiment drivers behind the `kdvh` command line tool
//! ([`harness`]).

pub mod error;
pub mod harness;
pub mod imex;
pub mod model;
pub mod relaxation;
pub mod sbp;
pub mod waves;

pub use error::{Error, Result};

//! Additive implicit-explicit Runge-Kutta time stepping.

mod cache;
mod registry;
mod solver;
mod stepper;
mod tableau;

pub use cache::{solve_stage, StageSolverCache, RESIDUAL_TOL};
pub use registry::{find_method, registry, registry_json, RegistryEntry};
pub use solver::{SolverBackend, DENSE_LIMIT};
pub use stepper::{imex_step, step, step_kdv};
pub use tableau::{classify, Classification, Coef, ImexTableau, ImexType, MAX_TREE_ORDER, ORDER_TOL};

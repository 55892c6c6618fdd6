//! Traveling and solitary waves of the KdVH system.

mod flux;
mod petviashvili;
mod phase;

pub use flux::{flux_jacobian, flux_jacobian_eigs};
pub use petviashvili::{
    auxiliary_fields, petviashvili_solve, restrict, spectral_shift, tw_constraint_residual,
    PetviashviliResult, DEFAULT_MAX_ITER,
};
pub use phase::{
    classify_equilibria, first_integral, homoclinic_peak, integrate_orbit, launch_from_origin,
    sample_field, sqrt_sech_profile, tw_vector_field, Equilibrium, EquilibriumReport,
    FieldSample, OrbitClass, OrbitConfig, OrbitResult, PhasePoint, TravelingWaveParams,
    SINGULAR_TOL,
};

//! KdV and KdVH semidiscretizations, invariants and reference data.

mod init;
mod invariants;
mod rhs;
mod snapshot;
mod soliton;
mod state;

pub use init::well_prepared_init;
pub use invariants::{energy_kdv, energy_kdvh, mass};
pub use rhs::{
    kdv_rhs, kdv_stiff_operator, kdvh_rhs_split, split_convection, split_convection_into,
    stiff_operator,
};
pub use snapshot::{read_snapshot, write_snapshot, SnapshotHeader};
pub use soliton::{kdv_soliton, kdv_soliton_periodic, SolitonParams};
pub use state::{KdvState, KdvhState};

pub(crate) use state::check_tau;

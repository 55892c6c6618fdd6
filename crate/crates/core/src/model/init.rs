use super::state::KdvhState;
use crate::error::{check_len, Result};
use crate::sbp::OperatorSet;

/// Auxiliaries on the discrete equilibrium manifold: `v = D₋u₀`, `w = D D₋u₀`.
pub fn well_prepared_init(ops: &OperatorSet, u0: &[f64], tau: f64) -> Result<KdvhState> {
    check_len(ops.len(), u0.len())?;
    let v = ops.d_minus().apply(u0)?;
    let w = ops.d_central().apply(&v)?;
    KdvhState::new(u0.to_vec(), v, w, tau)
}

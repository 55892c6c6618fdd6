use super::state::{KdvState, KdvhState};
use crate::error::{check_len, Result};
use crate::sbp::OperatorSet;

/// Discrete mass `𝟙ᵀ M u`.
pub fn mass(ops: &OperatorSet, u: &[f64]) -> Result<f64> {
    check_len(ops.len(), u.len())?;
    Ok(ops.norm_weights().iter().zip(u).map(|(m, x)| m * x).sum())
}

/// `½ 𝟙ᵀ M η²`.
pub fn energy_kdv(ops: &OperatorSet, eta: &KdvState) -> Result<f64> {
    check_len(ops.len(), eta.len())?;
    Ok(0.5 * ops.inner(&eta.eta, &eta.eta))
}

/// Modified energy `½ 𝟙ᵀ M (u² + τ v² + τ w²)`.
pub fn energy_kdvh(ops: &OperatorSet, s: &KdvhState) -> Result<f64> {
    check_len(ops.len(), s.len())?;
    Ok(0.5 * (ops.inner(&s.u, &s.u) + s.tau * (ops.inner(&s.v, &s.v) + ops.inner(&s.w, &s.w))))
}

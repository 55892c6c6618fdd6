//! Split-form semidiscretizations.
//!
//! KdV:  `η_t = -⅓(D η² + η ∘ D η) - D₊ D D₋ η`
//!
//! KdVH: `q_t = f(q) + g(q)` with the nonlinear flux in `f` and every linear
//! term in `g`:
//!
//! ```text
//! f(q) = ( -⅓(D u² + u ∘ D u), 0, 0 )
//! g(q) = ( -D₊ w, (D v - w)/τ, (-D₋ u + v)/τ )
//! ```

use super::state::{check_tau, KdvState, KdvhState};
use crate::error::{check_len, Result};
use crate::sbp::{BlockCirculant, Circulant, OperatorSet};

/// `out = -⅓ (D u² + u ∘ D u)`; panics on length mismatch.
pub fn split_convection_into(ops: &OperatorSet, u: &[f64], out: &mut [f64]) {
    let n = u.len();
    let d = ops.d_central();
    let sq: Vec<f64> = u.iter().map(|x| x * x).collect();
    let mut du = vec![0.0; n];
    d.apply_into(u, &mut du);
    d.apply_into(&sq, out);
    for ((o, &ui), &dui) in out.iter_mut().zip(u).zip(&du) {
        *o = -(*o + ui * dui) / 3.0;
    }
}

pub fn split_convection(ops: &OperatorSet, u: &[f64]) -> Result<Vec<f64>> {
    check_len(ops.len(), u.len())?;
    let mut out = vec![0.0; u.len()];
    split_convection_into(ops, u, &mut out);
    Ok(out)
}

/// Right-hand side of the KdV semidiscretization.
pub fn kdv_rhs(ops: &OperatorSet, eta: &KdvState) -> Result<Vec<f64>> {
    let mut out = split_convection(ops, &eta.eta)?;
    let disp = ops.dispersion().apply(&eta.eta)?;
    for (o, d) in out.iter_mut().zip(disp) {
        *o -= d;
    }
    Ok(out)
}

/// Explicit and implicit parts `(f, g)` of the KdVH splitting, each of length `3n`.
pub fn kdvh_rhs_split(ops: &OperatorSet, s: &KdvhState) -> Result<(Vec<f64>, Vec<f64>)> {
    check_tau(s.tau)?;
    let n = ops.len();
    check_len(n, s.len())?;
    let mut f = vec![0.0; 3 * n];
    split_convection_into(ops, &s.u, &mut f[..n]);
    let g = stiff_operator(ops, s.tau)?.apply(&s.to_flat())?;
    Ok((f, g))
}

/// The linear operator `G` with `g(q) = G q`:
///
/// ```text
/// [   0      0    -D₊ ]
/// [   0     D/τ   -I/τ ]
/// [ -D₋/τ   I/τ    0  ]
/// ```
pub fn stiff_operator(ops: &OperatorSet, tau: f64) -> Result<BlockCirculant> {
    check_tau(tau)?;
    let n = ops.len();
    let inv = 1.0 / tau;
    Ok(BlockCirculant::zeros(n, 3)
        .with_block(0, 2, ops.d_plus().scaled(-1.0))
        .with_block(1, 1, ops.d_central().scaled(inv))
        .with_block(1, 2, Circulant::identity(n).scaled(-inv))
        .with_block(2, 0, ops.d_minus().scaled(-inv))
        .with_block(2, 1, Circulant::identity(n).scaled(inv)))
}

/// The KdV implicit operator `-D₊ D D₋` as a `1 × 1` block operator.
pub fn kdv_stiff_operator(ops: &OperatorSet) -> BlockCirculant {
    BlockCirculant::zeros(ops.len(), 1).with_block(0, 0, ops.dispersion().scaled(-1.0))
}

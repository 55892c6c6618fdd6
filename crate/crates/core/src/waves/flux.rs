use nalgebra::Matrix3;

use crate::error::{Error, Result};

/// Flux Jacobian of the KdVH system written as `q_t + F(q)_x = S(q)`,
/// `F(q) = (u²/2 + w, -v/τ, u/τ)`, at `u`.
pub fn flux_jacobian(u: f64, tau: f64) -> Result<Matrix3<f64>> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidTau(tau));
    }
    Ok(Matrix3::new(
        u, 0.0, 1.0, //
        0.0, -1.0 / tau, 0.0, //
        1.0 / tau, 0.0, 0.0,
    ))
}

/// Characteristic speeds at `u = 0`, ascending: `{-1/τ, -1/√τ, 1/√τ}` for τ < 1.
pub fn flux_jacobian_eigs(tau: f64) -> Result<[f64; 3]> {
    let ev = flux_jacobian(0.0, tau)?.complex_eigenvalues();
    let mut out = [ev[0].re, ev[1].re, ev[2].re];
    out.sort_by(f64::total_cmp);
    Ok(out)
}

//! Solitary-wave profiles of the KdVH system by Petviashvili iteration.
//!
//! A traveling wave `u(x - ct)` with `v, w` decaying at infinity satisfies
//!
//! ```text
//! w = c u - u²/2,   w = (1 + α) v',   v = u' - α w',   α = cτ,
//! ```
//!
//! which combine into `L u = N(u)` with
//!
//! ```text
//! L = -∂² + c / ((1 + α)(1 - c²τ)),
//! N(u) = u² / (2(1 + α)(1 - c²τ)) + α/(1 - c²τ) (u u')'.
//! ```
//!
//! `N` is homogeneous of degree 2, so the stabilizing factor enters squared.

use num_complex::Complex64;
use serde::Serialize;

use super::phase::TravelingWaveParams;
use crate::error::{check_len, Error, Result};
use crate::sbp::{make_fourier_operator, OperatorSet, PeriodicGrid};

#[derive(Debug, Clone, Serialize)]
pub struct PetviashviliResult {
    pub profile: Vec<f64>,
    /// `‖L u - N(u)‖∞` after each iteration.
    pub residual_history: Vec<f64>,
    /// Stabilizing factor `⟨Lu, u⟩ / ⟨N(u), u⟩` of the last iteration.
    pub stabilizer: f64,
}

impl PetviashviliResult {
    pub fn residual(&self) -> f64 {
        self.residual_history.last().copied().unwrap_or(f64::INFINITY)
    }

    pub fn iterations(&self) -> usize {
        self.residual_history.len()
    }
}

pub const DEFAULT_MAX_ITER: usize = 10_000;

struct Problem<'a> {
    ops: &'a OperatorSet,
    l_symbol: Vec<f64>,
    quad: f64,
    flux: f64,
}

impl Problem<'_> {
    fn apply_l(&self, u: &[f64]) -> Vec<f64> {
        let plan = self.ops.fft_plan();
        let mut hat = plan.forward_real(u);
        hat.iter_mut().zip(&self.l_symbol).for_each(|(z, l)| *z *= l);
        plan.inverse_real(hat)
    }

    fn solve_l(&self, r: &[f64]) -> Vec<f64> {
        let plan = self.ops.fft_plan();
        let mut hat = plan.forward_real(r);
        hat.iter_mut().zip(&self.l_symbol).for_each(|(z, l)| *z /= l);
        plan.inverse_real(hat)
    }

    fn nonlinear(&self, u: &[f64]) -> Vec<f64> {
        let d = self.ops.d_central();
        let mut out: Vec<f64> = u.iter().map(|x| self.quad * x * x).collect();
        if self.flux != 0.0 {
            let du = d.apply(u).expect("length checked");
            let flux: Vec<f64> = u.iter().zip(&du).map(|(a, b)| a * b).collect();
            let dflux = d.apply(&flux).expect("length checked");
            out.iter_mut().zip(&dflux).for_each(|(o, f)| *o += self.flux * f);
        }
        out
    }
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn max_abs_diff(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
}

/// Iterates `u ← L⁻¹(m² N(u))` with Fourier derivatives on `grid` until
/// `‖L u - N(u)‖∞ ≤ tol`.
pub fn petviashvili_solve(
    grid: &PeriodicGrid,
    params: &TravelingWaveParams,
    guess: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<PetviashviliResult> {
    check_len(grid.len(), guess.len())?;
    let ops = make_fourier_operator(grid)?;
    let (c, tau, alpha) = (params.c(), params.tau(), params.alpha());
    let sub = 1.0 - c * c * tau;
    if sub.abs() < 1e-12 || (1.0 + alpha).abs() < 1e-12 {
        return Err(Error::Petviashvili(format!(
            "singular profile equation for c = {c}, τ = {tau}"
        )));
    }
    let shift = c / ((1.0 + alpha) * sub);
    let l_symbol: Vec<f64> = ops
        .d_central()
        .symbol()
        .iter()
        .map(|s| -(s * s).re + shift)
        .collect();
    if l_symbol.iter().any(|&l| l <= 0.0) {
        return Err(Error::Petviashvili(format!(
            "linear operator is not positive for c = {c}, τ = {tau}"
        )));
    }
    let problem = Problem {
        ops: &ops,
        l_symbol,
        quad: 0.5 / ((1.0 + alpha) * sub),
        flux: alpha / sub,
    };

    let mut u = guess.to_vec();
    let mut history = Vec::new();
    let mut best = f64::INFINITY;
    let mut m = f64::NAN;
    for _ in 0..max_iter {
        let nu = problem.nonlinear(&u);
        let denom = dot(&nu, &u);
        m = dot(&problem.apply_l(&u), &u) / denom;
        if !m.is_finite() || denom == 0.0 {
            return Err(Error::Petviashvili("stabilizing factor is undefined".into()));
        }
        let scaled: Vec<f64> = nu.iter().map(|x| m * m * x).collect();
        u = problem.solve_l(&scaled);

        let residual = max_abs_diff(&problem.apply_l(&u), &problem.nonlinear(&u));
        history.push(residual);
        if !residual.is_finite() {
            return Err(Error::Petviashvili("iteration produced non-finite values".into()));
        }
        if residual <= tol {
            return Ok(PetviashviliResult {
                profile: u,
                residual_history: history,
                stabilizer: m,
            });
        }
        best = best.min(residual);
        let k = history.len();
        if k > 50 && history[k - 50..].iter().all(|&r| r > 1e3 * best) {
            return Err(Error::Petviashvili(format!(
                "diverged: residual {residual:e} after {k} iterations"
            )));
        }
    }
    Err(Error::Petviashvili(format!(
        "no convergence in {max_iter} iterations (residual {:e}, factor {m})",
        history.last().copied().unwrap_or(f64::NAN)
    )))
}

/// `(v, w)` belonging to a traveling-wave profile `u`: `w = c u - u²/2`,
/// `v = D u - α D w`.
pub fn auxiliary_fields(
    ops: &OperatorSet,
    params: &TravelingWaveParams,
    u: &[f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    let d = ops.d_central();
    let w: Vec<f64> = u.iter().map(|x| params.c() * x - 0.5 * x * x).collect();
    let du = d.apply(u)?;
    let dw = d.apply(&w)?;
    let v = du.iter().zip(&dw).map(|(a, b)| a - params.alpha() * b).collect();
    Ok((v, w))
}

/// M-norms of `v - (D u - α D w)` and `w - (1 + α) D v`.
pub fn tw_constraint_residual(
    ops: &OperatorSet,
    params: &TravelingWaveParams,
    u: &[f64],
    v: &[f64],
    w: &[f64],
) -> Result<(f64, f64)> {
    let d = ops.d_central();
    let alpha = params.alpha();
    let (du, dv, dw) = (d.apply(u)?, d.apply(v)?, d.apply(w)?);
    let r1: Vec<f64> = (0..u.len()).map(|i| v[i] - (du[i] - alpha * dw[i])).collect();
    let r2: Vec<f64> = (0..u.len()).map(|i| w[i] - (1.0 + alpha) * dv[i]).collect();
    Ok((ops.norm(&r1), ops.norm(&r2)))
}

/// Trigonometric interpolant of periodic samples on `ops`' grid translated
/// by `shift`: returns `u(x - shift)` at the nodes.
pub fn spectral_shift(ops: &OperatorSet, u: &[f64], shift: f64) -> Result<Vec<f64>> {
    check_len(ops.len(), u.len())?;
    let plan = ops.fft_plan();
    let n = u.len();
    let base = 2.0 * std::f64::consts::PI / ops.grid().length();
    let mut hat = plan.forward_real(u);
    for (k, z) in hat.iter_mut().enumerate() {
        let kappa = base * crate::sbp::signed_wavenumber(k, n);
        *z *= Complex64::from_polar(1.0, -kappa * shift);
        if 2 * k == n {
            // the Nyquist mode of a real signal stays real
            *z = Complex64::new(z.re * (std::f64::consts::PI * shift / ops.grid().dx()).cos(), 0.0);
        }
    }
    Ok(plan.inverse_real(hat))
}

/// Samples of a profile on a grid `stride` times finer, taken at every
/// `stride`-th node.
pub fn restrict(u: &[f64], stride: usize) -> Vec<f64> {
    u.iter().step_by(stride.max(1)).copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{kdv_soliton, SolitonParams};
    use crate::sbp::make_grid;
    use std::f64::consts::PI;

    fn grid() -> PeriodicGrid {
        make_grid(-30.0 * PI, 30.0 * PI, 512).unwrap()
    }

    fn guess(g: &PeriodicGrid) -> Vec<f64> {
        g.nodes().iter().map(|x| (-x * x / 8.0).exp()).collect()
    }

    #[test]
    fn kdv_limit_recovers_sech2() {
        let g = grid();
        let c = 1.0 / 3.0;
        let p = TravelingWaveParams::kdv_limit(c).unwrap();
        let r = petviashvili_solve(&g, &p, &guess(&g), 1e-13, DEFAULT_MAX_ITER).unwrap();
        let sp = SolitonParams::new(c).unwrap();
        let exact = kdv_soliton(&sp, &g.nodes(), 0.0);
        let err = max_abs_diff(&exact, &r.profile);
        assert!(err < 1e-10, "{err}");
        assert!((r.stabilizer - 1.0).abs() < 1e-10);
    }

    #[test]
    fn profiles_satisfy_constraints() {
        let g = grid();
        let ops = make_fourier_operator(&g).unwrap();
        for tau in [1.0, 0.5, 0.1] {
            let p = TravelingWaveParams::new(1.0 / 3.0, tau).unwrap();
            let r = petviashvili_solve(&g, &p, &guess(&g), 1e-12, DEFAULT_MAX_ITER).unwrap();
            let (v, w) = auxiliary_fields(&ops, &p, &r.profile).unwrap();
            let (r1, r2) = tw_constraint_residual(&ops, &p, &r.profile, &v, &w).unwrap();
            assert!(r1 < 1e-12 && r2 < 1e-10, "τ = {tau}: {r1:e} {r2:e}");
        }
    }

    #[test]
    fn shift_is_exact_for_band_limited_data() {
        let g = make_grid(0.0, 2.0 * PI, 32).unwrap();
        let ops = make_fourier_operator(&g).unwrap();
        let u: Vec<f64> = g.nodes().iter().map(|x| (3.0 * x).sin() + (5.0 * x).cos()).collect();
        let s = 0.37;
        let shifted = spectral_shift(&ops, &u, s).unwrap();
        for (x, y) in g.nodes().iter().zip(&shifted) {
            assert!(((3.0 * (x - s)).sin() + (5.0 * (x - s)).cos() - y).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_degenerate_speed() {
        let g = grid();
        let p = TravelingWaveParams::new(1.0, 1.0).unwrap();
        assert!(petviashvili_solve(&g, &p, &guess(&g), 1e-12, 10).is_err());
    }
}

//! Fixed-step time marching to an exact final time, optionally relaxed.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::imex::{step, step_kdv, ImexTableau, StageSolverCache};
use crate::model::{energy_kdv, energy_kdvh, KdvState, KdvhState};
use crate::relaxation::{relax_quadratic, relax_quadratic_kdv, RelaxationFlags, RelaxationResult};
use crate::sbp::OperatorSet;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarchOptions {
    pub dt: f64,
    pub t_final: f64,
    pub relaxation: bool,
}

/// What the observer sees after every step (and once for the initial state).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepInfo {
    pub step: usize,
    pub t: f64,
    /// Relaxation factor of the step; `None` for unrelaxed steps and the initial record.
    pub gamma: Option<f64>,
    pub flags: RelaxationFlags,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MarchStats {
    pub steps: usize,
    pub t: f64,
    pub gamma_min: Option<f64>,
    pub gamma_max: Option<f64>,
    /// Steps where no positive relaxation factor existed; these were taken unrelaxed.
    pub degenerate_steps: usize,
    pub out_of_range_steps: usize,
}

/// Steps of `dt` to `t_final`; the last one is shortened to land exactly.
/// With relaxation the physical step is `γ Δt`, and the last step is chosen by
/// fixed-point iteration on `Δt = (T - t)/γ(Δt)`.
pub fn march<S: Clone>(
    initial: S,
    opts: MarchOptions,
    mut advance: impl FnMut(&S, f64) -> Result<S>,
    mut relax: impl FnMut(&S, &S, f64) -> Result<RelaxationResult<S>>,
    is_finite: impl Fn(&S) -> bool,
    mut observe: impl FnMut(&StepInfo, &S) -> Result<()>,
) -> Result<(S, MarchStats)> {
    let MarchOptions { dt, t_final, relaxation } = opts;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidTimeStep(dt));
    }
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(Error::Config(format!("final time must be nonnegative, got {t_final}")));
    }
    let mut stats = MarchStats::default();
    let mut state = initial;
    observe(
        &StepInfo { step: 0, t: 0.0, gamma: None, flags: RelaxationFlags::default() },
        &state,
    )?;

    let mut t = 0.0;
    let landing = 1e-12 * t_final.max(1.0);
    let nominal = if relaxation { 0 } else { (t_final / dt - 1e-9).ceil().max(0.0) as usize };
    while if relaxation { t_final - t > landing } else { stats.steps < nominal } {
        let k = stats.steps + 1;
        let (next, t_next, gamma, flags) = if relaxation {
            let mut h = dt.min(t_final - t);
            let mut r = relaxed_step(&state, h, &mut advance, &mut relax)?;
            // a clipped step with γ < 1 would only creep towards T
            if h < dt || t + r.dt_effective > t_final - landing {
                for _ in 0..50 {
                    if (t + r.dt_effective - t_final).abs() <= landing {
                        break;
                    }
                    h = (t_final - t) / r.gamma;
                    r = relaxed_step(&state, h, &mut advance, &mut relax)?;
                }
                (r.state, t_final, r.gamma, r.flags)
            } else {
                (r.state, t + r.dt_effective, r.gamma, r.flags)
            }
        } else {
            let t_next = if k == nominal { t_final } else { k as f64 * dt };
            (advance(&state, t_next - t)?, t_next, 1.0, RelaxationFlags::default())
        };
        if !is_finite(&next) {
            return Err(Error::NonFinite(t_next));
        }
        state = next;
        t = t_next;
        stats.steps = k;
        stats.t = t;
        if relaxation {
            stats.gamma_min = Some(stats.gamma_min.map_or(gamma, |g| g.min(gamma)));
            stats.gamma_max = Some(stats.gamma_max.map_or(gamma, |g| g.max(gamma)));
            stats.degenerate_steps += flags.degenerate as usize;
            stats.out_of_range_steps += flags.out_of_range as usize;
        }
        let info = StepInfo { step: k, t, gamma: relaxation.then_some(gamma), flags };
        observe(&info, &state)?;
    }
    stats.t = t;
    Ok((state, stats))
}

fn relaxed_step<S: Clone>(
    state: &S,
    h: f64,
    advance: &mut impl FnMut(&S, f64) -> Result<S>,
    relax: &mut impl FnMut(&S, &S, f64) -> Result<RelaxationResult<S>>,
) -> Result<RelaxationResult<S>> {
    let new = advance(state, h)?;
    let r = relax(state, &new, h)?;
    if r.flags.degenerate {
        // no energy-restoring factor exists; keep the plain step
        return Ok(RelaxationResult { gamma: 1.0, state: new, dt_effective: h, flags: r.flags });
    }
    Ok(r)
}

/// Integrates the KdVH semidiscretization with the ImEx method `tableau`.
pub fn integrate_kdvh(
    tableau: &ImexTableau,
    ops: &OperatorSet,
    initial: KdvhState,
    opts: MarchOptions,
    cache: &mut StageSolverCache,
    observe: impl FnMut(&StepInfo, &KdvhState) -> Result<()>,
) -> Result<(KdvhState, MarchStats)> {
    let tau = initial.tau;
    march(
        initial,
        opts,
        |s, h| step(tableau, ops, s, h, cache),
        |old, new, h| relax_quadratic(ops, tau, old, new, h),
        KdvhState::is_finite,
        observe,
    )
}

/// Integrates the KdV semidiscretization with the ImEx method `tableau`.
pub fn integrate_kdv(
    tableau: &ImexTableau,
    ops: &OperatorSet,
    initial: KdvState,
    opts: MarchOptions,
    cache: &mut StageSolverCache,
    observe: impl FnMut(&StepInfo, &KdvState) -> Result<()>,
) -> Result<(KdvState, MarchStats)> {
    march(
        initial,
        opts,
        |s, h| step_kdv(tableau, ops, s, h, cache),
        |old, new, h| relax_quadratic_kdv(ops, old, new, h),
        KdvState::is_finite,
        observe,
    )
}

/// Energy of either state type, for invariant tracking.
pub trait Energy {
    fn energy(&self, ops: &OperatorSet) -> Result<f64>;
}

impl Energy for KdvhState {
    fn energy(&self, ops: &OperatorSet) -> Result<f64> {
        energy_kdvh(ops, self)
    }
}

impl Energy for KdvState {
    fn energy(&self, ops: &OperatorSet) -> Result<f64> {
        energy_kdv(ops, self)
    }
}

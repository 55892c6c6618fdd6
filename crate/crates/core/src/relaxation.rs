//! Relaxation of Runge-Kutta updates for exact conservation of a quadratic energy.
//!
//! For `I(q) = ½ qᵀ M̃ q` the relaxed update `qⁿ + γ (qⁿ⁺¹ - qⁿ)` conserves `I`
//! exactly for the nontrivial root
//!
//! ```text
//! γ = -2 ⟨qⁿ, d⟩ / ⟨d, d⟩,   d = qⁿ⁺¹ - qⁿ,
//! ```
//!
//! and physical time advances by `γ Δt`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Result};
use crate::model::{check_tau, KdvState, KdvhState};
use crate::sbp::OperatorSet;

/// `⟨d, d⟩` below this is treated as a vanishing update.
pub const DEGENERATE_TOL: f64 = 1e-28;
/// Relaxation factors outside this range are flagged as suspicious.
pub const GAMMA_RANGE: (f64, f64) = (0.5, 1.5);

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelaxationFlags {
    /// No positive root exists (vanishing update or `γ ≤ 0`).
    pub degenerate: bool,
    /// `γ` lies outside [`GAMMA_RANGE`]; the step is likely too large.
    pub out_of_range: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelaxationResult<S> {
    pub gamma: f64,
    pub state: S,
    pub dt_effective: f64,
    pub flags: RelaxationFlags,
}

/// Relaxation factor for the weighted inner product `⟨x, y⟩ = Σ wᵢ xᵢ yᵢ`.
fn relaxation_factor(
    weights: impl Fn(usize) -> f64,
    old: &[f64],
    new: &[f64],
) -> (f64, RelaxationFlags) {
    let (mut od, mut dd) = (0.0, 0.0);
    for (i, (o, n)) in old.iter().zip(new).enumerate() {
        let d = n - o;
        let w = weights(i);
        od += w * o * d;
        dd += w * d * d;
    }
    if dd < DEGENERATE_TOL {
        return (
            1.0,
            RelaxationFlags {
                degenerate: true,
                out_of_range: false,
            },
        );
    }
    let gamma = -2.0 * od / dd;
    let flags = RelaxationFlags {
        degenerate: gamma <= 0.0,
        out_of_range: !(GAMMA_RANGE.0..=GAMMA_RANGE.1).contains(&gamma),
    };
    (gamma, flags)
}

fn blend(old: &[f64], new: &[f64], gamma: f64) -> Vec<f64> {
    old.iter().zip(new).map(|(o, n)| o + gamma * (n - o)).collect()
}

/// Relaxes a KdVH step to conserve `½ 𝟙ᵀM(u² + τv² + τw²)`.
pub fn relax_quadratic(
    ops: &OperatorSet,
    tau: f64,
    q_old: &KdvhState,
    q_new: &KdvhState,
    dt: f64,
) -> Result<RelaxationResult<KdvhState>> {
    check_tau(tau)?;
    check_len(ops.len(), q_old.len())?;
    check_len(ops.len(), q_new.len())?;
    let n = ops.len();
    let m = ops.norm_weights();
    let (old, new) = (q_old.to_flat(), q_new.to_flat());
    let (gamma, flags) = relaxation_factor(
        |i| if i < n { m[i] } else { tau * m[i % n] },
        &old,
        &new,
    );
    Ok(RelaxationResult {
        gamma,
        state: KdvhState::from_flat(&blend(&old, &new, gamma), tau)?,
        dt_effective: gamma * dt,
        flags,
    })
}

/// Relaxes a KdV step to conserve `½ ηᵀMη`.
pub fn relax_quadratic_kdv(
    ops: &OperatorSet,
    eta_old: &KdvState,
    eta_new: &KdvState,
    dt: f64,
) -> Result<RelaxationResult<KdvState>> {
    check_len(ops.len(), eta_old.len())?;
    check_len(ops.len(), eta_new.len())?;
    let m = ops.norm_weights();
    let (gamma, flags) = relaxation_factor(|i| m[i], &eta_old.eta, &eta_new.eta);
    Ok(RelaxationResult {
        gamma,
        state: KdvState::new(blend(&eta_old.eta, &eta_new.eta, gamma)),
        dt_effective: gamma * dt,
        flags,
    })
}

/// Streams per-step `(step, t, γ, I)` records as CSV.
pub struct RelaxationLog<W: Write> {
    out: W,
}

impl<W: Write> RelaxationLog<W> {
    pub fn new(mut out: W) -> Result<Self> {
        writeln!(out, "step,t,gamma,invariant")?;
        Ok(Self { out })
    }

    pub fn record(&mut self, step: usize, t: f64, gamma: f64, invariant: f64) -> Result<()> {
        writeln!(self.out, "{step},{t:.16e},{gamma:.16e},{invariant:.16e}")?;
        Ok(())
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

use super::cache::StageSolverCache;
use super::tableau::ImexTableau;
use crate::error::{check_len, Error, Result};
use crate::model::{split_convection_into, KdvState, KdvhState};
use crate::sbp::OperatorSet;

/// One step of an additive RK method for `q' = f(q) + G q`:
///
/// ```text
/// (I - Δt aᵢᵢ G) Qᵢ = qⁿ + Δt Σ_{j<i} (ãᵢⱼ f(Qⱼ) + aᵢⱼ G Qⱼ)
/// qⁿ⁺¹ = qⁿ + Δt Σᵢ (b̃ᵢ f(Qᵢ) + bᵢ G Qᵢ)
/// ```
///
/// `G Qᵢ` of an implicit stage is recovered from the stage equation as
/// `(Qᵢ - rhsᵢ)/(Δt aᵢᵢ)`, which avoids the cancellation of applying a
/// `1/τ`-scaled operator to a nearly equilibrated state.
pub fn imex_step<F>(
    tableau: &ImexTableau,
    mut explicit: F,
    cache: &mut StageSolverCache,
    q: &[f64],
    dt: f64,
) -> Result<Vec<f64>>
where
    F: FnMut(&[f64], &mut [f64]),
{
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidTimeStep(dt));
    }
    let dim = cache.stiff().dim();
    check_len(dim, q.len())?;
    let s = tableau.stages();
    let at = tableau.explicit_matrix();
    let a = tableau.implicit_matrix();
    let bt = tableau.explicit_weights();
    let b = tableau.implicit_weights();

    // which stage evaluations are ever used
    let needs_f: Vec<bool> = (0..s)
        .map(|j| bt[j] != 0.0 || (j + 1..s).any(|i| at[i][j] != 0.0))
        .collect();
    let needs_g: Vec<bool> = (0..s)
        .map(|j| b[j] != 0.0 || (j + 1..s).any(|i| a[i][j] != 0.0))
        .collect();
    let last_is_update = (0..s).all(|j| at[s - 1][j] == bt[j] && a[s - 1][j] == b[j]);

    let mut fs: Vec<Vec<f64>> = vec![Vec::new(); s];
    let mut gs: Vec<Vec<f64>> = vec![Vec::new(); s];
    let mut last_stage = Vec::new();
    for i in 0..s {
        let mut rhs = q.to_vec();
        for j in 0..i {
            let (ca, cg) = (dt * at[i][j], dt * a[i][j]);
            if ca != 0.0 {
                axpy(&mut rhs, ca, &fs[j]);
            }
            if cg != 0.0 {
                axpy(&mut rhs, cg, &gs[j]);
            }
        }
        let a_dt = dt * a[i][i];
        let stage = cache
            .solve_stage(&rhs, a_dt)
            .map_err(|e| match e {
                Error::SingularStage { .. } => Error::SingularStage { stage: i + 1 },
                other => other,
            })?;
        if needs_f[i] {
            let mut f = vec![0.0; dim];
            explicit(&stage, &mut f);
            fs[i] = f;
        }
        if needs_g[i] {
            gs[i] = if a_dt != 0.0 {
                stage
                    .iter()
                    .zip(&rhs)
                    .map(|(x, r)| (x - r) / a_dt)
                    .collect()
            } else {
                let mut g = vec![0.0; dim];
                cache.stiff().apply_into(&stage, &mut g);
                g
            };
        }
        if i == s - 1 {
            last_stage = stage;
        }
    }

    if last_is_update {
        // stiffly accurate pair: the last stage is the update
        debug_assert!({
            let generic = combine(q, dt, &bt, &fs, &b, &gs);
            let scale = last_stage.iter().chain(&generic).fold(1.0f64, |m, x| m.max(x.abs()));
            // a blown-up step is reported by the caller's finiteness check
            !last_stage.iter().chain(&generic).all(|x| x.is_finite())
                || generic
                    .iter()
                    .zip(&last_stage)
                    .all(|(x, y)| (x - y).abs() <= 1e-10 * scale)
        });
        return Ok(last_stage);
    }
    Ok(combine(q, dt, &bt, &fs, &b, &gs))
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (y, x) in y.iter_mut().zip(x) {
        *y += a * x;
    }
}

fn combine(q: &[f64], dt: f64, bt: &[f64], fs: &[Vec<f64>], b: &[f64], gs: &[Vec<f64>]) -> Vec<f64> {
    let mut out = q.to_vec();
    for j in 0..bt.len() {
        if bt[j] != 0.0 {
            axpy(&mut out, dt * bt[j], &fs[j]);
        }
        if b[j] != 0.0 {
            axpy(&mut out, dt * b[j], &gs[j]);
        }
    }
    out
}

/// One ImEx step of the KdVH semidiscretization, convection explicit.
pub fn step(
    tableau: &ImexTableau,
    ops: &OperatorSet,
    s: &KdvhState,
    dt: f64,
    cache: &mut StageSolverCache,
) -> Result<KdvhState> {
    check_len(ops.len(), s.len())?;
    cache.bind(ops, Some(s.tau))?;
    let n = ops.len();
    let q = imex_step(
        tableau,
        |q, f| {
            split_convection_into(ops, &q[..n], &mut f[..n]);
            f[n..].fill(0.0);
        },
        cache,
        &s.to_flat(),
        dt,
    )?;
    KdvhState::from_flat(&q, s.tau)
}

/// One ImEx step of the KdV semidiscretization with `-D₊ D D₋` implicit.
pub fn step_kdv(
    tableau: &ImexTableau,
    ops: &OperatorSet,
    eta: &KdvState,
    dt: f64,
    cache: &mut StageSolverCache,
) -> Result<KdvState> {
    check_len(ops.len(), eta.len())?;
    cache.bind(ops, None)?;
    let q = imex_step(
        tableau,
        |q, f| split_convection_into(ops, q, f),
        cache,
        &eta.eta,
        dt,
    )?;
    Ok(KdvState::new(q))
}

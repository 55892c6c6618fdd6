//! Asymptotic-preserving τ-sweeps: KdVH solutions against a KdV reference.

use rayon::prelude::*;
use serde::Serialize;

use super::config::RunConfig;
use super::eoc::eoc;
use super::march::{integrate_kdv, integrate_kdvh, MarchOptions, MarchStats};
use super::output::Table;
use crate::error::{check_len, Error, Result, ResultExt};
use crate::imex::StageSolverCache;
use crate::model::{kdv_soliton_periodic, well_prepared_init, KdvState, KdvhState, SolitonParams};
use crate::sbp::OperatorSet;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApTableRow {
    pub tau: f64,
    pub err_u: f64,
    pub err_v: f64,
    pub err_w: f64,
    pub eoc_u: Option<f64>,
    pub eoc_v: Option<f64>,
    pub eoc_w: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ApSweep {
    pub method: String,
    pub rows: Vec<ApTableRow>,
    pub reference: MarchStats,
    pub runs: Vec<MarchStats>,
}

impl ApSweep {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&["tau", "err_u", "eoc_u", "err_v", "eoc_v", "err_w", "eoc_w"]);
        for r in &self.rows {
            t.push(vec![
                r.tau.into(),
                r.err_u.into(),
                r.eoc_u.into(),
                r.err_v.into(),
                r.eoc_v.into(),
                r.err_w.into(),
                r.eoc_w.into(),
            ]);
        }
        t
    }
}

/// M-norms of `u - η`, `v - D₋η` and `w - D D₋η`.
pub fn ap_errors(ops: &OperatorSet, q: &KdvhState, eta: &[f64]) -> Result<[f64; 3]> {
    check_len(ops.len(), eta.len())?;
    check_len(ops.len(), q.len())?;
    let target = well_prepared_init(ops, eta, q.tau)?;
    let diff = |a: &[f64], b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x - y).collect() };
    Ok([
        ops.norm(&diff(&q.u, &target.u)),
        ops.norm(&diff(&q.v, &target.v)),
        ops.norm(&diff(&q.w, &target.w)),
    ])
}

/// Table rows with the EOC of each component with respect to τ.
pub fn ap_rows(taus: &[f64], errors: &[[f64; 3]]) -> Result<Vec<ApTableRow>> {
    check_len(taus.len(), errors.len())?;
    let col = |k: usize| -> Result<Vec<Option<f64>>> {
        eoc(&errors.iter().map(|e| e[k]).collect::<Vec<_>>(), taus)
    };
    let (eu, ev, ew) = (col(0)?, col(1)?, col(2)?);
    Ok((0..taus.len())
        .map(|i| ApTableRow {
            tau: taus[i],
            err_u: errors[i][0],
            err_v: errors[i][1],
            err_w: errors[i][2],
            eoc_u: eu[i],
            eoc_v: ev[i],
            eoc_w: ew[i],
        })
        .collect())
}

/// Soliton of the configured amplitude, centred at `x0`, on the operators' grid.
pub fn soliton_data(ops: &OperatorSet, cfg: &RunConfig, t: f64) -> Result<Vec<f64>> {
    let p = SolitonParams::from_amplitude(cfg.initial.amplitude)?;
    let [eta, _, _] = kdv_soliton_periodic(&p, ops.grid(), cfg.initial.x0, t);
    Ok(eta)
}

/// Integrates KdV once and KdVH for every τ of `cfg.sweep.taus` (in parallel)
/// with the configured method, grid and time step.
pub fn ap_sweep(cfg: &RunConfig) -> Result<ApSweep> {
    let taus = &cfg.sweep.taus;
    if taus.is_empty() || taus.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Config("ap sweep needs a strictly decreasing τ list".into()));
    }
    let tableau = cfg.tableau()?;
    let ops = cfg.operators()?;
    let opts = MarchOptions {
        dt: cfg.dt,
        t_final: cfg.t_final,
        relaxation: cfg.relaxation,
    };
    let eta0 = soliton_data(&ops, cfg, 0.0)?;

    let mut cache = StageSolverCache::for_kdv(&ops, cfg.backend);
    let (eta, reference) =
        integrate_kdv(&tableau, &ops, KdvState::new(eta0.clone()), opts, &mut cache, |_, _| Ok(()))
            .context(|| "KdV reference run".to_string())?;

    let results: Vec<([f64; 3], MarchStats)> = taus
        .par_iter()
        .map(|&tau| {
            let run = || -> Result<_> {
                let mut cache = StageSolverCache::for_kdvh(&ops, tau, cfg.backend)?;
                let q0 = well_prepared_init(&ops, &eta0, tau)?;
                let (q, stats) = integrate_kdvh(&tableau, &ops, q0, opts, &mut cache, |_, _| Ok(()))?;
                Ok((ap_errors(&ops, &q, &eta.eta)?, stats))
            };
            run().context(|| format!("KdVH run at τ = {tau:e}"))
        })
        .collect::<Result<_>>()?;

    let errors: Vec<[f64; 3]> = results.iter().map(|r| r.0).collect();
    Ok(ApSweep {
        method: tableau.name.clone(),
        rows: ap_rows(taus, &errors)?,
        reference,
        runs: results.into_iter().map(|r| r.1).collect(),
    })
}

//! Single runs and operator audits.

use std::io::Write;

use serde::Serialize;

use super::aa::WaveReference;
use super::ap::soliton_data;
use super::config::{InitialKind, Model, RunConfig};
use super::march::{integrate_kdv, integrate_kdvh, Energy, MarchOptions, MarchStats, StepInfo};
use super::output::Table;
use crate::error::{Error, Result};
use crate::imex::StageSolverCache;
use crate::model::{mass, well_prepared_init, KdvState};
use crate::relaxation::RelaxationLog;
use crate::sbp::{check_identities, make_fourier_operator, make_upwind_operators, IdentityReport};

#[derive(Debug, Clone, Serialize)]
pub struct SolveSummary {
    pub model: Model,
    pub method: String,
    pub t: f64,
    pub energy_initial: f64,
    pub energy_final: f64,
    pub energy_drift: f64,
    pub mass_initial: f64,
    pub mass_final: f64,
    pub stats: MarchStats,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub summary: SolveSummary,
    /// Final fields on the grid: `x, u, v, w` (KdVH) or `x, eta` (KdV).
    pub table: Table,
}

/// Integrates the configured model from the configured initial data to
/// `t_final`; relaxed steps are streamed to `log` when given.
pub fn solve<W: Write>(cfg: &RunConfig, mut log: Option<&mut RelaxationLog<W>>) -> Result<SolveResult> {
    let tableau = cfg.tableau()?;
    let ops = cfg.operators()?;
    let opts = MarchOptions {
        dt: cfg.dt,
        t_final: cfg.t_final,
        relaxation: cfg.relaxation,
    };
    let mut logger = |info: &StepInfo, e: f64| -> Result<()> {
        match (log.as_deref_mut(), info.gamma) {
            (Some(l), Some(g)) => l.record(info.step, info.t, g, e),
            _ => Ok(()),
        }
    };
    let x = ops.grid().nodes();
    let (summary, table) = match cfg.model {
        Model::Kdvh => {
            let q0 = match cfg.initial.kind {
                InitialKind::Soliton => well_prepared_init(&ops, &soliton_data(&ops, cfg, 0.0)?, cfg.tau)?,
                InitialKind::Petviashvili => WaveReference::compute(cfg, cfg.tau)?.state(0.0)?,
            };
            let (e0, m0) = (q0.energy(&ops)?, mass(&ops, &q0.u)?);
            let mut cache = StageSolverCache::for_kdvh(&ops, cfg.tau, cfg.backend)?;
            let (q, stats) = integrate_kdvh(&tableau, &ops, q0, opts, &mut cache, |info, q| {
                logger(info, q.energy(&ops)?)
            })?;
            let mut t = Table::new(&["x", "u", "v", "w"]);
            for i in 0..x.len() {
                t.push(vec![x[i].into(), q.u[i].into(), q.v[i].into(), q.w[i].into()]);
            }
            let e1 = q.energy(&ops)?;
            (summary(cfg, &tableau.name, stats, e0, e1, m0, mass(&ops, &q.u)?), t)
        }
        Model::Kdv => {
            if cfg.initial.kind != InitialKind::Soliton {
                return Err(Error::Config("KdV runs start from soliton data".into()));
            }
            let eta0 = KdvState::new(soliton_data(&ops, cfg, 0.0)?);
            let (e0, m0) = (eta0.energy(&ops)?, mass(&ops, &eta0.eta)?);
            let mut cache = StageSolverCache::for_kdv(&ops, cfg.backend);
            let (eta, stats) = integrate_kdv(&tableau, &ops, eta0, opts, &mut cache, |info, s| {
                logger(info, s.energy(&ops)?)
            })?;
            let mut t = Table::new(&["x", "eta"]);
            for i in 0..x.len() {
                t.push(vec![x[i].into(), eta.eta[i].into()]);
            }
            let e1 = eta.energy(&ops)?;
            (summary(cfg, &tableau.name, stats, e0, e1, m0, mass(&ops, &eta.eta)?), t)
        }
    };
    Ok(SolveResult { summary, table })
}

fn summary(
    cfg: &RunConfig,
    method: &str,
    stats: MarchStats,
    e0: f64,
    e1: f64,
    m0: f64,
    m1: f64,
) -> SolveSummary {
    SolveSummary {
        model: cfg.model,
        method: method.to_owned(),
        t: stats.t,
        energy_initial: e0,
        energy_final: e1,
        energy_drift: (e1 - e0).abs() / e0.abs(),
        mass_initial: m0,
        mass_final: m1,
        stats,
    }
}

/// Identity residuals of the upwind operators of every supported order and
/// of the Fourier operator on the configured grid.
pub fn operators_check(cfg: &RunConfig) -> Result<Vec<IdentityReport>> {
    let grid = crate::sbp::make_grid(cfg.grid.x_left, cfg.grid.x_right, cfg.grid.n)?;
    let mut reports = (1..=8)
        .map(|q| Ok(check_identities(&make_upwind_operators(&grid, q)?, 16)))
        .collect::<Result<Vec<_>>>()?;
    if grid.len() % 2 == 0 {
        reports.push(check_identities(&make_fourier_operator(&grid)?, 16));
    }
    Ok(reports)
}

pub fn operators_table(reports: &[IdentityReport]) -> Table {
    let mut t = Table::new(&[
        "kind",
        "order",
        "n",
        "central_skew",
        "upwind_pair",
        "dissipation_max_eig",
        "consistency",
        "probe_bilinear",
        "probe_skew",
        "probe_dissipation",
        "passed",
    ]);
    for r in reports {
        t.push(vec![
            r.kind.to_string().as_str().into(),
            r.accuracy_order.into(),
            r.n.into(),
            r.central_skew.into(),
            r.upwind_pair.into(),
            r.dissipation_max_eig.into(),
            r.consistency.iter().copied().fold(0.0, f64::max).into(),
            r.probe_bilinear.into(),
            r.probe_skew.into(),
            r.probe_dissipation.into(),
            r.passed.into(),
        ]);
    }
    t
}

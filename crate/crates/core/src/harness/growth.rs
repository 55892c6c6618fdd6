//! Long-time error growth with and without relaxation.

use rayon::prelude::*;
use serde::Serialize;

use super::aa::WaveReference;
use super::ap::soliton_data;
use super::config::{InitialKind, RunConfig};
use super::eoc::loglog_slope;
use super::march::{integrate_kdv, integrate_kdvh, Energy, MarchOptions, MarchStats, StepInfo};
use super::output::{Cell, Table};
use crate::error::{Result, ResultExt};
use crate::imex::{find_method, ImexTableau, StageSolverCache};
use crate::model::{well_prepared_init, KdvState};
use crate::sbp::OperatorSet;

#[derive(Debug, Clone, Serialize)]
pub struct GrowthSeries {
    pub method: String,
    /// `None` for the KdV comparison run.
    pub tau: Option<f64>,
    pub relaxation: bool,
    pub t: Vec<f64>,
    pub error: Vec<f64>,
    /// `|I(qⁿ) - I(q⁰)| / |I(q⁰)|`.
    pub drift: Vec<f64>,
    pub gamma: Vec<Option<f64>>,
    /// Log-log slope of error against time over the last decade of `t`.
    pub slope: Option<f64>,
    pub max_drift: f64,
    pub stats: MarchStats,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorGrowth {
    pub series: Vec<GrowthSeries>,
}

impl ErrorGrowth {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&["method", "model", "tau", "relaxation", "t", "error", "drift", "gamma"]);
        for s in &self.series {
            for i in 0..s.t.len() {
                t.push(vec![
                    s.method.as_str().into(),
                    if s.tau.is_some() { "kdvh" } else { "kdv" }.into(),
                    s.tau.into(),
                    s.relaxation.into(),
                    s.t[i].into(),
                    s.error[i].into(),
                    s.drift[i].into(),
                    Cell::from(s.gamma[i]),
                ]);
            }
        }
        t
    }

    pub fn find(&self, tau: Option<f64>, relaxation: bool) -> Option<&GrowthSeries> {
        self.series.iter().find(|s| s.tau == tau && s.relaxation == relaxation)
    }
}

/// Slope of `log e` against `log t` over `t ∈ [t_end/10, t_end]`.
pub fn final_decade_slope(t: &[f64], e: &[f64]) -> Option<f64> {
    let t_end = t.last().copied()?;
    let (ts, es): (Vec<f64>, Vec<f64>) = t
        .iter()
        .zip(e)
        .filter(|(t, _)| **t >= 0.1 * t_end)
        .map(|(t, e)| (*t, *e))
        .unzip();
    loglog_slope(&ts, &es)
}

struct Recorder<'a> {
    ops: &'a OperatorSet,
    every: usize,
    t_final: f64,
    energy0: Option<f64>,
    t: Vec<f64>,
    error: Vec<f64>,
    drift: Vec<f64>,
    gamma: Vec<Option<f64>>,
    max_drift: f64,
}

impl<'a> Recorder<'a> {
    fn new(ops: &'a OperatorSet, every: usize, t_final: f64) -> Self {
        Self {
            ops,
            every: every.max(1),
            t_final,
            energy0: None,
            t: Vec::new(),
            error: Vec::new(),
            drift: Vec::new(),
            gamma: Vec::new(),
            max_drift: 0.0,
        }
    }

    fn record<S: Energy>(&mut self, info: &StepInfo, s: &S, err: impl FnOnce() -> Result<f64>) -> Result<()> {
        let e = s.energy(self.ops)?;
        let e0 = *self.energy0.get_or_insert(e);
        let drift = (e - e0).abs() / e0.abs();
        self.max_drift = self.max_drift.max(drift);
        if info.step % self.every == 0 || info.t >= self.t_final {
            self.t.push(info.t);
            self.error.push(err()?);
            self.drift.push(drift);
            self.gamma.push(info.gamma);
        }
        Ok(())
    }

    fn finish(self, method: &str, tau: Option<f64>, relaxation: bool, stats: MarchStats) -> GrowthSeries {
        let slope = final_decade_slope(&self.t, &self.error);
        GrowthSeries {
            method: method.to_owned(),
            tau,
            relaxation,
            t: self.t,
            error: self.error,
            drift: self.drift,
            gamma: self.gamma,
            slope,
            max_drift: self.max_drift,
            stats,
        }
    }
}

fn diff_norm(ops: &OperatorSet, a: &[f64], b: &[f64]) -> f64 {
    ops.norm(&a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>())
}

/// One KdVH run, error against the analytic soliton or a reference wave.
pub fn growth_run_kdvh(
    cfg: &RunConfig,
    tableau: &ImexTableau,
    ops: &OperatorSet,
    tau: f64,
    relaxation: bool,
    reference: Option<&WaveReference>,
) -> Result<GrowthSeries> {
    let q0 = match reference {
        Some(r) => r.state(0.0)?,
        None => well_prepared_init(ops, &soliton_data(ops, cfg, 0.0)?, tau)?,
    };
    let opts = MarchOptions {
        dt: cfg.dt,
        t_final: cfg.t_final,
        relaxation,
    };
    let mut cache = StageSolverCache::for_kdvh(ops, tau, cfg.backend)?;
    let mut rec = Recorder::new(ops, cfg.record_every, cfg.t_final);
    let (_, stats) = integrate_kdvh(tableau, ops, q0, opts, &mut cache, |info, q| {
        rec.record(info, q, || {
            let exact = match reference {
                Some(r) => r.at(info.t)?[0].clone(),
                None => soliton_data(ops, cfg, info.t)?,
            };
            Ok(diff_norm(ops, &q.u, &exact))
        })
    })?;
    Ok(rec.finish(&tableau.name, Some(tau), relaxation, stats))
}

/// One KdV run, error against the analytic soliton.
pub fn growth_run_kdv(
    cfg: &RunConfig,
    tableau: &ImexTableau,
    ops: &OperatorSet,
    relaxation: bool,
) -> Result<GrowthSeries> {
    let opts = MarchOptions {
        dt: cfg.dt,
        t_final: cfg.t_final,
        relaxation,
    };
    let mut cache = StageSolverCache::for_kdv(ops, cfg.backend);
    let mut rec = Recorder::new(ops, cfg.record_every, cfg.t_final);
    let eta0 = KdvState::new(soliton_data(ops, cfg, 0.0)?);
    let (_, stats) = integrate_kdv(tableau, ops, eta0, opts, &mut cache, |info, eta| {
        rec.record(info, eta, || Ok(diff_norm(ops, &eta.eta, &soliton_data(ops, cfg, info.t)?)))
    })?;
    Ok(rec.finish(&tableau.name, None, relaxation, stats))
}

/// Every method × τ × {plain, relaxed} of the sweep; with soliton data the
/// KdV runs are added for comparison. Runs are parallel.
pub fn error_growth(cfg: &RunConfig) -> Result<ErrorGrowth> {
    let ops = cfg.operators()?;
    let methods = cfg
        .sweep
        .methods
        .iter()
        .map(|m| find_method(m))
        .collect::<Result<Vec<_>>>()?;
    let use_wave = cfg.initial.kind == InitialKind::Petviashvili;
    let references: Vec<Option<WaveReference>> = cfg
        .sweep
        .taus
        .par_iter()
        .map(|&tau| use_wave.then(|| WaveReference::compute(cfg, tau)).transpose())
        .collect::<Result<_>>()?;

    let mut jobs: Vec<(usize, Option<usize>, bool)> = Vec::new();
    for m in 0..methods.len() {
        for relaxation in [false, true] {
            if !use_wave {
                jobs.push((m, None, relaxation));
            }
            jobs.extend((0..cfg.sweep.taus.len()).map(|r| (m, Some(r), relaxation)));
        }
    }
    let series = jobs
        .par_iter()
        .map(|&(m, r, relaxation)| {
            let tableau = &methods[m];
            match r {
                Some(r) => {
                    let tau = cfg.sweep.taus[r];
                    growth_run_kdvh(cfg, tableau, &ops, tau, relaxation, references[r].as_ref())
                        .context(|| format!("{} at τ = {tau:e} (relaxation {relaxation})", tableau.name))
                }
                None => growth_run_kdv(cfg, tableau, &ops, relaxation)
                    .context(|| format!("{} on KdV (relaxation {relaxation})", tableau.name)),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ErrorGrowth { series })
}

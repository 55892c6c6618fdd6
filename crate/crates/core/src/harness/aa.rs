//! Asymptotic-accuracy study: Δt-convergence towards traveling-wave solutions
//! of KdVH at small τ.

use rayon::prelude::*;
use serde::Serialize;

use super::config::RunConfig;
use super::eoc::loglog_slope;
use super::march::{integrate_kdvh, MarchOptions};
use super::output::Table;
use crate::error::{Error, Result, ResultExt};
use crate::imex::{find_method, StageSolverCache};
use crate::model::{kdv_soliton, KdvhState, SolitonParams};
use crate::sbp::{make_fourier_operator, make_grid, OperatorSet};
use crate::waves::{auxiliary_fields, petviashvili_solve, restrict, spectral_shift, TravelingWaveParams};

/// A solitary wave of KdVH resolved on a fine grid, sampled on a coarse one.
#[derive(Debug, Clone)]
pub struct WaveReference {
    pub params: TravelingWaveParams,
    fine: OperatorSet,
    fields: [Vec<f64>; 3],
    stride: usize,
    pub residual: f64,
    pub iterations: usize,
}

impl WaveReference {
    /// Petviashvili profile of speed `A/3` on `cfg.wave.reference_n` points of
    /// the configured interval, with `(v, w)` from the traveling-wave relations.
    pub fn compute(cfg: &RunConfig, tau: f64) -> Result<Self> {
        let (n, n_fine) = (cfg.grid.n, cfg.wave.reference_n);
        if n_fine < n || n_fine % n != 0 {
            return Err(Error::Config(format!(
                "reference grid ({n_fine}) must be a multiple of the grid ({n})"
            )));
        }
        let grid = make_grid(cfg.grid.x_left, cfg.grid.x_right, n_fine)?;
        let fine = make_fourier_operator(&grid)?;
        let sol = SolitonParams::from_amplitude(cfg.initial.amplitude)?;
        let params = TravelingWaveParams::new(sol.speed(), tau)?;
        let x: Vec<f64> = grid.nodes().iter().map(|x| x - cfg.initial.x0).collect();
        let guess = kdv_soliton(&sol, &x, 0.0);
        let r = petviashvili_solve(&grid, &params, &guess, cfg.wave.tol, cfg.wave.max_iter)
            .context(|| format!("reference solitary wave at τ = {tau:e}"))?;
        let (v, w) = auxiliary_fields(&fine, &params, &r.profile)?;
        Ok(Self {
            params,
            fine,
            fields: [r.profile.clone(), v, w],
            stride: n_fine / n,
            residual: r.residual(),
            iterations: r.iterations(),
        })
    }

    /// `(u, v, w)` on the coarse grid at time `t`.
    pub fn at(&self, t: f64) -> Result<[Vec<f64>; 3]> {
        let shift = self.params.c() * t;
        let f = |k: usize| -> Result<Vec<f64>> {
            Ok(restrict(&spectral_shift(&self.fine, &self.fields[k], shift)?, self.stride))
        };
        Ok([f(0)?, f(1)?, f(2)?])
    }

    pub fn state(&self, t: f64) -> Result<KdvhState> {
        let [u, v, w] = self.at(t)?;
        KdvhState::new(u, v, w, self.params.tau())
    }
}

/// M-norm distance of each component.
pub fn component_errors(ops: &OperatorSet, q: &KdvhState, r: &KdvhState) -> [f64; 3] {
    let d = |a: &[f64], b: &[f64]| ops.norm(&a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>());
    [d(&q.u, &r.u), d(&q.v, &r.v), d(&q.w, &r.w)]
}

#[derive(Debug, Clone, Serialize)]
pub struct AaCurve {
    pub method: String,
    pub tau: f64,
    pub dts: Vec<f64>,
    /// `errors[k][i]`: component `k` (u, v, w) at `dts[i]`.
    pub errors: [Vec<f64>; 3],
    /// Least-squares log-log slopes of error against Δt.
    pub slopes: [Option<f64>; 3],
}

#[derive(Debug, Clone, Serialize)]
pub struct AaStudy {
    pub curves: Vec<AaCurve>,
    pub reference_residuals: Vec<(f64, f64)>,
}

impl AaStudy {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&["method", "tau", "dt", "err_u", "err_v", "err_w"]);
        for c in &self.curves {
            for (i, dt) in c.dts.iter().enumerate() {
                t.push(vec![
                    c.method.as_str().into(),
                    c.tau.into(),
                    (*dt).into(),
                    c.errors[0][i].into(),
                    c.errors[1][i].into(),
                    c.errors[2][i].into(),
                ]);
            }
        }
        t
    }

    pub fn curve(&self, method: &str, tau: f64) -> Option<&AaCurve> {
        let name = find_method(method).ok()?.name;
        self.curves.iter().find(|c| c.method == name && c.tau == tau)
    }
}

/// Error at `t_final` against the translated reference wave for every
/// method × τ × Δt of the sweep; runs are independent and parallel.
pub fn aa_study(cfg: &RunConfig) -> Result<AaStudy> {
    let ops = cfg.operators()?;
    let methods = cfg
        .sweep
        .methods
        .iter()
        .map(|m| find_method(m))
        .collect::<Result<Vec<_>>>()?;
    let references = cfg
        .sweep
        .taus
        .par_iter()
        .map(|&tau| WaveReference::compute(cfg, tau))
        .collect::<Result<Vec<_>>>()?;
    let targets = references
        .iter()
        .map(|r| Ok((r.state(0.0)?, r.state(cfg.t_final)?)))
        .collect::<Result<Vec<_>>>()?;

    let jobs: Vec<(usize, usize, usize)> = (0..methods.len())
        .flat_map(|m| (0..references.len()).flat_map(move |r| (0..cfg.sweep.dts.len()).map(move |d| (m, r, d))))
        .collect();
    let errors = jobs
        .par_iter()
        .map(|&(m, r, d)| {
            let (tableau, tau, dt) = (&methods[m], cfg.sweep.taus[r], cfg.sweep.dts[d]);
            let run = || -> Result<[f64; 3]> {
                let mut cache = StageSolverCache::for_kdvh(&ops, tau, cfg.backend)?;
                let opts = MarchOptions {
                    dt,
                    t_final: cfg.t_final,
                    relaxation: false,
                };
                let (q, _) =
                    integrate_kdvh(tableau, &ops, targets[r].0.clone(), opts, &mut cache, |_, _| Ok(()))?;
                Ok(component_errors(&ops, &q, &targets[r].1))
            };
            run().context(|| format!("{} at τ = {tau:e}, Δt = {dt}", tableau.name))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut curves = Vec::new();
    for (m, tableau) in methods.iter().enumerate() {
        for (r, &tau) in cfg.sweep.taus.iter().enumerate() {
            let mut errs: [Vec<f64>; 3] = Default::default();
            for (job, e) in jobs.iter().zip(&errors) {
                if job.0 == m && job.1 == r {
                    (0..3).for_each(|k| errs[k].push(e[k]));
                }
            }
            let slopes = [0, 1, 2].map(|k| loglog_slope(&cfg.sweep.dts, &errs[k]));
            curves.push(AaCurve {
                method: tableau.name.clone(),
                tau,
                dts: cfg.sweep.dts.clone(),
                errors: errs,
                slopes,
            });
        }
    }
    Ok(AaStudy {
        curves,
        reference_residuals: cfg.sweep.taus.iter().copied().zip(references.iter().map(|r| r.residual)).collect(),
    })
}

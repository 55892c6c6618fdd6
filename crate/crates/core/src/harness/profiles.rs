//! Solitary-wave profiles and phase portraits as plot data.

use serde::Serialize;

use super::config::RunConfig;
use super::output::{Cell, Table};
use crate::error::{Result, ResultExt};
use crate::model::{kdv_soliton, SolitonParams};
use crate::sbp::{make_fourier_operator, make_grid};
use crate::waves::{
    auxiliary_fields, classify_equilibria, homoclinic_peak, integrate_orbit, launch_from_origin,
    petviashvili_solve, sample_field, tw_constraint_residual, EquilibriumReport, FieldSample,
    OrbitClass, OrbitConfig, OrbitResult, PhasePoint, TravelingWaveParams,
};

#[derive(Debug, Clone, Serialize)]
pub struct SolitaryProfile {
    /// `0` for the KdV limit.
    pub tau: f64,
    #[serde(skip)]
    pub u: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
    pub peak: f64,
    /// `max |u - η|` against the KdV soliton of the same speed.
    pub distance_to_soliton: f64,
    /// M-norms of the two traveling-wave constraint residuals.
    pub constraints: (f64, f64),
}

#[derive(Debug, Clone, Serialize)]
pub struct SolitaryWaves {
    pub c: f64,
    #[serde(skip)]
    pub x: Vec<f64>,
    #[serde(skip)]
    pub soliton: Vec<f64>,
    pub limit: SolitaryProfile,
    pub profiles: Vec<SolitaryProfile>,
}

impl SolitaryWaves {
    pub fn table(&self) -> Table {
        let mut cols = vec!["x".to_string(), "kdv_soliton".into(), "tau_0".into()];
        cols.extend(self.profiles.iter().map(|p| format!("tau_{}", p.tau)));
        let mut t = Table {
            columns: cols,
            rows: Vec::new(),
        };
        for i in 0..self.x.len() {
            let mut row: Vec<Cell> = vec![self.x[i].into(), self.soliton[i].into(), self.limit.u[i].into()];
            row.extend(self.profiles.iter().map(|p| Cell::from(p.u[i])));
            t.push(row);
        }
        t
    }

    /// Distances to the soliton shrink as τ decreases along `profiles`.
    pub fn monotone_towards_soliton(&self) -> bool {
        self.profiles
            .windows(2)
            .all(|w| (w[1].tau < w[0].tau) == (w[1].distance_to_soliton < w[0].distance_to_soliton))
    }
}

/// Petviashvili profiles of speed `cfg.wave.c` for the KdV limit and every τ
/// of the sweep, on the configured interval with Fourier derivatives.
pub fn solitary_waves(cfg: &RunConfig) -> Result<SolitaryWaves> {
    let grid = make_grid(cfg.grid.x_left, cfg.grid.x_right, cfg.grid.n)?;
    let ops = make_fourier_operator(&grid)?;
    let c = cfg.wave.c;
    let sol = SolitonParams::new(c)?;
    let x = grid.nodes();
    let soliton = kdv_soliton(&sol, &x, 0.0);
    // a Gaussian of the soliton's height and width, so every profile is found
    // by the iteration rather than handed to it
    let k = (9.0 * c).sqrt() / 6.0;
    let guess: Vec<f64> = x.iter().map(|x| 3.0 * c * (-(k * x).powi(2)).exp()).collect();
    let solve = |params: TravelingWaveParams| -> Result<SolitaryProfile> {
        let r = petviashvili_solve(&grid, &params, &guess, cfg.wave.tol, cfg.wave.max_iter)
            .context(|| format!("solitary wave at τ = {}", params.tau()))?;
        let (v, w) = auxiliary_fields(&ops, &params, &r.profile)?;
        let constraints = tw_constraint_residual(&ops, &params, &r.profile, &v, &w)?;
        let distance = r.profile.iter().zip(&soliton).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        Ok(SolitaryProfile {
            tau: params.tau(),
            peak: r.profile.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            residual: r.residual(),
            iterations: r.iterations(),
            distance_to_soliton: distance,
            constraints,
            u: r.profile,
        })
    };
    let limit = solve(TravelingWaveParams::kdv_limit(c)?)?;
    let profiles = cfg
        .sweep
        .taus
        .iter()
        .map(|&tau| solve(TravelingWaveParams::new(c, tau)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(SolitaryWaves {
        c,
        x,
        soliton,
        limit,
        profiles,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct LabeledOrbit {
    pub label: String,
    pub start: PhasePoint,
    #[serde(flatten)]
    pub orbit: OrbitSummary,
    #[serde(skip)]
    pub samples: Vec<(f64, f64, f64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitSummary {
    pub classification: OrbitClass,
    pub h_drift: f64,
    pub length: f64,
    pub max_u: f64,
    pub min_u: f64,
}

impl LabeledOrbit {
    fn new(label: String, start: PhasePoint, r: OrbitResult) -> Self {
        Self {
            label,
            start,
            orbit: OrbitSummary {
                classification: r.classification,
                h_drift: r.h_drift,
                length: r.length(),
                max_u: r.max_u(),
                min_u: r.min_u(),
            },
            samples: r.samples,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PhasePortrait {
    pub params: TravelingWaveParams,
    pub equilibria: EquilibriumReport,
    pub singular_u: Option<f64>,
    pub homoclinic_peak: Option<f64>,
    #[serde(skip)]
    pub field: Vec<FieldSample>,
    pub orbits: Vec<LabeledOrbit>,
}

impl PhasePortrait {
    pub fn field_table(&self) -> Table {
        let mut t = Table::new(&["u", "v", "du", "dv", "h", "singular"]);
        for f in &self.field {
            t.push(vec![
                f.u_tilde.into(),
                f.v_tilde.into(),
                f.du.into(),
                f.dv.into(),
                f.h.into(),
                f.singular.into(),
            ]);
        }
        t
    }

    pub fn orbit_table(&self) -> Table {
        let mut t = Table::new(&["orbit", "xi", "u", "v"]);
        for o in &self.orbits {
            for s in &o.samples {
                t.push(vec![o.label.as_str().into(), s.0.into(), s.1.into(), s.2.into()]);
            }
        }
        t
    }
}

/// Vector field on a lattice, the unstable manifold of the origin (when it
/// is a saddle) and a few orbits around the crest equilibrium `(2c, 0)`.
pub fn phase_portrait(cfg: &RunConfig) -> Result<PhasePortrait> {
    let p = TravelingWaveParams::new(cfg.wave.c, cfg.tau)?;
    let w = &cfg.wave;
    let field = sample_field(
        &p,
        (w.u_range[0], w.u_range[1]),
        (w.v_range[0], w.v_range[1]),
        w.samples[0],
        w.samples[1],
    );
    let config = OrbitConfig::default();
    let mut orbits = Vec::new();
    if let Some(branches) = launch_from_origin(&p, w.epsilon, &config) {
        let [plus, minus] = branches?;
        for (label, r) in [("unstable_plus", plus), ("unstable_minus", minus)] {
            let start = PhasePoint::new(r.samples[0].1, r.samples[0].2);
            orbits.push(LabeledOrbit::new(label.into(), start, r));
        }
    }
    let crest = 2.0 * p.c();
    let reach = match homoclinic_peak(&p) {
        Some(peak) if (peak - crest) * crest > 0.0 => peak - crest,
        _ => 0.5 * crest,
    };
    for (k, f) in [0.25, 0.5, 0.75].into_iter().enumerate() {
        let start = PhasePoint::new(crest + f * reach, 0.0);
        if p.singular_distance(start) > 1e-6 {
            let r = integrate_orbit(&p, start, &config)?;
            orbits.push(LabeledOrbit::new(format!("crest_{k}"), start, r));
        }
    }
    Ok(PhasePortrait {
        params: p,
        equilibria: classify_equilibria(&p),
        singular_u: p.singular_u(),
        homoclinic_peak: homoclinic_peak(&p),
        field,
        orbits,
    })
}

//! Run configuration: per-experiment presets overlaid by a TOML file.

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::imex::{find_method, ImexTableau, SolverBackend};
use crate::sbp::{make_fourier_operator, make_grid, make_upwind_operators, OperatorKind, OperatorSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Kdv,
    Kdvh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    OperatorsCheck,
    Solve,
    ApTable,
    AaStudy,
    ErrorGrowth,
    SolitaryWave,
    PhasePortrait,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::OperatorsCheck,
        Experiment::Solve,
        Experiment::ApTable,
        Experiment::AaStudy,
        Experiment::ErrorGrowth,
        Experiment::SolitaryWave,
        Experiment::PhasePortrait,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::OperatorsCheck => "operators-check",
            Experiment::Solve => "solve",
            Experiment::ApTable => "ap-table",
            Experiment::AaStudy => "aa-study",
            Experiment::ErrorGrowth => "error-growth",
            Experiment::SolitaryWave => "solitary-wave",
            Experiment::PhasePortrait => "phase-portrait",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub x_left: f64,
    pub x_right: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSpec {
    pub kind: OperatorKind,
    /// Accuracy order of the upwind operators; ignored for Fourier.
    pub order: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialKind {
    /// KdV soliton with well-prepared auxiliaries.
    Soliton,
    /// Numerical KdVH solitary wave (Petviashvili iteration).
    Petviashvili,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSpec {
    pub kind: InitialKind,
    /// Soliton amplitude `A`; the speed is `A/3`.
    pub amplitude: f64,
    pub x0: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub taus: Vec<f64>,
    pub dts: Vec<f64>,
    pub methods: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveSpec {
    pub c: f64,
    pub tol: f64,
    pub max_iter: usize,
    /// Points of the fine grid used for reference profiles.
    pub reference_n: usize,
    pub u_range: [f64; 2],
    pub v_range: [f64; 2],
    pub samples: [usize; 2],
    /// Offset from the saddle when launching its unstable manifold.
    pub epsilon: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub name: String,
    pub model: Model,
    pub method: String,
    pub tau: f64,
    pub dt: f64,
    pub t_final: f64,
    pub relaxation: bool,
    pub backend: SolverBackend,
    /// Keep every `record_every`-th step in time series output.
    pub record_every: usize,
    pub out: PathBuf,
    pub grid: GridSpec,
    pub operator: OperatorSpec,
    pub initial: InitialSpec,
    pub sweep: SweepSpec,
    pub wave: WaveSpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self::preset(Experiment::Solve)
    }
}

impl RunConfig {
    /// Settings of the corresponding experiment in the paper.
    pub fn preset(experiment: Experiment) -> Self {
        let mut cfg = Self {
            name: experiment.name().replace('-', "_"),
            model: Model::Kdvh,
            method: "ARS(2,2,2)".into(),
            tau: 1e-5,
            dt: 0.005,
            t_final: 16.67,
            relaxation: false,
            backend: SolverBackend::Auto,
            record_every: 1,
            out: PathBuf::from("out"),
            grid: GridSpec {
                x_left: -40.0,
                x_right: 40.0,
                n: 1024,
            },
            operator: OperatorSpec {
                kind: OperatorKind::UpwindFd,
                order: 8,
            },
            initial: InitialSpec {
                kind: InitialKind::Soliton,
                // speed 1.2: the wave covers a quarter of [-40, 40] by t = 16.67
                amplitude: 3.6,
                x0: 0.0,
            },
            sweep: SweepSpec {
                taus: vec![1e-1, 1e-3, 1e-5, 1e-7, 1e-9],
                dts: vec![0.04, 0.02, 0.01, 0.005, 0.0025],
                methods: vec!["ARS(2,2,2)".into()],
            },
            wave: WaveSpec {
                c: 1.0 / 3.0,
                tol: 1e-12,
                max_iter: crate::waves::DEFAULT_MAX_ITER,
                reference_n: 2048,
                u_range: [-2.0, 4.0],
                v_range: [-2.5, 2.5],
                samples: [41, 41],
                epsilon: 1e-8,
            },
        };
        match experiment {
            Experiment::OperatorsCheck => {
                cfg.grid.n = 64;
            }
            Experiment::Solve | Experiment::ApTable => {}
            Experiment::AaStudy => {
                cfg.t_final = 4.8;
                cfg.initial.kind = InitialKind::Petviashvili;
                // absolute residual; rounding in D² on 2^11 points floors it near 3e-12
                cfg.wave.tol = 1e-11;
                cfg.sweep.taus = vec![1e-5, 1e-9];
                cfg.sweep.methods = ["AGSA(3,4,2)", "SSP3-ImEx(3,4,3)", "ARS(2,2,2)", "ARK3(2)4L[2]SA"]
                    .map(String::from)
                    .to_vec();
            }
            Experiment::ErrorGrowth => {
                cfg.method = "ARS(4,4,3)".into();
                cfg.grid.n = 256;
                cfg.dt = 0.05;
                cfg.t_final = 333.34;
                cfg.tau = 1e-6;
                cfg.sweep.taus = vec![1e-3, 1e-4, 1e-5, 1e-6];
                cfg.sweep.methods = vec!["ARS(4,4,3)".into()];
                cfg.record_every = 1;
            }
            Experiment::SolitaryWave => {
                cfg.grid = GridSpec {
                    x_left: -30.0 * PI,
                    x_right: 30.0 * PI,
                    n: 512,
                };
                cfg.operator.kind = OperatorKind::Fourier;
                cfg.sweep.taus = vec![1.0, 0.5, 0.1];
                cfg.wave.tol = 5e-13;
            }
            Experiment::PhasePortrait => {
                cfg.wave.c = 1.0;
                cfg.tau = 0.4;
            }
        }
        cfg
    }

    /// Preset overlaid by the keys present in `toml_text`.
    pub fn from_toml(experiment: Experiment, toml_text: &str) -> Result<Self> {
        let overlay: toml::Table = toml_text.parse()?;
        let mut base = toml::Table::try_from(Self::preset(experiment))
            .map_err(|e| Error::Config(e.to_string()))?;
        merge(&mut base, overlay);
        let cfg: Self = toml::Value::Table(base)
            .try_into()
            .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return bad(format!("invalid run name `{}`", self.name));
        }
        find_method(&self.method)?;
        for m in &self.sweep.methods {
            find_method(m)?;
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return bad(format!("t_final must be positive, got {}", self.t_final));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return bad(format!("tau must be positive, got {}", self.tau));
        }
        if self.sweep.taus.iter().chain(&self.sweep.dts).any(|x| !(*x > 0.0 && x.is_finite())) {
            return bad("sweep values must be positive".into());
        }
        if self.record_every == 0 {
            return bad("record_every must be at least 1".into());
        }
        if !(self.initial.amplitude > 0.0) {
            return bad(format!("soliton amplitude must be positive, got {}", self.initial.amplitude));
        }
        self.operators().map(|_| ())
    }

    pub fn tableau(&self) -> Result<ImexTableau> {
        find_method(&self.method)
    }

    pub fn operators(&self) -> Result<OperatorSet> {
        self.operators_on(self.grid.n)
    }

    /// Operators of the configured kind on the configured interval with `n` points.
    pub fn operators_on(&self, n: usize) -> Result<OperatorSet> {
        let grid = make_grid(self.grid.x_left, self.grid.x_right, n)?;
        match self.operator.kind {
            OperatorKind::UpwindFd => make_upwind_operators(&grid, self.operator.order),
            OperatorKind::Fourier => make_fourier_operator(&grid),
        }
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("configuration serializes");
        Sha256::digest(json.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }
}

fn merge(base: &mut toml::Table, overlay: toml::Table) {
    for (key, value) in overlay {
        match (base.get_mut(&key), value) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge(b, o),
            (_, v) => {
                base.insert(key, v);
            }
        }
    }
}

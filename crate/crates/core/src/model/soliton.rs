use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sbp::PeriodicGrid;

/// KdV soliton `η = 3c sech²(√(9c)(x - ct)/6)`, amplitude `A = 3c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolitonParams {
    c: f64,
}

impl SolitonParams {
    pub fn new(c: f64) -> Result<Self> {
        if c > 0.0 && c.is_finite() {
            Ok(Self { c })
        } else {
            Err(Error::InvalidSpeed(c))
        }
    }

    /// Amplitude parametrization `A sech²(√(3A)(x - ct)/6)` with `c = A/3`.
    pub fn from_amplitude(a: f64) -> Result<Self> {
        Self::new(a / 3.0)
    }

    pub fn speed(&self) -> f64 {
        self.c
    }

    pub fn amplitude(&self) -> f64 {
        3.0 * self.c
    }

    /// Inverse width `√(9c)/6`.
    fn k(&self) -> f64 {
        (9.0 * self.c).sqrt() / 6.0
    }

    /// Profile and its first two derivatives at `ξ = x - ct`.
    pub fn profile(&self, xi: f64) -> [f64; 3] {
        let k = self.k();
        let a = self.amplitude();
        let z = k * xi;
        let sech2 = sech_squared(z);
        let th = z.tanh();
        [
            a * sech2,
            -2.0 * a * k * sech2 * th,
            2.0 * a * k * k * sech2 * (2.0 * th * th - sech2),
        ]
    }
}

fn sech_squared(z: f64) -> f64 {
    let e = (-2.0 * z.abs()).exp();
    4.0 * e / ((1.0 + e) * (1.0 + e))
}

/// Pointwise soliton values at time `t` on the real line.
pub fn kdv_soliton(p: &SolitonParams, x: &[f64], t: f64) -> Vec<f64> {
    x.iter().map(|&x| p.profile(x - p.speed() * t)[0]).collect()
}

/// Soliton centred at `x0` at `t = 0`, translated periodically on `grid`.
///
/// The distance `x - x0 - ct` is wrapped into `[-L/2, L/2)`, so the profile
/// is evaluated at the nearest periodic image.
pub fn kdv_soliton_periodic(
    p: &SolitonParams,
    grid: &PeriodicGrid,
    x0: f64,
    t: f64,
) -> [Vec<f64>; 3] {
    let len = grid.length();
    let mut out = [
        Vec::with_capacity(grid.len()),
        Vec::with_capacity(grid.len()),
        Vec::with_capacity(grid.len()),
    ];
    for x in grid.nodes() {
        let xi = x - x0 - p.speed() * t;
        let xi = xi - len * (xi / len).round();
        let [e, ex, exx] = p.profile(xi);
        out[0].push(e);
        out[1].push(ex);
        out[2].push(exx);
    }
    out
}

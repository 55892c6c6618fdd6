//! Phase-plane analysis of the traveling-wave ODE
//!
//! ```text
//! ũ' = ṽ / (1 + cτ(ũ - c)),   ṽ' = (c - ũ/2) ũ / (1 + cτ)
//! ```

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Proximity to the singular line `1 + cτ(ũ - c) = 0`, measured in `ũ`.
pub const SINGULAR_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TravelingWaveParams {
    c: f64,
    tau: f64,
    alpha: f64,
}

impl TravelingWaveParams {
    pub fn new(c: f64, tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidTau(tau));
        }
        Self::checked(c, tau)
    }

    /// The `τ = 0` limit, in which the profile equation is the KdV one.
    pub fn kdv_limit(c: f64) -> Result<Self> {
        Self::checked(c, 0.0)
    }

    fn checked(c: f64, tau: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::InvalidSpeed(c));
        }
        if 1.0 + c * tau == 0.0 {
            return Err(Error::TravelingWave(format!("1 + cτ = 0 for c = {c}, τ = {tau}")));
        }
        Ok(Self {
            c,
            tau,
            alpha: c * tau,
        })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// `α = cτ`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `1 + cτ(ũ - c)`.
    pub fn denominator(&self, u: f64) -> f64 {
        1.0 + self.alpha * (u - self.c)
    }

    /// `ũ` on the singular line, if there is one.
    pub fn singular_u(&self) -> Option<f64> {
        (self.alpha != 0.0).then(|| self.c - 1.0 / self.alpha)
    }

    /// Distance in `ũ` to the singular line (`∞` if there is none).
    pub fn singular_distance(&self, pt: PhasePoint) -> f64 {
        self.singular_u()
            .map_or(f64::INFINITY, |us| (pt.u_tilde - us).abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub u_tilde: f64,
    pub v_tilde: f64,
}

impl PhasePoint {
    pub fn new(u_tilde: f64, v_tilde: f64) -> Self {
        Self { u_tilde, v_tilde }
    }

    fn dist(self, o: PhasePoint) -> f64 {
        (self.u_tilde - o.u_tilde).hypot(self.v_tilde - o.v_tilde)
    }
}

pub fn tw_vector_field(p: &TravelingWaveParams, pt: PhasePoint) -> Result<(f64, f64)> {
    if p.singular_distance(pt) <= SINGULAR_TOL {
        return Err(Error::TravelingWave(format!(
            "point ({}, {}) is on the singular line",
            pt.u_tilde, pt.v_tilde
        )));
    }
    let u = pt.u_tilde;
    Ok((
        pt.v_tilde / p.denominator(u),
        (p.c - 0.5 * u) * u / (1.0 + p.alpha),
    ))
}

/// `H(ũ, ṽ) = ṽ²/2 - ũ²/(1+cτ) (-cτ/8 ũ² + (3c²τ - 1)/6 ũ + c(1 - c²τ)/2)`.
pub fn first_integral(p: &TravelingWaveParams, pt: PhasePoint) -> f64 {
    let (c, tau, u) = (p.c, p.tau, pt.u_tilde);
    let poly = -c * tau / 8.0 * u * u + (3.0 * c * c * tau - 1.0) / 6.0 * u
        + c * (1.0 - c * c * tau) / 2.0;
    0.5 * pt.v_tilde * pt.v_tilde - u * u / (1.0 + c * tau) * poly
}

/// Jacobian of the vector field at a point with `ṽ = 0`.
fn jacobian(p: &TravelingWaveParams, u: f64) -> Matrix2<f64> {
    Matrix2::new(
        0.0,
        1.0 / p.denominator(u),
        (p.c - u) / (1.0 + p.alpha),
        0.0,
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct Equilibrium {
    pub point: PhasePoint,
    pub eigenvalues: [(f64, f64); 2],
    /// Real eigenvalues of opposite sign.
    pub saddle: bool,
    /// Purely imaginary eigenvalues.
    pub center: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquilibriumReport {
    pub origin: Equilibrium,
    pub crest: Equilibrium,
}

fn equilibrium(p: &TravelingWaveParams, u: f64) -> Equilibrium {
    let j = jacobian(p, u);
    let ev = j.complex_eigenvalues();
    let scale = ev.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let is_real = |z: &Complex64| z.im.abs() <= 1e-12 * scale;
    let saddle = ev.iter().all(is_real) && ev[0].re * ev[1].re < 0.0;
    let center = ev.iter().all(|z| z.re.abs() <= 1e-12 * scale && z.im != 0.0);
    Equilibrium {
        point: PhasePoint::new(u, 0.0),
        eigenvalues: [(ev[0].re, ev[0].im), (ev[1].re, ev[1].im)],
        saddle,
        center,
    }
}

/// Eigen-analysis at `(0, 0)` and `(2c, 0)`.
pub fn classify_equilibria(p: &TravelingWaveParams) -> EquilibriumReport {
    EquilibriumReport {
        origin: equilibrium(p, 0.0),
        crest: equilibrium(p, 2.0 * p.c),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitClass {
    Homoclinic,
    Periodic,
    SingularHit,
    Escaped,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitResult {
    /// `(ξ, ũ, ṽ)` after every accepted step.
    pub samples: Vec<(f64, f64, f64)>,
    pub classification: OrbitClass,
    /// `max |H - H₀|` along the orbit.
    pub h_drift: f64,
}

impl OrbitResult {
    pub fn max_u(&self) -> f64 {
        self.samples.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_u(&self) -> f64 {
        self.samples.iter().map(|s| s.1).fold(f64::INFINITY, f64::min)
    }

    pub fn length(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitConfig {
    pub initial_step: f64,
    pub max_step: f64,
    pub min_step: f64,
    /// Accepted change of `H` per step.
    pub h_tol: f64,
    pub max_length: f64,
    pub escape_radius: f64,
    pub max_steps: usize,
    /// Equilibrium the orbit was launched from, enabling homoclinic detection.
    pub saddle: Option<PhasePoint>,
}

impl Default for OrbitConfig {
    fn default() -> Self {
        Self {
            initial_step: 1e-2,
            max_step: 2e-2,
            min_step: 1e-14,
            h_tol: 1e-14,
            max_length: 500.0,
            escape_radius: 1e3,
            max_steps: 5_000_000,
            saddle: None,
        }
    }
}

fn rk4(p: &TravelingWaveParams, x: PhasePoint, h: f64) -> Result<PhasePoint> {
    let add = |x: PhasePoint, k: (f64, f64), s: f64| {
        PhasePoint::new(x.u_tilde + s * k.0, x.v_tilde + s * k.1)
    };
    let k1 = tw_vector_field(p, x)?;
    let k2 = tw_vector_field(p, add(x, k1, 0.5 * h))?;
    let k3 = tw_vector_field(p, add(x, k2, 0.5 * h))?;
    let k4 = tw_vector_field(p, add(x, k3, h))?;
    Ok(PhasePoint::new(
        x.u_tilde + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
        x.v_tilde + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
    ))
}

/// Classical RK4 in `ξ` with the step size controlled by the per-step change
/// of the first integral; never steps across the singular line.
pub fn integrate_orbit(
    p: &TravelingWaveParams,
    start: PhasePoint,
    config: &OrbitConfig,
) -> Result<OrbitResult> {
    if p.singular_distance(start) <= SINGULAR_TOL {
        return Err(Error::TravelingWave("orbit starts on the singular line".into()));
    }
    let h0 = first_integral(p, start);
    let direction = {
        let f = tw_vector_field(p, start)?;
        let norm = f.0.hypot(f.1);
        if norm == 0.0 {
            return Err(Error::TravelingWave("orbit starts at an equilibrium".into()));
        }
        (f.0 / norm, f.1 / norm)
    };
    let section = |x: PhasePoint| {
        (x.u_tilde - start.u_tilde) * direction.0 + (x.v_tilde - start.v_tilde) * direction.1
    };

    let mut samples = vec![(0.0, start.u_tilde, start.v_tilde)];
    let (mut x, mut xi, mut h) = (start, 0.0, config.initial_step);
    let mut drift = 0.0f64;
    let mut farthest = 0.0f64;
    let mut prev_section = 0.0;
    let classification = loop {
        if samples.len() > config.max_steps || xi >= config.max_length {
            break OrbitClass::Escaped;
        }
        let trial = rk4(p, x, h).ok().filter(|y| {
            p.singular_distance(*y) > SINGULAR_TOL
                && (first_integral(p, *y) - first_integral(p, x)).abs() <= config.h_tol
        });
        let Some(y) = trial else {
            h *= 0.5;
            if h < config.min_step {
                break OrbitClass::SingularHit;
            }
            continue;
        };
        let dh = (first_integral(p, y) - first_integral(p, x)).abs();
        x = y;
        xi += h;
        samples.push((xi, x.u_tilde, x.v_tilde));
        drift = drift.max((first_integral(p, x) - h0).abs());
        if dh < config.h_tol / 64.0 {
            h = (1.5 * h).min(config.max_step);
        }

        if x.u_tilde.abs().max(x.v_tilde.abs()) > config.escape_radius {
            break OrbitClass::Escaped;
        }
        let from_start = x.dist(start);
        farthest = farthest.max(from_start);
        if let Some(s) = config.saddle {
            // back at the saddle after an excursion
            if farthest > 1e-2 && x.dist(s) < 1e-6 {
                break OrbitClass::Homoclinic;
            }
        } else {
            let sec = section(x);
            if farthest > 1e-3 && prev_section < 0.0 && sec >= 0.0 && from_start < 0.05 * farthest {
                break OrbitClass::Periodic;
            }
            prev_section = sec;
        }
    };
    Ok(OrbitResult {
        samples,
        classification,
        h_drift: drift,
    })
}

/// Orbits leaving the origin along both branches of its unstable manifold,
/// offset by `epsilon`; `None` when the origin is not a saddle.
pub fn launch_from_origin(
    p: &TravelingWaveParams,
    epsilon: f64,
    config: &OrbitConfig,
) -> Option<Result<[OrbitResult; 2]>> {
    let report = classify_equilibria(p);
    if !report.origin.saddle {
        return None;
    }
    let lambda = report
        .origin
        .eigenvalues
        .iter()
        .map(|e| e.0)
        .fold(f64::NEG_INFINITY, f64::max);
    // J e = λ e with J = [[0, a], [b, 0]] gives e ∝ (a, λ)
    let a = 1.0 / p.denominator(0.0);
    let norm = a.hypot(lambda);
    let e = (a / norm, lambda / norm);
    let cfg = OrbitConfig {
        saddle: Some(PhasePoint::new(0.0, 0.0)),
        ..*config
    };
    let run = |s: f64| integrate_orbit(p, PhasePoint::new(s * epsilon * e.0, s * epsilon * e.1), &cfg);
    Some(run(1.0).and_then(|plus| Ok([plus, run(-1.0)?])))
}

/// Nonzero root of `H(ũ, 0) = 0` nearest to the crest side, i.e. the peak of
/// the solitary wave.
pub fn homoclinic_peak(p: &TravelingWaveParams) -> Option<f64> {
    let (c, tau) = (p.c, p.tau);
    let (a, b, k) = (-c * tau / 8.0, (3.0 * c * c * tau - 1.0) / 6.0, c * (1.0 - c * c * tau) / 2.0);
    if a == 0.0 {
        return (b != 0.0).then(|| -k / b);
    }
    let disc = b * b - 4.0 * a * k;
    if disc < 0.0 {
        return None;
    }
    let roots = [(-b + disc.sqrt()) / (2.0 * a), (-b - disc.sqrt()) / (2.0 * a)];
    roots
        .into_iter()
        .filter(|r| r.signum() == c.signum())
        .min_by(|x, y| x.abs().total_cmp(&y.abs()))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct FieldSample {
    pub u_tilde: f64,
    pub v_tilde: f64,
    pub du: f64,
    pub dv: f64,
    pub h: f64,
    pub singular: bool,
}

/// The vector field and first integral on a `nu × nv` lattice (for plotting).
pub fn sample_field(
    p: &TravelingWaveParams,
    u_range: (f64, f64),
    v_range: (f64, f64),
    nu: usize,
    nv: usize,
) -> Vec<FieldSample> {
    let lin = |r: (f64, f64), m: usize, i: usize| {
        if m <= 1 {
            r.0
        } else {
            r.0 + (r.1 - r.0) * i as f64 / (m - 1) as f64
        }
    };
    let mut out = Vec::with_capacity(nu * nv);
    for i in 0..nu {
        for j in 0..nv {
            let pt = PhasePoint::new(lin(u_range, nu, i), lin(v_range, nv, j));
            let (du, dv, singular) = match tw_vector_field(p, pt) {
                Ok((du, dv)) => (du, dv, false),
                Err(_) => (f64::NAN, f64::NAN, true),
            };
            out.push(FieldSample {
                u_tilde: pt.u_tilde,
                v_tilde: pt.v_tilde,
                du,
                dv,
                h: first_integral(p, pt),
                singular,
            });
        }
    }
    out
}

/// Comparison shape `(5/3)√sech(5x/3) - 1` for the left-going solitary wave
/// at `τ = 1`, `c = -1/2`; close to, but not exactly, a traveling wave.
pub fn sqrt_sech_profile(x: f64) -> f64 {
    5.0 / 3.0 * (1.0 / (5.0 * x / 3.0).cosh()).sqrt() - 1.0
}

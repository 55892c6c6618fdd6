//! Machine check of the periodic SBP identities for an operator set.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::operators::{OperatorKind, OperatorSet};

/// Relative tolerance for the matrix identities.
pub const IDENTITY_TOL: f64 = 1e-13;
/// Relative tolerance for the probe-vector forms.
pub const PROBE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub kind: OperatorKind,
    pub accuracy_order: usize,
    pub n: usize,
    pub dx: f64,
    /// `max |M D + Dᵀ M| / max |D|`.
    pub central_skew: f64,
    /// `max |M D₊ + D₋ᵀ M| / max |D₊|`.
    pub upwind_pair: f64,
    /// Largest eigenvalue of `½ M (D₊ - D₋)` relative to `dx · max |D₊|`; must be ≤ 0 up to roundoff.
    pub dissipation_max_eig: f64,
    /// `max |D₊ 𝟙|, max |D₋ 𝟙|, max |D 𝟙|`, scaled by `dx`.
    pub consistency: [f64; 3],
    /// Worst probe value of `|wᵀ(MD + DᵀM)v| / (‖v‖‖w‖)` and the upwind analogue.
    pub probe_bilinear: f64,
    /// Worst probe value of `|vᵀ M D v| / ‖v‖²`.
    pub probe_skew: f64,
    /// Worst probe value of `vᵀ M (D₊ - D₋) v / ‖v‖²` (should be ≤ 0).
    pub probe_dissipation: f64,
    pub passed: bool,
}

/// Small deterministic generator for probe vectors.
struct Probe(u64);

impl Probe {
    fn next_f64(&mut self) -> f64 {
        // splitmix64
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        (z >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    }

    fn vector(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.next_f64()).collect()
    }
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, x| a.max(x.abs()))
}

/// Evaluates every SBP identity residual with dense matrices and `probes` random vectors.
pub fn check_identities(ops: &OperatorSet, probes: usize) -> IdentityReport {
    let n = ops.len();
    let dx = ops.grid().dx();
    let m = DMatrix::from_diagonal(&DVector::from_column_slice(ops.norm_weights()));
    let dp = ops.d_plus().dense();
    let dm = ops.d_minus().dense();
    let d = ops.d_central().dense();

    let dmax = max_abs(&d).max(f64::MIN_POSITIVE);
    let dpmax = max_abs(&dp).max(f64::MIN_POSITIVE);
    let central_skew = max_abs(&(&m * &d + d.transpose() * &m)) / (dx * dmax);
    let upwind_pair = max_abs(&(&m * &dp + dm.transpose() * &m)) / (dx * dpmax);

    let diss = (&m * (&dp - &dm)) * 0.5;
    let diss_sym = (&diss + diss.transpose()) * 0.5;
    let dissipation_max_eig = diss_sym.symmetric_eigenvalues().max() / (dx * dpmax);

    let ones = vec![1.0; n];
    let cons = |op: &super::Circulant| {
        op.apply(&ones)
            .expect("length matches")
            .iter()
            .fold(0.0_f64, |a, x| a.max(x.abs()))
            * dx
    };
    let consistency = [cons(ops.d_plus()), cons(ops.d_minus()), cons(ops.d_central())];

    let mut gen = Probe(0x5EED ^ n as u64);
    let mut probe_bilinear = 0.0_f64;
    let mut probe_skew = 0.0_f64;
    let mut probe_dissipation = f64::NEG_INFINITY;
    for _ in 0..probes {
        let v = gen.vector(n);
        let w = gen.vector(n);
        let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let nw = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        let apply = |op: &super::Circulant, x: &[f64]| op.apply(x).expect("length matches");
        let dv = apply(ops.d_central(), &v);
        let dw = apply(ops.d_central(), &w);
        let dpv = apply(ops.d_plus(), &v);
        let dmw = apply(ops.d_minus(), &w);
        let dmv = apply(ops.d_minus(), &v);
        // wᵀ M D v + (D w)ᵀ M v
        let b1 = (ops.inner(&w, &dv) + ops.inner(&dw, &v)).abs() / (dx * dmax * nv * nw);
        // wᵀ M D₊ v + (D₋ w)ᵀ M v
        let b2 = (ops.inner(&w, &dpv) + ops.inner(&dmw, &v)).abs() / (dx * dpmax * nv * nw);
        probe_bilinear = probe_bilinear.max(b1).max(b2);
        probe_skew = probe_skew.max(ops.inner(&v, &dv).abs() / (dx * dmax * nv * nv));
        let diff: Vec<f64> = dpv.iter().zip(&dmv).map(|(a, b)| a - b).collect();
        probe_dissipation = probe_dissipation.max(ops.inner(&v, &diff) / (dx * dpmax * nv * nv));
    }
    if probes == 0 {
        probe_dissipation = 0.0;
    }

    let passed = central_skew <= IDENTITY_TOL
        && upwind_pair <= IDENTITY_TOL
        && dissipation_max_eig <= PROBE_TOL
        && consistency.iter().all(|&c| c <= PROBE_TOL)
        && probe_bilinear <= PROBE_TOL
        && probe_skew <= PROBE_TOL
        && probe_dissipation <= PROBE_TOL;

    IdentityReport {
        kind: ops.kind(),
        accuracy_order: ops.accuracy_order(),
        n,
        dx,
        central_skew,
        upwind_pair,
        dissipation_max_eig,
        consistency,
        probe_bilinear,
        probe_skew,
        probe_dissipation,
        passed,
    }
}

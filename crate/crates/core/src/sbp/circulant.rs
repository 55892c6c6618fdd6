//! Periodic (circulant) linear operators.
//!
//! Finite difference operators are stored as a stencil: `(A v)_i = Σ_k c_k v_{i + offset + k}`
//! with indices taken modulo `n`. Pseudospectral operators are stored by their
//! eigenvalues on the discrete Fourier modes and applied with an FFT.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{check_len, Result};

/// Forward/inverse complex FFT plans of a fixed length.
pub struct FftPlan {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl FftPlan {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `V_k = Σ_j v_j exp(-2πi jk/n)`.
    pub fn forward_real(&self, v: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.forward.process(&mut buf);
        buf
    }

    pub fn forward(&self, buf: &mut [Complex64]) {
        self.forward.process(buf);
    }

    /// Normalized inverse transform, in place.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.inverse.process(buf);
        let scale = 1.0 / self.n as f64;
        for z in buf.iter_mut() {
            *z *= scale;
        }
    }

    /// Normalized inverse transform keeping the real part.
    pub fn inverse_real(&self, mut buf: Vec<Complex64>) -> Vec<f64> {
        self.inverse(&mut buf);
        buf.into_iter().map(|z| z.re).collect()
    }
}

impl fmt::Debug for FftPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FftPlan").field("n", &self.n).finish()
    }
}

#[derive(Clone)]
enum Repr {
    Stencil { offset: isize, coeffs: Vec<f64> },
    Spectral { symbol: Arc<Vec<Complex64>>, plan: Arc<FftPlan> },
}

/// A real circulant `n × n` operator.
#[derive(Clone)]
pub struct Circulant {
    n: usize,
    repr: Repr,
}

impl fmt::Debug for Circulant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Stencil { offset, coeffs } => f
                .debug_struct("Circulant")
                .field("n", &self.n)
                .field("offset", offset)
                .field("coeffs", coeffs)
                .finish(),
            Repr::Spectral { .. } => f
                .debug_struct("Circulant")
                .field("n", &self.n)
                .field("repr", &"spectral")
                .finish(),
        }
    }
}

impl Circulant {
    /// Stencil operator; `coeffs[k]` multiplies `v_{i + offset + k}`.
    pub fn from_stencil(n: usize, offset: isize, coeffs: Vec<f64>) -> Self {
        let mut op = Self {
            n,
            repr: Repr::Stencil { offset, coeffs },
        };
        op.trim();
        op
    }

    /// Operator with eigenvalue `symbol[k]` on the mode `exp(2πi jk/n)`.
    ///
    /// The symbol must be conjugate-symmetric (`symbol[n-k] = conj(symbol[k])`)
    /// for the operator to be real.
    pub fn from_symbol(symbol: Vec<Complex64>, plan: Arc<FftPlan>) -> Self {
        assert_eq!(symbol.len(), plan.len(), "symbol length must match FFT plan");
        Self {
            n: symbol.len(),
            repr: Repr::Spectral {
                symbol: Arc::new(symbol),
                plan,
            },
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_stencil(n, 0, vec![1.0])
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn is_spectral(&self) -> bool {
        matches!(self.repr, Repr::Spectral { .. })
    }

    /// Offsets `(min, max)` touched by a stencil operator; `None` for spectral ones.
    pub fn support(&self) -> Option<(isize, isize)> {
        match &self.repr {
            Repr::Stencil { offset, coeffs } => {
                Some((*offset, *offset + coeffs.len() as isize - 1))
            }
            Repr::Spectral { .. } => None,
        }
    }

    /// Stencil offset and coefficients, if this is a stencil operator.
    pub fn stencil(&self) -> Option<(isize, &[f64])> {
        match &self.repr {
            Repr::Stencil { offset, coeffs } => Some((*offset, coeffs)),
            Repr::Spectral { .. } => None,
        }
    }

    fn trim(&mut self) {
        if let Repr::Stencil { offset, coeffs } = &mut self.repr {
            while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
                coeffs.pop();
            }
            let lead = coeffs.iter().take_while(|&&c| c == 0.0).count();
            if lead == coeffs.len() {
                coeffs.truncate(1);
                *offset = 0;
            } else if lead > 0 {
                coeffs.drain(..lead);
                *offset += lead as isize;
            }
        }
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_len(self.n, v.len())?;
        let mut out = vec![0.0; self.n];
        self.apply_into(v, &mut out);
        Ok(out)
    }

    /// `out = A v`. Panics if lengths differ from `n`.
    pub fn apply_into(&self, v: &[f64], out: &mut [f64]) {
        let n = self.n;
        assert!(v.len() == n && out.len() == n, "operator/vector length mismatch");
        match &self.repr {
            Repr::Stencil { offset, coeffs } => {
                out.fill(0.0);
                for (k, &c) in coeffs.iter().enumerate() {
                    if c == 0.0 {
                        continue;
                    }
                    let s = (offset + k as isize).rem_euclid(n as isize) as usize;
                    let (head, tail) = out.split_at_mut(n - s);
                    for (o, &x) in head.iter_mut().zip(&v[s..]) {
                        *o += c * x;
                    }
                    for (o, &x) in tail.iter_mut().zip(&v[..s]) {
                        *o += c * x;
                    }
                }
            }
            Repr::Spectral { symbol, plan } => {
                let mut buf = plan.forward_real(v);
                for (z, s) in buf.iter_mut().zip(symbol.iter()) {
                    *z *= s;
                }
                plan.inverse(&mut buf);
                for (o, z) in out.iter_mut().zip(buf) {
                    *o = z.re;
                }
            }
        }
    }

    /// Eigenvalues on the Fourier modes `exp(2πi jk/n)`, `k = 0..n`.
    pub fn symbol(&self) -> Vec<Complex64> {
        match &self.repr {
            Repr::Stencil { offset, coeffs } => {
                let n = self.n as f64;
                (0..self.n)
                    .map(|k| {
                        coeffs
                            .iter()
                            .enumerate()
                            .map(|(m, &c)| {
                                let phase = 2.0 * std::f64::consts::PI
                                    * ((offset + m as isize) as f64)
                                    * k as f64
                                    / n;
                                Complex64::from_polar(c, phase)
                            })
                            .sum()
                    })
                    .collect()
            }
            Repr::Spectral { symbol, .. } => symbol.as_ref().clone(),
        }
    }

    /// First row `a_m = A_{0,m}`; every row is a cyclic shift of it.
    pub fn first_row(&self) -> Vec<f64> {
        let n = self.n;
        let mut row = vec![0.0; n];
        match &self.repr {
            Repr::Stencil { offset, coeffs } => {
                for (k, &c) in coeffs.iter().enumerate() {
                    let m = (offset + k as isize).rem_euclid(n as isize) as usize;
                    row[m] += c;
                }
            }
            Repr::Spectral { .. } => {
                let mut e0 = vec![0.0; n];
                e0[0] = 1.0;
                let col = self.apply(&e0).expect("length matches");
                for (m, r) in row.iter_mut().enumerate() {
                    *r = col[(n - m) % n];
                }
            }
        }
        row
    }

    pub fn dense(&self) -> DMatrix<f64> {
        let n = self.n;
        let row = self.first_row();
        DMatrix::from_fn(n, n, |i, j| row[(j + n - i) % n])
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.first_row().iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn transpose(&self) -> Self {
        match &self.repr {
            Repr::Stencil { offset, coeffs } => {
                let len = coeffs.len() as isize;
                let rev: Vec<f64> = coeffs.iter().rev().copied().collect();
                Self::from_stencil(self.n, -(offset + len - 1), rev)
            }
            Repr::Spectral { symbol, plan } => {
                let conj = symbol.iter().map(|z| z.conj()).collect();
                Self::from_symbol(conj, plan.clone())
            }
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "operator sizes differ");
        match (&self.repr, &other.repr) {
            (
                Repr::Stencil { offset: oa, coeffs: ca },
                Repr::Stencil { offset: ob, coeffs: cb },
            ) => {
                let mut c = vec![0.0; ca.len() + cb.len() - 1];
                for (i, &a) in ca.iter().enumerate() {
                    for (j, &b) in cb.iter().enumerate() {
                        c[i + j] += a * b;
                    }
                }
                Self::from_stencil(self.n, oa + ob, c)
            }
            _ => {
                let plan = self.plan_or_new(other);
                let sym = self
                    .symbol()
                    .iter()
                    .zip(other.symbol())
                    .map(|(a, b)| a * b)
                    .collect();
                Self::from_symbol(sym, plan)
            }
        }
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        assert_eq!(self.n, other.n, "operator sizes differ");
        match (&self.repr, &other.repr) {
            (
                Repr::Stencil { offset: oa, coeffs: ca },
                Repr::Stencil { offset: ob, coeffs: cb },
            ) => {
                let lo = (*oa).min(*ob);
                let hi = (oa + ca.len() as isize).max(ob + cb.len() as isize);
                let mut c = vec![0.0; (hi - lo) as usize];
                for (k, &x) in ca.iter().enumerate() {
                    c[(oa - lo) as usize + k] += a * x;
                }
                for (k, &x) in cb.iter().enumerate() {
                    c[(ob - lo) as usize + k] += b * x;
                }
                Self::from_stencil(self.n, lo, c)
            }
            _ => {
                let plan = self.plan_or_new(other);
                let sym = self
                    .symbol()
                    .iter()
                    .zip(other.symbol())
                    .map(|(x, y)| a * x + b * y)
                    .collect();
                Self::from_symbol(sym, plan)
            }
        }
    }

    pub fn scaled(&self, a: f64) -> Self {
        match &self.repr {
            Repr::Stencil { offset, coeffs } => {
                Self::from_stencil(self.n, *offset, coeffs.iter().map(|c| a * c).collect())
            }
            Repr::Spectral { symbol, plan } => {
                Self::from_symbol(symbol.iter().map(|z| z * a).collect(), plan.clone())
            }
        }
    }

    fn plan_or_new(&self, other: &Self) -> Arc<FftPlan> {
        for op in [self, other] {
            if let Repr::Spectral { plan, .. } = &op.repr {
                return plan.clone();
            }
        }
        Arc::new(FftPlan::new(self.n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn shift_sym(n: usize, plan: &Arc<FftPlan>) -> Circulant {
        Circulant::from_symbol(
            (0..n)
                .map(|k| {
                    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64)
                })
                .collect(),
            plan.clone(),
        )
    }

    #[test]
    fn stencil_unit_probe_gives_column() {
        let n = 8;
        let op = Circulant::from_stencil(n, 0, vec![-1.0, 1.0]);
        let mut e = vec![0.0; n];
        e[1] = 1.0;
        let col = op.apply(&e).unwrap();
        // column 1 of the forward difference has -1 at row 1 and +1 at row 0
        let mut expected = vec![0.0; n];
        expected[0] = 1.0;
        expected[1] = -1.0;
        assert_eq!(col, expected);
    }

    #[test]
    fn spectral_shift_matches_stencil_shift() {
        let n = 16;
        let plan = Arc::new(FftPlan::new(n));
        let spec = shift_sym(n, &plan);
        let st = Circulant::from_stencil(n, 1, vec![1.0]);
        let v: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin()).collect();
        let a = spec.apply(&v).unwrap();
        let b = st.apply(&v).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(
            (spec.dense() - st.dense()).abs().max(),
            0.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn transpose_and_compose_match_dense() {
        let n = 10;
        let a = Circulant::from_stencil(n, -2, vec![0.5, -2.0, 1.5]);
        let b = Circulant::from_stencil(n, 0, vec![-1.0, 1.0]);
        let ad = a.dense();
        let bd = b.dense();
        assert_abs_diff_eq!((a.transpose().dense() - ad.transpose()).abs().max(), 0.0);
        assert_abs_diff_eq!(
            (a.compose(&b).dense() - &ad * &bd).abs().max(),
            0.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            (a.combine(2.0, &b, -3.0).dense() - (&ad * 2.0 - &bd * 3.0)).abs().max(),
            0.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn length_mismatch_is_error() {
        let a = Circulant::identity(5);
        assert!(a.apply(&[1.0; 4]).is_err());
    }
}

//! Direct solvers for the stage systems `(I - a G) x = b` with `G` block-circulant.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector, Dyn, LU};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sbp::{BlockCirculant, FftPlan};

/// Which factorization serves the stage systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverBackend {
    /// Spectral: every operator here is circulant, and the per-mode solve
    /// stays accurate when `Δt/τ` is huge, unlike the banded LU.
    #[default]
    Auto,
    /// Banded LU with a dense border for the periodic wrap-around.
    Sparse,
    /// Per-wavenumber `k × k` complex solves.
    Spectral,
    /// Dense LU of the assembled matrix; the reference for small problems.
    Dense,
}

impl fmt::Display for SolverBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverBackend::Auto => "auto",
            SolverBackend::Sparse => "sparse",
            SolverBackend::Spectral => "spectral",
            SolverBackend::Dense => "dense",
        })
    }
}

impl FromStr for SolverBackend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(SolverBackend::Auto),
            "sparse" => Ok(SolverBackend::Sparse),
            "spectral" => Ok(SolverBackend::Spectral),
            "dense" => Ok(SolverBackend::Dense),
            other => Err(Error::Config(format!("unknown solver backend `{other}`"))),
        }
    }
}

/// Dense factorizations above this dimension are refused.
pub const DENSE_LIMIT: usize = 3 * 1024;

/// A factorization of `I - a G` for one value of `a`.
#[derive(Debug, Clone)]
pub(crate) enum StageSolver {
    Spectral(SpectralSolver),
    Banded(BorderedBandSolver),
    Dense(DenseSolver),
}

impl StageSolver {
    /// Factorizes `I - a G` with the requested backend. `Sparse` falls back to
    /// `Dense` when `G` has spectral blocks or the grid is too coarse for the
    /// bordered band structure.
    pub fn build(
        g: &BlockCirculant,
        a: f64,
        backend: SolverBackend,
        plan: &Arc<FftPlan>,
    ) -> Result<Self> {
        let concrete = match backend {
            SolverBackend::Auto => SolverBackend::Spectral,
            other => other,
        };
        match concrete {
            SolverBackend::Spectral => SpectralSolver::new(g, a, plan.clone()).map(Self::Spectral),
            SolverBackend::Sparse => match BorderedBandSolver::new(g, a) {
                Some(s) => s.map(Self::Banded),
                None => DenseSolver::new(g, a).map(Self::Dense),
            },
            _ => DenseSolver::new(g, a).map(Self::Dense),
        }
    }

    pub fn backend(&self) -> SolverBackend {
        match self {
            StageSolver::Spectral(_) => SolverBackend::Spectral,
            StageSolver::Banded(_) => SolverBackend::Sparse,
            StageSolver::Dense(_) => SolverBackend::Dense,
        }
    }

    /// Solves for a right-hand side in block layout.
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        match self {
            StageSolver::Spectral(s) => s.solve(rhs),
            StageSolver::Banded(s) => s.solve(rhs),
            StageSolver::Dense(s) => s.solve(rhs),
        }
    }
}

/// Block-diagonalization by the DFT: on every mode the `k × k` symbol of
/// `I - a G` is inverted once.
#[derive(Debug, Clone)]
pub(crate) struct SpectralSolver {
    n: usize,
    k: usize,
    inverses: Vec<Complex64>,
    plan: Arc<FftPlan>,
}

impl SpectralSolver {
    fn new(g: &BlockCirculant, a: f64, plan: Arc<FftPlan>) -> Result<Self> {
        let (n, k) = (g.block_len(), g.blocks_per_side());
        let symbols = g.block_symbols();
        let mut inverses = Vec::with_capacity(n * k * k);
        for mode in 0..n {
            let m = DMatrix::from_fn(k, k, |r, c| {
                let s = symbols[r * k + c].get(mode).copied().unwrap_or_default();
                let id = if r == c { 1.0 } else { 0.0 };
                Complex64::new(id, 0.0) - s * a
            });
            let inv = m
                .try_inverse()
                .filter(|inv| inv.iter().all(|z| z.is_finite()))
                .ok_or(Error::SingularStage { stage: 0 })?;
            for r in 0..k {
                for c in 0..k {
                    inverses.push(inv[(r, c)]);
                }
            }
        }
        Ok(Self {
            n,
            k,
            inverses,
            plan,
        })
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let (n, k) = (self.n, self.k);
        let hats: Vec<Vec<Complex64>> = (0..k)
            .map(|c| self.plan.forward_real(&rhs[c * n..(c + 1) * n]))
            .collect();
        let mut out_hats = vec![vec![Complex64::default(); n]; k];
        for mode in 0..n {
            let inv = &self.inverses[mode * k * k..(mode + 1) * k * k];
            for r in 0..k {
                out_hats[r][mode] = (0..k).map(|c| inv[r * k + c] * hats[c][mode]).sum();
            }
        }
        out_hats
            .into_iter()
            .flat_map(|h| self.plan.inverse_real(h))
            .collect()
    }
}

/// Dense LU of the assembled `kn × kn` matrix.
#[derive(Debug, Clone)]
pub(crate) struct DenseSolver {
    lu: LU<f64, Dyn, Dyn>,
}

impl DenseSolver {
    fn new(g: &BlockCirculant, a: f64) -> Result<Self> {
        let dim = g.dim();
        if dim > DENSE_LIMIT {
            return Err(Error::Config(format!(
                "dense stage solver refused for dimension {dim} > {DENSE_LIMIT}"
            )));
        }
        let m = DMatrix::identity(dim, dim) - g.dense() * a;
        let lu = m.lu();
        if !lu.is_invertible() {
            return Err(Error::SingularStage { stage: 0 });
        }
        Ok(Self { lu })
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        self.lu
            .solve(&DVector::from_column_slice(rhs))
            .map(|x| x.as_slice().to_vec())
            .unwrap_or_else(|| vec![f64::NAN; rhs.len()])
    }
}

/// LU factorization with partial pivoting of a band matrix with `kl` sub- and
/// `ku` superdiagonals. Row `i` stores columns `i - kl ..= i + kl + ku`; the
/// extra `kl` columns hold fill-in from row interchanges.
#[derive(Debug, Clone)]
struct BandLu {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    ab: Vec<f64>,
    piv: Vec<usize>,
}

impl BandLu {
    fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        Self {
            n,
            kl,
            ku,
            width,
            ab: vec![0.0; n * width],
            piv: (0..n).collect(),
        }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.kl >= i && j <= i + self.kl + self.ku);
        i * self.width + j + self.kl - i
    }

    fn add(&mut self, i: usize, j: usize, v: f64) {
        let p = self.idx(i, j);
        self.ab[p] += v;
    }

    /// Factorizes in place; on a zero pivot returns its row.
    fn factor(&mut self) -> std::result::Result<(), usize> {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        for i in 0..n {
            let last_row = (i + kl).min(n - 1);
            let last_col = (i + kl + ku).min(n - 1);
            let mut p = i;
            let mut best = self.ab[self.idx(i, i)].abs();
            for r in i + 1..=last_row {
                let v = self.ab[self.idx(r, i)].abs();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if best == 0.0 {
                return Err(i);
            }
            self.piv[i] = p;
            if p != i {
                for j in i..=last_col {
                    let (a, b) = (self.idx(i, j), self.idx(p, j));
                    self.ab.swap(a, b);
                }
            }
            let pivot = self.ab[self.idx(i, i)];
            let row_i = self.idx(i, i);
            for r in i + 1..=last_row {
                let rc = self.idx(r, i);
                let l = self.ab[rc] / pivot;
                self.ab[rc] = l;
                if l != 0.0 {
                    let base = self.idx(r, i + 1);
                    for off in 0..last_col - i {
                        let u = self.ab[row_i + 1 + off];
                        self.ab[base + off] -= l * u;
                    }
                }
            }
        }
        Ok(())
    }

    fn solve_in_place(&self, b: &mut [f64]) {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        for i in 0..n {
            b.swap(i, self.piv[i]);
            let bi = b[i];
            if bi != 0.0 {
                for r in i + 1..=(i + kl).min(n - 1) {
                    b[r] -= self.ab[self.idx(r, i)] * bi;
                }
            }
        }
        for i in (0..n).rev() {
            let row = self.idx(i, i);
            let mut s = b[i];
            for (off, j) in (i + 1..=(i + kl + ku).min(n - 1)).enumerate() {
                s -= self.ab[row + 1 + off] * b[j];
            }
            b[i] = s / self.ab[row];
        }
    }
}

/// Sparse direct solver for `I - a G` with stencil blocks.
///
/// Unknowns are interleaved node by node (`k·i + c`), which turns every
/// block of stencil radius `r` into a band of half-width `k·r + k - 1`
/// except for the periodic wrap-around. The last `r` nodes form a border:
///
/// ```text
/// [ A₁₁  A₁₂ ] [x₁]   [b₁]      A₁₁ banded (no wrap-around),
/// [ A₂₁  A₂₂ ] [x₂] = [b₂]      S = A₂₂ - A₂₁ A₁₁⁻¹ A₁₂ dense and small.
/// ```
#[derive(Debug, Clone)]
pub(crate) struct BorderedBandSolver {
    n: usize,
    k: usize,
    inner: usize,
    band: BandLu,
    /// Nonzeros of `A₂₁` as (border row, inner column, value).
    lower_border: Vec<(usize, usize, f64)>,
    /// `A₁₁⁻¹ A₁₂`, row-major `inner × m`.
    spike: Vec<f64>,
    schur: LU<f64, Dyn, Dyn>,
}

impl BorderedBandSolver {
    /// `None` when the operator does not have the required structure.
    fn new(g: &BlockCirculant, a: f64) -> Option<Result<Self>> {
        let r = g.stencil_radius()?.max(1);
        let (n, k) = (g.block_len(), g.blocks_per_side());
        if n < 2 * r + 2 {
            return None;
        }
        let inner = k * (n - r);
        let m = k * r;
        let half = k * r + k - 1;
        let mut band = BandLu::zeros(inner, half, half);
        let mut upper_border = vec![0.0; inner * m];
        let mut lower_border = Vec::new();
        let mut corner = DMatrix::<f64>::zeros(m, m);

        let mut put = |row: usize, col: usize, v: f64| match (row < inner, col < inner) {
            (true, true) => band.add(row, col, v),
            (true, false) => upper_border[row * m + col - inner] += v,
            (false, true) => lower_border.push((row - inner, col, v)),
            (false, false) => corner[(row - inner, col - inner)] += v,
        };
        for i in 0..n {
            for c in 0..k {
                put(k * i + c, k * i + c, 1.0);
            }
        }
        for br in 0..k {
            for bc in 0..k {
                let Some(op) = g.block(br, bc) else { continue };
                let (offset, coeffs) = op.stencil()?;
                for i in 0..n {
                    for (t, &coef) in coeffs.iter().enumerate() {
                        let j = (i as isize + offset + t as isize).rem_euclid(n as isize) as usize;
                        put(k * i + br, k * j + bc, -a * coef);
                    }
                }
            }
        }

        Some((|| {
            band.factor().map_err(|_| Error::SingularStage { stage: 0 })?;
            let mut spike = vec![0.0; inner * m];
            let mut col = vec![0.0; inner];
            for j in 0..m {
                for (row, x) in col.iter_mut().enumerate() {
                    *x = upper_border[row * m + j];
                }
                band.solve_in_place(&mut col);
                for (row, x) in col.iter().enumerate() {
                    spike[row * m + j] = *x;
                }
            }
            let mut s = corner;
            for &(row, col, v) in &lower_border {
                for j in 0..m {
                    s[(row, j)] -= v * spike[col * m + j];
                }
            }
            let schur = s.lu();
            if !schur.is_invertible() {
                return Err(Error::SingularStage { stage: 0 });
            }
            Ok(Self {
                n,
                k,
                inner,
                band,
                lower_border,
                spike,
                schur,
            })
        })())
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let (n, k, inner) = (self.n, self.k, self.inner);
        let m = k * n - inner;
        let mut x = vec![0.0; k * n];
        for c in 0..k {
            for i in 0..n {
                x[k * i + c] = rhs[c * n + i];
            }
        }
        let (x1, x2) = x.split_at_mut(inner);
        self.band.solve_in_place(x1);
        let mut t = DVector::from_column_slice(x2);
        for &(row, col, v) in &self.lower_border {
            t[row] -= v * x1[col];
        }
        let y2 = self.schur.solve(&t).unwrap_or_else(|| DVector::from_element(m, f64::NAN));
        for (row, x) in x1.iter_mut().enumerate() {
            let spike = &self.spike[row * m..(row + 1) * m];
            *x -= spike.iter().zip(y2.iter()).map(|(s, y)| s * y).sum::<f64>();
        }
        x2.copy_from_slice(y2.as_slice());
        let mut out = vec![0.0; k * n];
        for c in 0..k {
            for i in 0..n {
                out[c * n + i] = x[k * i + c];
            }
        }
        out
    }
}

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::circulant::Circulant;
use crate::error::{check_len, Result};

/// A `k × k` block operator whose blocks are `n × n` circulants, acting on
/// vectors stored block-wise (`[q_0; q_1; …; q_{k-1}]`, each of length `n`).
#[derive(Debug, Clone)]
pub struct BlockCirculant {
    n: usize,
    k: usize,
    blocks: Vec<Option<Circulant>>,
}

impl BlockCirculant {
    pub fn zeros(n: usize, k: usize) -> Self {
        Self {
            n,
            k,
            blocks: vec![None; k * k],
        }
    }

    pub fn with_block(mut self, row: usize, col: usize, op: Circulant) -> Self {
        self.set(row, col, op);
        self
    }

    pub fn set(&mut self, row: usize, col: usize, op: Circulant) {
        assert!(row < self.k && col < self.k, "block index out of range");
        assert_eq!(op.len(), self.n, "block size mismatch");
        self.blocks[row * self.k + col] = Some(op);
    }

    pub fn block(&self, row: usize, col: usize) -> Option<&Circulant> {
        self.blocks[row * self.k + col].as_ref()
    }

    /// Points per block.
    pub fn block_len(&self) -> usize {
        self.n
    }

    /// Number of block rows/columns.
    pub fn blocks_per_side(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.n * self.k
    }

    pub fn has_spectral_block(&self) -> bool {
        self.blocks.iter().flatten().any(Circulant::is_spectral)
    }

    /// Largest stencil reach over all blocks, or `None` if some block is spectral.
    pub fn stencil_radius(&self) -> Option<usize> {
        let mut r = 0usize;
        for op in self.blocks.iter().flatten() {
            let (lo, hi) = op.support()?;
            r = r.max(lo.unsigned_abs()).max(hi.unsigned_abs());
        }
        Some(r)
    }

    pub fn apply(&self, q: &[f64]) -> Result<Vec<f64>> {
        check_len(self.dim(), q.len())?;
        let mut out = vec![0.0; self.dim()];
        self.apply_into(q, &mut out);
        Ok(out)
    }

    /// `out = G q`; panics on length mismatch.
    pub fn apply_into(&self, q: &[f64], out: &mut [f64]) {
        let n = self.n;
        assert!(q.len() == self.dim() && out.len() == self.dim());
        out.fill(0.0);
        let mut tmp = vec![0.0; n];
        for r in 0..self.k {
            for c in 0..self.k {
                if let Some(op) = self.block(r, c) {
                    op.apply_into(&q[c * n..(c + 1) * n], &mut tmp);
                    for (o, t) in out[r * n..(r + 1) * n].iter_mut().zip(&tmp) {
                        *o += t;
                    }
                }
            }
        }
    }

    /// Dense matrix in block layout.
    pub fn dense(&self) -> DMatrix<f64> {
        let n = self.n;
        let mut m = DMatrix::zeros(self.dim(), self.dim());
        for r in 0..self.k {
            for c in 0..self.k {
                if let Some(op) = self.block(r, c) {
                    m.view_mut((r * n, c * n), (n, n)).copy_from(&op.dense());
                }
            }
        }
        m
    }

    /// Per-block symbols, indexed `[row * k + col][mode]`; zero blocks give empty vectors.
    pub fn block_symbols(&self) -> Vec<Vec<Complex64>> {
        self.blocks
            .iter()
            .map(|b| b.as_ref().map(Circulant::symbol).unwrap_or_default())
            .collect()
    }

    /// The `k × k` symbol matrix (row-major) on Fourier mode `mode`.
    pub fn symbol_at(&self, mode: usize) -> Vec<Complex64> {
        self.block_symbols()
            .into_iter()
            .map(|s| s.get(mode).copied().unwrap_or_default())
            .collect()
    }

    /// `max_i Σ_j |G_ij|`.
    pub fn norm_inf(&self) -> f64 {
        (0..self.k)
            .map(|r| {
                (0..self.k)
                    .filter_map(|c| self.block(r, c))
                    .map(|op| op.first_row().iter().map(|x| x.abs()).sum::<f64>())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }
}

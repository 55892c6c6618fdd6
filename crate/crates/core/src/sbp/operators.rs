use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::circulant::{Circulant, FftPlan};
use super::grid::PeriodicGrid;
use super::stencils;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    UpwindFd,
    Fourier,
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorKind::UpwindFd => write!(f, "upwind_fd"),
            OperatorKind::Fourier => write!(f, "fourier"),
        }
    }
}

/// Matched periodic derivative operators `D₊`, `D₋`, `D = (D₊ + D₋)/2` with
/// the diagonal norm `M = dx I`.
///
/// Immutable after construction.
#[derive(Debug, Clone)]
pub struct OperatorSet {
    grid: PeriodicGrid,
    d_plus: Circulant,
    d_minus: Circulant,
    d_central: Circulant,
    dispersion: Circulant,
    norm_weights: Vec<f64>,
    accuracy_order: usize,
    kind: OperatorKind,
    plan: Arc<FftPlan>,
}

impl OperatorSet {
    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn d_plus(&self) -> &Circulant {
        &self.d_plus
    }

    pub fn d_minus(&self) -> &Circulant {
        &self.d_minus
    }

    pub fn d_central(&self) -> &Circulant {
        &self.d_central
    }

    /// The third-derivative operator `D₊ D D₋`.
    pub fn dispersion(&self) -> &Circulant {
        &self.dispersion
    }

    pub fn norm_weights(&self) -> &[f64] {
        &self.norm_weights
    }

    pub fn accuracy_order(&self) -> usize {
        self.accuracy_order
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn fft_plan(&self) -> &Arc<FftPlan> {
        &self.plan
    }

    /// `xᵀ M y`.
    pub fn inner(&self, x: &[f64], y: &[f64]) -> f64 {
        self.norm_weights
            .iter()
            .zip(x.iter().zip(y))
            .map(|(m, (a, b))| m * a * b)
            .sum()
    }

    /// `√(xᵀ M x)`.
    pub fn norm(&self, x: &[f64]) -> f64 {
        self.inner(x, x).sqrt()
    }

    /// Identifies the operator set for solver caching.
    pub fn fingerprint(&self) -> String {
        format!(
            "{}:q{}:n{}:[{:e},{:e}]",
            self.kind,
            self.accuracy_order,
            self.grid.len(),
            self.grid.x_left(),
            self.grid.x_right()
        )
    }

    fn assemble(
        grid: PeriodicGrid,
        d_plus: Circulant,
        d_minus: Circulant,
        accuracy_order: usize,
        kind: OperatorKind,
        plan: Arc<FftPlan>,
    ) -> Self {
        let d_central = d_plus.combine(0.5, &d_minus, 0.5);
        let dispersion = d_plus.compose(&d_central).compose(&d_minus);
        let norm_weights = grid.weights();
        Self {
            grid,
            d_plus,
            d_minus,
            d_central,
            dispersion,
            norm_weights,
            accuracy_order,
            kind,
            plan,
        }
    }
}

/// Periodic upwind SBP operators of accuracy order `order` (1 through 8).
pub fn make_upwind_operators(grid: &PeriodicGrid, order: usize) -> Result<OperatorSet> {
    let coeffs = stencils::backward_coefficients(order).ok_or(Error::UnsupportedOrder(order))?;
    let n = grid.len();
    let inv_dx = 1.0 / grid.dx();
    let d_minus = Circulant::from_stencil(
        n,
        stencils::backward_offset(order),
        coeffs.iter().map(|c| c * inv_dx).collect(),
    );
    let d_plus = d_minus.transpose().scaled(-1.0);

    // The dissipative part must be negative semidefinite on every mode.
    let scale = d_plus.max_abs_entry();
    for (k, (p, m)) in d_plus.symbol().iter().zip(d_minus.symbol()).enumerate() {
        let re = (p - m).re;
        if re > 1e-12 * scale {
            return Err(Error::SbpIdentity(format!(
                "order {order}: Re symbol(D+ - D-) = {re:e} > 0 at mode {k}"
            )));
        }
    }

    let plan = Arc::new(FftPlan::new(n));
    Ok(OperatorSet::assemble(
        grid.clone(),
        d_plus,
        d_minus,
        order,
        OperatorKind::UpwindFd,
        plan,
    ))
}

/// Signed wavenumber index of mode `k` on an `n`-point grid; the Nyquist mode maps to 0.
pub fn signed_wavenumber(k: usize, n: usize) -> f64 {
    if 2 * k == n {
        0.0
    } else if 2 * k < n {
        k as f64
    } else {
        k as f64 - n as f64
    }
}

/// Fourier pseudospectral first derivative; `D₊ = D₋ = D`.
pub fn make_fourier_operator(grid: &PeriodicGrid) -> Result<OperatorSet> {
    let n = grid.len();
    if n % 2 != 0 {
        return Err(Error::OddFourierGrid(n));
    }
    let plan = Arc::new(FftPlan::new(n));
    let base = 2.0 * std::f64::consts::PI / grid.length();
    let symbol = (0..n)
        .map(|k| Complex64::new(0.0, base * signed_wavenumber(k, n)))
        .collect();
    let d = Circulant::from_symbol(symbol, plan.clone());
    Ok(OperatorSet::assemble(
        grid.clone(),
        d.clone(),
        d,
        n,
        OperatorKind::Fourier,
        plan,
    ))
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform periodic grid on `[x_left, x_right)`.
///
/// The right endpoint is identified with the left one and is not a node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicGrid {
    x_left: f64,
    x_right: f64,
    n: usize,
}

impl PeriodicGrid {
    pub fn new(x_left: f64, x_right: f64, n: usize) -> Result<Self> {
        if !(x_left.is_finite() && x_right.is_finite()) || x_right <= x_left {
            return Err(Error::DegenerateInterval { x_left, x_right });
        }
        if n < 4 {
            return Err(Error::GridTooSmall(n));
        }
        Ok(Self { x_left, x_right, n })
    }

    pub fn x_left(&self) -> f64 {
        self.x_left
    }

    pub fn x_right(&self) -> f64 {
        self.x_right
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn length(&self) -> f64 {
        self.x_right - self.x_left
    }

    pub fn dx(&self) -> f64 {
        self.length() / self.n as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        self.x_left + i as f64 * self.dx()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.node(i)).collect()
    }

    /// Diagonal of the norm matrix `M = dx I`.
    pub fn weights(&self) -> Vec<f64> {
        vec![self.dx(); self.n]
    }
}

/// Builds a uniform periodic grid.
pub fn make_grid(x_left: f64, x_right: f64, n: usize) -> Result<PeriodicGrid> {
    PeriodicGrid::new(x_left, x_right, n)
}

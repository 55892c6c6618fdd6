use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};

/// Grid values of the KdV solution `η`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KdvState {
    pub eta: Vec<f64>,
}

impl KdvState {
    pub fn new(eta: Vec<f64>) -> Self {
        Self { eta }
    }

    pub fn len(&self) -> usize {
        self.eta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eta.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.eta.iter().all(|x| x.is_finite())
    }
}

/// Grid values `(u, v, w)` of the KdVH solution together with its relaxation parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KdvhState {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    pub tau: f64,
}

pub(crate) fn check_tau(tau: f64) -> Result<()> {
    if tau > 0.0 && tau.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTau(tau))
    }
}

impl KdvhState {
    pub fn new(u: Vec<f64>, v: Vec<f64>, w: Vec<f64>, tau: f64) -> Result<Self> {
        check_tau(tau)?;
        check_len(u.len(), v.len())?;
        check_len(u.len(), w.len())?;
        Ok(Self { u, v, w, tau })
    }

    pub fn zeros(n: usize, tau: f64) -> Result<Self> {
        Self::new(vec![0.0; n], vec![0.0; n], vec![0.0; n], tau)
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        [&self.u, &self.v, &self.w]
            .iter()
            .all(|c| c.iter().all(|x| x.is_finite()))
    }

    /// `[u; v; w]` as one vector of length `3n`.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut q = Vec::with_capacity(3 * self.len());
        q.extend_from_slice(&self.u);
        q.extend_from_slice(&self.v);
        q.extend_from_slice(&self.w);
        q
    }

    pub fn from_flat(q: &[f64], tau: f64) -> Result<Self> {
        if q.len() % 3 != 0 {
            return Err(Error::LengthMismatch {
                expected: 3 * (q.len() / 3),
                got: q.len(),
            });
        }
        let n = q.len() / 3;
        Self::new(
            q[..n].to_vec(),
            q[n..2 * n].to_vec(),
            q[2 * n..].to_vec(),
            tau,
        )
    }
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One tableau entry: its exact form as written (a rational, a closed-form
/// expression or a published decimal) and its double-precision value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coef {
    pub exact: String,
    pub value: f64,
}

impl Coef {
    pub fn new(exact: impl Into<String>, value: f64) -> Self {
        Self {
            exact: exact.into(),
            value,
        }
    }

    pub fn zero() -> Self {
        Self::new("0", 0.0)
    }
}

impl From<f64> for Coef {
    fn from(value: f64) -> Self {
        Self::new(format!("{value:e}"), value)
    }
}

/// Butcher coefficients of an additive (explicit + diagonally implicit) RK method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImexTableau {
    pub name: String,
    pub order: usize,
    pub a_explicit: Vec<Vec<Coef>>,
    pub b_explicit: Vec<Coef>,
    pub c_explicit: Vec<Coef>,
    pub a_implicit: Vec<Vec<Coef>>,
    pub b_implicit: Vec<Coef>,
    pub c_implicit: Vec<Coef>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ImexType {
    /// Every diagonal entry of the implicit matrix is nonzero.
    I,
    /// Explicit first stage (`a₁₁ = 0`), invertible trailing block.
    II,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub kind: ImexType,
    pub sa: bool,
    pub fsal: bool,
    pub gsa: bool,
    /// Highest order whose coupled order conditions all hold.
    pub order_verified: usize,
    /// Largest order-condition residual over orders `1..=order`.
    pub order_residual: f64,
}

/// Tolerance for the structural row-sum and last-row comparisons.
const STRUCTURE_TOL: f64 = 1e-14;
/// Tolerance for order-condition residuals.
pub const ORDER_TOL: f64 = 1e-12;
/// Order conditions are enumerated up to this order.
pub const MAX_TREE_ORDER: usize = 4;

fn values(v: &[Coef]) -> Vec<f64> {
    v.iter().map(|c| c.value).collect()
}

fn matrix(m: &[Vec<Coef>]) -> Vec<Vec<f64>> {
    m.iter().map(|r| values(r)).collect()
}

impl ImexTableau {
    /// Builds a tableau and checks its shape, triangularity and row sums.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        order: usize,
        a_explicit: Vec<Vec<Coef>>,
        b_explicit: Vec<Coef>,
        c_explicit: Vec<Coef>,
        a_implicit: Vec<Vec<Coef>>,
        b_implicit: Vec<Coef>,
        c_implicit: Vec<Coef>,
    ) -> Result<Self> {
        let t = Self {
            name: name.into(),
            order,
            a_explicit,
            b_explicit,
            c_explicit,
            a_implicit,
            b_implicit,
            c_implicit,
        };
        t.validate()?;
        Ok(t)
    }

    fn inconsistent(&self, reason: impl Into<String>) -> Error {
        Error::InconsistentTableau {
            name: self.name.clone(),
            reason: reason.into(),
        }
    }

    fn validate(&self) -> Result<()> {
        let s = self.stages();
        let square = |m: &[Vec<Coef>]| m.len() == s && m.iter().all(|r| r.len() == s);
        if s == 0
            || !square(&self.a_explicit)
            || !square(&self.a_implicit)
            || [&self.b_explicit, &self.c_explicit, &self.b_implicit, &self.c_implicit]
                .iter()
                .any(|v| v.len() != s)
        {
            return Err(self.inconsistent("coefficient arrays have mismatched shapes"));
        }
        let (at, a) = (self.explicit_matrix(), self.implicit_matrix());
        for i in 0..s {
            if at[i][i..].iter().any(|&x| x != 0.0) {
                return Err(self.inconsistent("explicit matrix is not strictly lower triangular"));
            }
            if a[i][i + 1..].iter().any(|&x| x != 0.0) {
                return Err(self.inconsistent("implicit matrix is not lower triangular"));
            }
        }
        for (label, m, c) in [
            ("explicit", &at, self.explicit_nodes()),
            ("implicit", &a, self.implicit_nodes()),
        ] {
            for (i, row) in m.iter().enumerate() {
                let sum: f64 = row.iter().sum();
                let scale: f64 = 1.0 + row.iter().map(|x| x.abs()).sum::<f64>();
                if (sum - c[i]).abs() > STRUCTURE_TOL * scale {
                    return Err(self.inconsistent(format!(
                        "{label} row {} sums to {sum:e}, node is {:e}",
                        i + 1,
                        c[i]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn stages(&self) -> usize {
        self.b_explicit.len()
    }

    pub fn explicit_matrix(&self) -> Vec<Vec<f64>> {
        matrix(&self.a_explicit)
    }

    pub fn implicit_matrix(&self) -> Vec<Vec<f64>> {
        matrix(&self.a_implicit)
    }

    pub fn explicit_weights(&self) -> Vec<f64> {
        values(&self.b_explicit)
    }

    pub fn implicit_weights(&self) -> Vec<f64> {
        values(&self.b_implicit)
    }

    pub fn explicit_nodes(&self) -> Vec<f64> {
        values(&self.c_explicit)
    }

    pub fn implicit_nodes(&self) -> Vec<f64> {
        values(&self.c_implicit)
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.stages())
            .map(|i| self.a_implicit[i][i].value)
            .collect()
    }

    /// Largest residual of the coupled order conditions of exactly order `p`.
    pub fn order_residual(&self, p: usize) -> f64 {
        let mats = [self.explicit_matrix(), self.implicit_matrix()];
        let weights = [self.explicit_weights(), self.implicit_weights()];
        colored_trees(p)
            .iter()
            .map(|t| {
                let phi = t.stage_weights(&mats);
                let lhs: f64 = weights[t.color].iter().zip(&phi).map(|(b, x)| b * x).sum();
                (lhs - 1.0 / t.density() as f64).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Structural flags and verified order of a tableau.
pub fn classify(t: &ImexTableau) -> Result<Classification> {
    t.validate()?;
    let s = t.stages();
    let diag = t.diagonal();
    let kind = if diag.iter().all(|&d| d != 0.0) {
        ImexType::I
    } else if diag[0] == 0.0 && diag[1..].iter().all(|&d| d != 0.0) {
        ImexType::II
    } else {
        return Err(t.inconsistent("implicit diagonal has interior zeros"));
    };
    let same = |x: &[Coef], y: &[Coef]| {
        x.iter()
            .zip(y)
            .all(|(a, b)| (a.value - b.value).abs() <= STRUCTURE_TOL * (1.0 + a.value.abs()))
    };
    let sa = same(&t.a_implicit[s - 1], &t.b_implicit);
    let fsal = same(&t.a_explicit[s - 1], &t.b_explicit);

    let mut order_verified = 0;
    let mut order_residual = 0.0f64;
    // one order beyond the declared one, capped at the enumerated trees
    for p in 1..=(t.order + 1).min(MAX_TREE_ORDER) {
        let r = t.order_residual(p);
        if p <= t.order {
            order_residual = order_residual.max(r);
        }
        if r <= ORDER_TOL && order_verified == p - 1 {
            order_verified = p;
        }
    }
    Ok(Classification {
        kind,
        sa,
        fsal,
        gsa: sa && fsal,
        order_verified,
        order_residual,
    })
}

/// Rooted tree whose vertices are colored explicit (0) or implicit (1).
#[derive(Debug, Clone)]
struct ColoredTree {
    color: usize,
    children: Vec<ColoredTree>,
}

impl ColoredTree {
    fn size(&self) -> usize {
        1 + self.children.iter().map(Self::size).sum::<usize>()
    }

    /// The tree factorial `γ(t)`.
    fn density(&self) -> usize {
        self.size() * self.children.iter().map(Self::density).product::<usize>()
    }

    /// Stage vector `Φ` with `Φ = ∏_children A^{color(child)} Φ(child)`.
    fn stage_weights(&self, mats: &[Vec<Vec<f64>>; 2]) -> Vec<f64> {
        let s = mats[0].len();
        let mut phi = vec![1.0; s];
        for child in &self.children {
            let g = child.stage_weights(mats);
            let a = &mats[child.color];
            for (i, p) in phi.iter_mut().enumerate() {
                *p *= a[i].iter().zip(&g).map(|(x, y)| x * y).sum::<f64>();
            }
        }
        phi
    }
}

/// All bicolored rooted trees with `order` vertices; children are ordered, so
/// isomorphic copies repeat, which is harmless for residual checks.
fn colored_trees(order: usize) -> Vec<ColoredTree> {
    if order == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for children in forests(order - 1) {
        for color in 0..2 {
            out.push(ColoredTree {
                color,
                children: children.clone(),
            });
        }
    }
    out
}

/// Ordered sequences of trees with `size` vertices in total.
fn forests(size: usize) -> Vec<Vec<ColoredTree>> {
    if size == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=size {
        for head in colored_trees(first) {
            for mut tail in forests(size - first) {
                tail.insert(0, head.clone());
                out.push(tail);
            }
        }
    }
    out
}

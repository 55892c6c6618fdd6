//! Backward-biased first-derivative stencils for periodic upwind SBP pairs.
//!
//! For accuracy order `q` the `D₋` stencil uses the `q + 1` points with offsets
//! `-(q/2 + 1) ..= q - q/2 - 1`, scaled by `1/dx`. These are the unique
//! minimal-width stencils of order `q` on that support; `D₊ = -D₋ᵀ`. For every
//! order the real part of the `D₋` symbol is nonnegative, which makes
//! `M (D₊ - D₋)` negative semidefinite.

/// Exact `(numerator, denominator)` coefficients of `D₋` (times `dx`).
pub(crate) const BACKWARD: [&[(i64, i64)]; 8] = [
    &[(-1, 1), (1, 1)],
    &[(1, 2), (-2, 1), (3, 2)],
    &[(1, 6), (-1, 1), (1, 2), (1, 3)],
    &[(-1, 12), (1, 2), (-3, 2), (5, 6), (1, 4)],
    &[(-1, 30), (1, 4), (-1, 1), (1, 3), (1, 2), (-1, 20)],
    &[(1, 60), (-2, 15), (1, 2), (-4, 3), (7, 12), (2, 5), (-1, 30)],
    &[
        (1, 140),
        (-1, 15),
        (3, 10),
        (-1, 1),
        (1, 4),
        (3, 5),
        (-1, 10),
        (1, 105),
    ],
    &[
        (-1, 280),
        (1, 28),
        (-1, 6),
        (1, 2),
        (-5, 4),
        (9, 20),
        (1, 2),
        (-1, 14),
        (1, 168),
    ],
];

pub const MAX_ORDER: usize = 8;

/// Leftmost offset of the `D₋` stencil of order `q`.
pub fn backward_offset(q: usize) -> isize {
    -((q / 2 + 1) as isize)
}

/// `D₋` coefficients of order `q` (unscaled), or `None` if unsupported.
pub fn backward_coefficients(q: usize) -> Option<Vec<f64>> {
    if q == 0 || q > MAX_ORDER {
        return None;
    }
    Some(
        BACKWARD[q - 1]
            .iter()
            .map(|&(a, b)| a as f64 / b as f64)
            .collect(),
    )
}

/// Exact rational coefficients as `(numerator, denominator)` pairs.
pub fn backward_rationals(q: usize) -> Option<&'static [(i64, i64)]> {
    if q == 0 || q > MAX_ORDER {
        None
    } else {
        Some(BACKWARD[q - 1])
    }
}

use crate::error::{check_len, Result};

/// Pairwise orders `log(eᵢ₋₁/eᵢ) / log(pᵢ₋₁/pᵢ)`; the first entry, and any
/// entry involving a zero or non-finite error, is `None`.
pub fn eoc(errors: &[f64], params: &[f64]) -> Result<Vec<Option<f64>>> {
    check_len(errors.len(), params.len())?;
    let valid = |e: f64| e > 0.0 && e.is_finite();
    Ok((0..errors.len())
        .map(|i| {
            if i == 0 || !valid(errors[i]) || !valid(errors[i - 1]) || params[i] == params[i - 1] {
                return None;
            }
            Some((errors[i - 1] / errors[i]).ln() / (params[i - 1] / params[i]).ln())
        })
        .collect())
}

/// Least-squares slope of `log y` against `log x` over the pairs with both
/// positive; `None` with fewer than two such pairs.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0 && a.is_finite() && b.is_finite())
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(sx, sy), (a, b)| (sx + a, sy + b));
    let (mx, my) = (sx / m, sy / m);
    let (sxy, sxx) = pts
        .iter()
        .fold((0.0, 0.0), |(sxy, sxx), (a, b)| (sxy + (a - mx) * (b - my), sxx + (a - mx).powi(2)));
    (sxx > 0.0).then(|| sxy / sxx)
}

//! Numerically stable power means `M_s` and their gradients for `s <= 1`.
//!
//! All powering happens in log space: exponents as deep as -150 applied to
//! values spanning a dozen orders of magnitude overflow direct `powf`, while
//! `exp((lse(s * ln y) - ln k) / s)` stays finite. `s = 0` (the geometric
//! mean) is rejected rather than special-cased; a geometric annealing
//! schedule starting below zero never reaches it.

use crate::error::{Error, Result};

fn check_exponent(s: f64) -> Result<()> {
    if s == 0.0 || s > 1.0 || !s.is_finite() {
        return Err(Error::InvalidExponent { s });
    }
    Ok(())
}

/// Shifted log-sum-exp of a slice.
fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let sum: f64 = values.iter().map(|&v| (v - max).exp()).sum();
    max + sum.ln()
}

/// `M_s(y) = ((1/k) sum y_i^s)^(1/s)`, clamped into `[min(y), max(y)]`.
///
/// Entries must be strictly positive and the slice nonempty.
pub fn power_mean(values: &[f64], s: f64) -> Result<f64> {
    check_exponent(s)?;
    debug_assert!(!values.is_empty(), "power mean of an empty vector");
    debug_assert!(
        values.iter().all(|&v| v > 0.0),
        "power mean entries must be strictly positive"
    );
    let k = values.len() as f64;
    let logs: Vec<f64> = values.iter().map(|&v| s * v.ln()).collect();
    let m = ((log_sum_exp(&logs) - k.ln()) / s).exp();
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(m.clamp(lo, hi))
}

/// Gradient of [`power_mean`]:
/// `dM_s/dy_j = ((1/k) sum y_i^s)^(1/s - 1) * (1/k) * y_j^(s - 1)`.
///
/// Entries are positive in exact arithmetic; for very deep `s` the far
/// coordinates can underflow to zero in `f64`.
pub fn power_mean_grad(values: &[f64], s: f64) -> Result<Vec<f64>> {
    check_exponent(s)?;
    debug_assert!(!values.is_empty(), "power mean of an empty vector");
    debug_assert!(
        values.iter().all(|&v| v > 0.0),
        "power mean entries must be strictly positive"
    );
    let k = values.len() as f64;
    let ln_k = k.ln();
    let logs: Vec<f64> = values.iter().map(|&v| s * v.ln()).collect();
    let ln_inner = log_sum_exp(&logs) - ln_k; // ln((1/k) sum y^s)
    let scale = (1.0 / s - 1.0) * ln_inner - ln_k;
    Ok(values
        .iter()
        .map(|&v| (scale + (s - 1.0) * v.ln()).exp())
        .collect())
}

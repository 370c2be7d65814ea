//! Three-parameter Mittag-Leffler function by direct series.

use super::{gamma as gamma_fn, ln_gamma, CompensatedSum};
use crate::error::ensure;
use crate::{Error, Result};

/// Largest `|x|` accepted by [`ml3`].
pub const ML_X_MAX: f64 = 30.0;

// Past this ratio between the largest term and the result the alternating
// series has lost too many digits to be trusted.
const MAX_CANCELLATION: f64 = 1e8;
const MAX_TERMS: usize = 20_000;

/// `E^γ_{α,β}(x) = Σ_j Γ(j+γ) x^j / (Γ(γ) j! Γ(jα+β))`.
pub fn ml3(alpha: f64, beta: f64, gamma: f64, x: f64) -> Result<f64> {
    ensure(alpha > 0.0 && beta > 0.0 && gamma > 0.0, || {
        format!("ml3 needs positive parameters, got ({alpha}, {beta}, {gamma})")
    })?;
    ensure(x.is_finite(), || format!("ml3 argument {x} is not finite"))?;
    if x.abs() > ML_X_MAX {
        return Err(Error::NonConvergence(format!(
            "ml3 argument |{x}| exceeds {ML_X_MAX}"
        )));
    }
    if x == 0.0 {
        return Ok((-ln_gamma(beta)).exp());
    }
    let mut sum = CompensatedSum::default();
    let mut max_term: f64 = 0.0;
    // a_j = (γ)_j x^j / j!, kept by recurrence so no log-gamma rounding
    // enters the (possibly alternating) terms
    let mut a = 1.0;
    let mut prev = f64::INFINITY;
    let mut small_run = 0;
    for j in 0..MAX_TERMS {
        let jf = j as f64;
        if j > 0 {
            a *= (gamma + jf - 1.0) * x / jf;
        }
        let arg = jf * alpha + beta;
        let term = if arg < 170.0 { a / gamma_fn(arg) } else { a * (-ln_gamma(arg)).exp() };
        sum.add(term);
        let mag = term.abs();
        max_term = max_term.max(mag);
        let decreasing = mag < prev;
        prev = mag;
        if decreasing && mag <= 1e-17 * sum.value().abs().max(f64::MIN_POSITIVE) {
            small_run += 1;
            if small_run >= 3 {
                let value = sum.value();
                if max_term > MAX_CANCELLATION * value.abs() {
                    return Err(Error::NonConvergence(format!(
                        "ml3({alpha}, {beta}, {gamma}, {x}): cancellation, peak term {max_term:e} vs value {value:e}"
                    )));
                }
                return Ok(value);
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::NonConvergence(format!(
        "ml3({alpha}, {beta}, {gamma}, {x}): no convergence in {MAX_TERMS} terms"
    )))
}

//! Confluent hypergeometric function ₁F₁.

use super::CompensatedSum;
use crate::{Error, Result};

fn check_pole(b: f64) -> Result<()> {
    if b <= 0.0 && b == b.round() {
        return Err(Error::Pole(format!("1F1 lower parameter b = {b}")));
    }
    Ok(())
}

/// Raw Kummer series `Σ (a)_n x^n / ((b)_n n!)`.
///
/// Accurate whenever the terms do not cancel, i.e. for `x ≥ 0` or small
/// negative `x`. Use [`kummer1f1`] for general arguments.
pub fn kummer1f1_series(a: f64, b: f64, x: f64) -> Result<f64> {
    check_pole(b)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    let mut sum = CompensatedSum::default();
    let mut term = 1.0;
    sum.add(term);
    let mut quiet = 0;
    for n in 0..100_000u32 {
        let nf = n as f64;
        term *= (a + nf) / (b + nf) * x / (nf + 1.0);
        sum.add(term);
        if term == 0.0 {
            return Ok(sum.value());
        }
        // only stop once past the peak of the terms
        if nf > x.abs() && term.abs() <= 1e-17 * sum.value().abs() {
            quiet += 1;
            if quiet >= 2 {
                return Ok(sum.value());
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergence(format!("1F1({a}; {b}; {x})")))
}

/// `₁F₁(a; b; x)`, applying `M(a,b,x) = eˣ M(b−a, b, −x)` for negative `x`.
pub fn kummer1f1(a: f64, b: f64, x: f64) -> Result<f64> {
    if x < 0.0 {
        Ok(x.exp() * kummer1f1_series(b - a, b, -x)?)
    } else {
        kummer1f1_series(a, b, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_sum_at_zero() {
        assert_eq!(kummer1f1(0.3, 2.5, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn one_two_closed_form() {
        // 1F1(1;2;x) = (e^x - 1)/x
        for &x in &[1.0, 0.01, 7.0, -3.0, -40.0] {
            let expected = f64::exp_m1(x) / x;
            let v = kummer1f1(1.0, 2.0, x).unwrap();
            assert!((v - expected).abs() < 1e-12 * expected.abs(), "{x}");
        }
        assert!((kummer1f1(1.0, 2.0, 1.0).unwrap() - 1.718281828459045).abs() < 1e-14);
    }

    #[test]
    fn kummer_transformation_from_raw_series() {
        for &(a, b, x) in &[(0.5, 2.0, -3.0), (1.5, 3.5, -1.2), (0.2, 0.7, -0.5)] {
            let left = kummer1f1_series(a, b, x).unwrap();
            let right = x.exp() * kummer1f1_series(b - a, b, -x).unwrap();
            assert!((left - right).abs() < 1e-10 * right.abs(), "{a} {b} {x}");
        }
    }

    #[test]
    fn large_negative_argument_stays_accurate() {
        // 1F1(a; a; x) = e^x
        let v = kummer1f1(2.5, 2.5, -50.0).unwrap();
        assert!((v / f64::exp(-50.0) - 1.0).abs() < 1e-12);
        // 1F1(1/2; 3/2; -x²) = √π erf(x) / (2x)
        let x: f64 = 7.0;
        let expected = std::f64::consts::PI.sqrt() * crate::specfun::erf(x) / (2.0 * x);
        let v = kummer1f1(0.5, 1.5, -x * x).unwrap();
        assert!((v - expected).abs() < 1e-10 * expected, "{v} {expected}");
    }

    #[test]
    fn non_positive_integer_b_is_a_pole() {
        for b in [0.0, -1.0, -4.0] {
            assert!(matches!(kummer1f1(1.0, b, 0.5), Err(Error::Pole(_))));
        }
        assert!(kummer1f1(1.0, -0.5, 0.5).is_ok());
    }
}

//! Modified Bessel function of the second kind at half-integer order.

use super::{ln_factorial, log_sum_exp};
use crate::error::ensure;
use crate::Result;

/// `ln K_{m−1/2}(z)`.
///
/// Uses `K_{n+1/2}(z) = √(π/2z) e^{−z} Σ_{k≤n} (n+k)! / (k!(n−k)!) (2z)^{−k}`
/// with `n = |m − 1/2| − 1/2`. All terms are positive, so the log-space sum
/// is stable even when the value itself overflows.
pub fn ln_bessel_k_halfint(m: u32, z: f64) -> Result<f64> {
    ensure(z > 0.0 && z.is_finite(), || format!("bessel K needs z > 0, got {z}"))?;
    // K is even in its order, so K_{-1/2} = K_{1/2}
    let n = if m == 0 { 0 } else { (m - 1) as u64 };
    let ln_2z = (2.0 * z).ln();
    let terms = (0..=n).map(|k| {
        ln_factorial(n + k) - ln_factorial(k) - ln_factorial(n - k) - k as f64 * ln_2z
    });
    Ok(0.5 * (std::f64::consts::PI / (2.0 * z)).ln() - z + log_sum_exp(terms))
}

/// `K_{m−1/2}(z)` for integer `m ≥ 0` and `z > 0`.
pub fn bessel_k_halfint(m: u32, z: f64) -> Result<f64> {
    ln_bessel_k_halfint(m, z).map(f64::exp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{semi_infinite, Tolerance};

    // K_ν(z) = ∫_0^∞ e^{-z cosh u} cosh(νu) du
    fn k_by_quadrature(nu: f64, z: f64) -> f64 {
        semi_infinite(
            |u| {
                let e = -z * u.cosh() + nu * u;
                if e < -745.0 {
                    0.0
                } else {
                    0.5 * (e.exp() + (-z * u.cosh() - nu * u).exp())
                }
            },
            0.0,
            Tolerance::new(0.0, 1e-13),
        )
        .unwrap()
    }

    #[test]
    fn half_order_closed_form() {
        let v = bessel_k_halfint(1, 1.0).unwrap();
        let expected = (std::f64::consts::PI / 2.0).sqrt() * (-1.0f64).exp();
        assert!((v - expected).abs() < 1e-15);
        assert!((v - 0.461068504447895).abs() < 1e-14);
    }

    #[test]
    fn symmetric_in_order() {
        for &z in &[0.2, 1.0, 7.5] {
            assert_eq!(bessel_k_halfint(0, z).unwrap(), bessel_k_halfint(1, z).unwrap());
        }
    }

    #[test]
    fn three_term_recurrence() {
        // K_{3/2} - K_{-1/2} - (2·(1/2)/z) K_{1/2} = 0
        for &z in &[0.5, 1.0, 5.0] {
            let r = bessel_k_halfint(2, z).unwrap()
                - bessel_k_halfint(0, z).unwrap()
                - (1.0 / z) * bessel_k_halfint(1, z).unwrap();
            assert!(r.abs() < 1e-9, "{z}: {r}");
        }
    }

    #[test]
    fn agrees_with_integral_definition() {
        for m in 0..=5u32 {
            for &z in &[0.1, 0.5, 1.0, 3.0, 10.0, 20.0] {
                let nu = m as f64 - 0.5;
                let q = k_by_quadrature(nu, z);
                let v = bessel_k_halfint(m, z).unwrap();
                assert!((v - q).abs() <= 1e-10 * q, "m={m} z={z}: {v} vs {q}");
            }
        }
    }

    #[test]
    fn rejects_non_positive_argument() {
        assert!(bessel_k_halfint(1, 0.0).is_err());
        assert!(bessel_k_halfint(1, -1.0).is_err());
    }
}

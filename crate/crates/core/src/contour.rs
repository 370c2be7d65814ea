//! Coefficient extraction from a probability generating function on a circle.
//!
//! For an integer law with pgf `G`, `(1 − G(u)) / (1 − u) = Σ_N P{X > N} u^N`,
//! so tail masses come out of the same trapezoid rule that gives the pmf
//! itself. This is how the heavy-tailed families (whose pmfs decay like
//! `n^{−α−1}`) are normalized: partial sum plus analytic tail.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::ensure;
use crate::Result;

/// `[u^n] f(u)` for `n = 0..=n_max` by an `m`-point trapezoid on `|u| = r`.
///
/// The aliasing error is `Σ_{l≥1} c_{n+lm} r^{lm}`.
fn coefficients<F>(f: F, n_max: usize, radius: f64, m: usize) -> Result<Vec<f64>>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    ensure(radius > 0.0 && radius < 1.0, || format!("contour radius must lie in (0, 1), got {radius}"))?;
    let values: Vec<Complex64> = (0..m)
        .map(|j| f(Complex64::from_polar(radius, TAU * j as f64 / m as f64)))
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, v) in values.iter().enumerate() {
            // exact angle reduction keeps e^{−inθ} accurate for large n
            let k = (n * j) % m;
            acc += v * Complex64::from_polar(1.0, -TAU * k as f64 / m as f64);
        }
        out.push(acc.re / m as f64 * radius.powi(-(n as i32)));
    }
    Ok(out)
}

/// `P{X = n}` for `n = 0..=n_max` from a complex pgf, on the circle `|u| = ½`.
///
/// Rounding grows like `2^n ε`, so this is meant for small `n`.
pub fn pgf_coefficients<F>(pgf: F, n_max: usize) -> Result<Vec<f64>>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    coefficients(pgf, n_max, 0.5, 64.max(4 * n_max))
}

/// `P{X > n}` from a complex pgf.
///
/// Uses radius `1 − 1/n` (so `r^{−n} ≈ e`) and `40n` nodes, which pushes the
/// aliasing error below `e^{−40}`.
pub fn tail_mass<F>(pgf: F, n: usize) -> Result<f64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let nn = n.max(8);
    let radius = 1.0 - 1.0 / nn as f64;
    let m = 40 * nn;
    let one = Complex64::new(1.0, 0.0);
    let c = coefficients(|u| Ok((one - pgf(u)?) / (one - u)), n, radius, m)?;
    Ok(c[n])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poisson_pgf(mu: f64) -> impl Fn(Complex64) -> Result<Complex64> {
        move |u| Ok((mu * (u - 1.0)).exp())
    }

    #[test]
    fn poisson_coefficients_and_tail() {
        let c = pgf_coefficients(poisson_pgf(1.5), 6).unwrap();
        let mut p = (-1.5f64).exp();
        let mut cdf = 0.0;
        for (n, v) in c.iter().enumerate() {
            assert!((v - p).abs() < 1e-14, "{n}");
            cdf += p;
            p *= 1.5 / (n + 1) as f64;
        }
        let tail = tail_mass(poisson_pgf(1.5), 6).unwrap();
        assert!((tail - (1.0 - cdf)).abs() < 1e-14);
    }

    #[test]
    fn geometric_tail_is_exact_power() {
        // P{X > n} = q^{n+1} for P{X = n} = (1−q) qⁿ
        let q = 0.9;
        let pgf = move |u: Complex64| Ok((1.0 - q) / (1.0 - q * u));
        for &n in &[1usize, 10, 64, 200] {
            let v = tail_mass(pgf, n).unwrap();
            assert!((v - q.powi(n as i32 + 1)).abs() < 1e-13, "{n}: {v}");
        }
    }

    #[test]
    fn heavy_tail_sibuya() {
        // pgf 1 − (1−u)^a has P{X > n} = Γ(n+1−a)/(Γ(1−a) Γ(n+1))
        let a = 0.5;
        let one = Complex64::new(1.0, 0.0);
        let pgf = move |u: Complex64| Ok(one - (one - u).powf(a));
        let n = 64usize;
        let expected = (crate::specfun::ln_gamma(n as f64 + 1.0 - a)
            - crate::specfun::ln_gamma(1.0 - a)
            - crate::specfun::ln_gamma(n as f64 + 1.0))
        .exp();
        let v = tail_mass(pgf, n).unwrap();
        assert!((v - expected).abs() < 1e-13, "{v} vs {expected}");
    }
}

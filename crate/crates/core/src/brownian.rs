//! The GCP at Brownian clocks: first passage (with and without drift),
//! squared Bessel, elastic and sojourn time.
//!
//! For a clock `C` independent of `M`,
//! `P{M(C) = n} = Σ_z W(n, z) E[C^z e^{−ΛC}]`, so each family only needs the
//! clock functional `F(z) = E[C^z e^{−ΛC}]` in closed form.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::clocks::{elastic_density, elastic_q};
use crate::error::ensure;
use crate::gcp::{MeanVar, OmegaTable};
use crate::quad::{semi_infinite, Tolerance};
use crate::specfun::{kummer1f1, ln_bessel_k_halfint, ln_beta, ln_factorial, ln_gamma, ml3};
use crate::{Error, GcpParams, Result};

fn check_time(t: f64) -> Result<()> {
    ensure(t > 0.0 && t.is_finite(), || format!("time must be positive, got {t}"))
}

fn check_u(u: f64) -> Result<()> {
    ensure(u.abs() <= 1.0, || format!("pgf argument must satisfy |u| <= 1, got {u}"))
}

/// `Σ_z W(n, z) e^{ln_f(z)}` for every `n ≤ n_max`.
fn mix_ln(p: &GcpParams, n_max: u64, ln_f: impl Fn(u64) -> Result<f64>) -> Result<Vec<f64>> {
    let ln_f: Vec<f64> = (0..=n_max).map(&ln_f).collect::<Result<_>>()?;
    let table = OmegaTable::new(p, n_max);
    (0..=n_max).map(|n| table.sum_ln(n, |z| Ok(ln_f[z as usize]))).collect()
}

/// `Σ_z W(n, z) f[z]` for signed values.
fn mix_values(p: &GcpParams, f: &[f64]) -> Vec<f64> {
    let n_max = f.len() as u64 - 1;
    let table = OmegaTable::new(p, n_max);
    (0..=n_max)
        .map(|n| table.weights(n).map(|(z, w)| w.exp() * f[z as usize]).sum())
        .collect()
}

/// `Σ_{j ≤ n∧k} λ_j p(n−j)`.
fn shift_sum(p: &GcpParams, pmf: &[f64], n: usize) -> f64 {
    p.rates()
        .iter()
        .enumerate()
        .take_while(|(i, _)| *i < n)
        .map(|(i, l)| l * pmf[n - i - 1])
        .sum()
}

// ---------------------------------------------------------------- first passage

fn ln_fpd_functional(lambda: f64, mu: f64, z: u64, t: f64) -> Result<f64> {
    // ∫ s^z e^{−Λs} t e^{−(t−μs)²/2s} / √(2πs³) ds
    //   = (√2 t/√π) e^{μt} (t²/(2Λ+μ²))^{z/2−1/4} K_{z−1/2}(t√(2Λ+μ²))
    let a = 2.0 * lambda + mu * mu;
    let zf = z as f64;
    Ok(0.5 * 2f64.ln() + t.ln() - 0.5 * PI.ln()
        + mu * t
        + (0.5 * zf - 0.25) * (2.0 * t.ln() - a.ln())
        + ln_bessel_k_halfint(z as u32, t * a.sqrt())?)
}

/// `P{M(Z(t)) = n}` for `n = 0..=n_max`, `Z` the first passage of Brownian motion to `t`.
pub fn fp_pmf_vec(p: &GcpParams, n_max: u64, t: f64) -> Result<Vec<f64>> {
    check_time(t)?;
    mix_ln(p, n_max, |z| ln_fpd_functional(p.lambda(), 0.0, z, t))
}

pub fn fp_pmf(p: &GcpParams, n: u64, t: f64) -> Result<f64> {
    Ok(fp_pmf_vec(p, n, t)?[n as usize])
}

/// `exp(−t √(2ψ(u)))`.
pub fn fp_pgf(p: &GcpParams, u: f64, t: f64) -> Result<f64> {
    check_u(u)?;
    check_time(t)?;
    Ok((-t * (2.0 * p.psi(u)).sqrt()).exp())
}

pub fn fp_pgf_complex(p: &GcpParams, u: Complex64, t: f64) -> Complex64 {
    (-t * (2.0 * p.psi_complex(u)).sqrt()).exp()
}

fn second_difference(f: impl Fn(f64) -> Result<Vec<f64>>, t: f64, h: f64) -> Result<[Vec<f64>; 3]> {
    ensure(h > 0.0 && t > h, || format!("need t > h > 0, got t = {t}, h = {h}"))?;
    Ok([f(t - h)?, f(t)?, f(t + h)?])
}

/// `p̂'' − 2(Λp̂ − Σλ_j p̂(n−j))` by central differences.
pub fn fp_ode_residual(p: &GcpParams, n: u64, t: f64, h: f64) -> Result<f64> {
    fpd_ode_residual(p, 0.0, n, t, h)
}

/// `P{M(Z^μ(t)) = n}`; for `μ < 0` the law is defective with mass `e^{2μt}`.
pub fn fpd_pmf_vec(p: &GcpParams, mu: f64, n_max: u64, t: f64) -> Result<Vec<f64>> {
    check_time(t)?;
    ensure(mu.is_finite(), || format!("drift must be finite, got {mu}"))?;
    mix_ln(p, n_max, |z| ln_fpd_functional(p.lambda(), mu, z, t))
}

pub fn fpd_pmf(p: &GcpParams, mu: f64, n: u64, t: f64) -> Result<f64> {
    Ok(fpd_pmf_vec(p, mu, n, t)?[n as usize])
}

/// `exp(μt − t √(μ² + 2ψ(u)))`.
pub fn fpd_pgf(p: &GcpParams, mu: f64, u: f64, t: f64) -> Result<f64> {
    check_u(u)?;
    check_time(t)?;
    Ok((mu * t - t * (mu * mu + 2.0 * p.psi(u)).sqrt()).exp())
}

pub fn fpd_pgf_complex(p: &GcpParams, mu: f64, u: Complex64, t: f64) -> Complex64 {
    (mu * t - t * (mu * mu + 2.0 * p.psi_complex(u)).sqrt()).exp()
}

/// Mean `c₁t/μ`, variance `(c₂ + (c₁/μ)²) t/μ`; infinite for `μ ≤ 0`.
pub fn fpd_moments(p: &GcpParams, mu: f64, t: f64) -> Result<MeanVar> {
    check_time(t)?;
    if mu <= 0.0 {
        return Err(Error::InfiniteMoment(format!("first-passage clock with drift {mu} <= 0")));
    }
    let r = p.c1() / mu;
    Ok(MeanVar { mean: r * t, var: (p.c2() + r * r) * t / mu })
}

/// `p̂'' − 2μp̂' − 2(Λp̂ − Σλ_j p̂(n−j))` by central differences.
pub fn fpd_ode_residual(p: &GcpParams, mu: f64, n: u64, t: f64, h: f64) -> Result<f64> {
    let [lo, mid, hi] = second_difference(|s| fpd_pmf_vec(p, mu, n, s), t, h)?;
    let n = n as usize;
    let d2 = (hi[n] - 2.0 * mid[n] + lo[n]) / (h * h);
    let d1 = (hi[n] - lo[n]) / (2.0 * h);
    Ok(d2 - 2.0 * mu * d1 - 2.0 * (p.lambda() * mid[n] - shift_sum(p, &mid, n)))
}

// ---------------------------------------------------------------- squared Bessel

fn check_dim(dim: f64) -> Result<()> {
    ensure(dim > 0.0 && dim.is_finite(), || format!("dimension must be positive, got {dim}"))
}

/// `P{M(R(t)) = n}` for a squared Bessel clock of dimension `dim`.
///
/// `F(z) = (2t)^z Γ(z+γ/2) / (Γ(γ/2) (2Λt+1)^{z+γ/2})`.
pub fn bessel_pmf_vec(p: &GcpParams, dim: f64, n_max: u64, t: f64) -> Result<Vec<f64>> {
    check_time(t)?;
    check_dim(dim)?;
    let a = 0.5 * dim;
    let base = (2.0 * p.lambda() * t + 1.0).ln();
    mix_ln(p, n_max, |z| {
        let zf = z as f64;
        Ok(zf * (2.0 * t).ln() + ln_gamma(zf + a) - ln_gamma(a) - (zf + a) * base)
    })
}

pub fn bessel_pmf(p: &GcpParams, dim: f64, n: u64, t: f64) -> Result<f64> {
    Ok(bessel_pmf_vec(p, dim, n, t)?[n as usize])
}

/// `(1 + 2tψ(u))^{−γ/2}`.
pub fn bessel_pgf(p: &GcpParams, dim: f64, u: f64, t: f64) -> Result<f64> {
    check_u(u)?;
    check_time(t)?;
    check_dim(dim)?;
    Ok((1.0 + 2.0 * t * p.psi(u)).powf(-0.5 * dim))
}

/// Mean `c₁γt`, variance `c₂γt + 2γ(c₁t)²`.
pub fn bessel_moments(p: &GcpParams, dim: f64, t: f64) -> Result<MeanVar> {
    check_time(t)?;
    check_dim(dim)?;
    let ct = p.c1() * t;
    Ok(MeanVar { mean: ct * dim, var: p.c2() * dim * t + 2.0 * dim * ct * ct })
}

// ---------------------------------------------------------------- elastic

/// How [`elastic_pmf`] evaluates the clock functional.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElasticMethod {
    /// Mittag-Leffler expansion, valid for any `Λ, γ`.
    Series,
    /// Closed form for `Λ = γ`.
    EqualRate,
    /// Direct quadrature against the elastic density; the reference.
    Quadrature,
}

const SERIES_TOL: f64 = 1e-17;
const SERIES_MAX: usize = 400;

/// `E[B^z e^{−ΛB}; B > 0]` as a Mittag-Leffler series in the absorbing rate.
///
/// `z!(t/2)^{z/2} Σ_r (−γx)^r E^{z+1}_{1/2,(r+z)/2+1}(−Λx)`, `x = √(t/2)`.
fn elastic_series_functional(lambda: f64, g: f64, z: u64, t: f64) -> Result<f64> {
    let x = (0.5 * t).sqrt();
    let zf = z as f64;
    let prefactor = (ln_factorial(z) + 0.5 * zf * (0.5 * t).ln()).exp();
    let mut sum = 0.0;
    let mut pow = 1.0;
    for r in 0..SERIES_MAX {
        let term = pow * ml3(0.5, 0.5 * (r as f64 + zf) + 1.0, zf + 1.0, -lambda * x)?;
        sum += term;
        if r > 2 && term.abs() <= SERIES_TOL * sum.abs() {
            return Ok(prefactor * sum);
        }
        pow *= -g * x;
    }
    Err(Error::NonConvergence(format!("elastic series at z = {z}, t = {t}")))
}

/// `E[B^z e^{−ΛB}; B > 0]` for `Λ = γ`: `z!(t/2)^{z/2} E^{z+2}_{1/2,z/2+1}(−Λx)`.
fn elastic_equal_rate_functional(lambda: f64, z: u64, t: f64) -> Result<f64> {
    let x = (0.5 * t).sqrt();
    let zf = z as f64;
    let prefactor = (ln_factorial(z) + 0.5 * zf * (0.5 * t).ln()).exp();
    Ok(prefactor * ml3(0.5, 0.5 * zf + 1.0, zf + 2.0, -lambda * x)?)
}

/// `E[B^z e^{−ΛB}; B > 0]` by quadrature in the diffusive scale `s = √t·v`.
fn elastic_quadrature_functional(lambda: f64, g: f64, z: u64, t: f64) -> Result<f64> {
    let st = t.sqrt();
    let zf = z as f64;
    let v = semi_infinite(
        |v| {
            let s = st * v;
            let d = (-lambda * s).exp() * elastic_density(g, s, t).unwrap_or(0.0);
            if d == 0.0 {
                0.0
            } else {
                v.powf(zf) * d
            }
        },
        0.0,
        Tolerance::new(1e-15, 1e-13),
    )?;
    Ok(v * st.powf(zf + 1.0))
}

fn check_elastic(p: &GcpParams, g: f64, t: f64, method: ElasticMethod) -> Result<()> {
    check_time(t)?;
    ensure(g > 0.0 && g.is_finite(), || format!("absorbing rate must be positive, got {g}"))?;
    if method == ElasticMethod::EqualRate {
        ensure((p.lambda() - g).abs() <= 1e-12 * g, || {
            format!("equal-rate formula needs Λ = γ, got Λ = {}, γ = {g}", p.lambda())
        })?;
    }
    Ok(())
}

/// `P{M(B^{el}(t)) = n}` for `n = 0..=n_max`.
pub fn elastic_pmf_vec(
    p: &GcpParams,
    g: f64,
    n_max: u64,
    t: f64,
    method: ElasticMethod,
) -> Result<Vec<f64>> {
    check_elastic(p, g, t, method)?;
    let lambda = p.lambda();
    let f: Vec<f64> = (0..=n_max)
        .map(|z| match method {
            // the series loses all digits deep in the tail; quadrature takes over there
            ElasticMethod::Series => match elastic_series_functional(lambda, g, z, t) {
                Err(Error::NonConvergence(_)) => elastic_quadrature_functional(lambda, g, z, t),
                r => r,
            },
            ElasticMethod::EqualRate => elastic_equal_rate_functional(lambda, z, t),
            ElasticMethod::Quadrature => elastic_quadrature_functional(lambda, g, z, t),
        })
        .collect::<Result<_>>()?;
    let mut pmf = mix_values(p, &f);
    pmf[0] = match method {
        // p(0) = 1 − Λx E²_{1/2,3/2}(−Λx)
        ElasticMethod::EqualRate => {
            let y = lambda * (0.5 * t).sqrt();
            1.0 - y * ml3(0.5, 1.5, 2.0, -y)?
        }
        _ => pmf[0] + elastic_q(g, t)?,
    };
    Ok(pmf)
}

pub fn elastic_pmf(p: &GcpParams, g: f64, n: u64, t: f64, method: ElasticMethod) -> Result<f64> {
    Ok(elastic_pmf_vec(p, g, n, t, method)?[n as usize])
}

/// `E e^{−ψ(u)B^{el}(t)}`, atom included.
pub fn elastic_pgf(p: &GcpParams, g: f64, u: f64, t: f64) -> Result<f64> {
    check_u(u)?;
    crate::clocks::elastic_laplace(g, p.psi(u), t)
}

// ---------------------------------------------------------------- sojourn

/// `P{M(S⁺(t)) = n}` with `S⁺(t)` the arcsine sojourn time.
///
/// `F(z) = (t^z/π) e^{−Λt} B(½, z+½) ₁F₁(½; z+1; Λt)`.
pub fn sojourn_pmf_vec(p: &GcpParams, n_max: u64, t: f64) -> Result<Vec<f64>> {
    check_time(t)?;
    let lt = p.lambda() * t;
    mix_ln(p, n_max, |z| {
        let zf = z as f64;
        Ok(zf * t.ln() - PI.ln() - lt + ln_beta(0.5, zf + 0.5) + kummer1f1(0.5, zf + 1.0, lt)?.ln())
    })
}

pub fn sojourn_pmf(p: &GcpParams, n: u64, t: f64) -> Result<f64> {
    Ok(sojourn_pmf_vec(p, n, t)?[n as usize])
}

/// `₁F₁(½; 1; −ψ(u)t)`.
pub fn sojourn_pgf(p: &GcpParams, u: f64, t: f64) -> Result<f64> {
    check_u(u)?;
    check_time(t)?;
    kummer1f1(0.5, 1.0, -p.psi(u) * t)
}

/// Moments of the GCP at the sojourn clock.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SojournMoments {
    pub mean: f64,
    /// `E[M(M−1)]`.
    pub factorial2: f64,
    pub var: f64,
}

/// Mean `c₁t/2`, `E[M(M−1)] = (3/8)(c₁t)² + Σj(j−1)λ_j t/2`, variance `(c₁t)²/8 + c₂t/2`.
pub fn sojourn_moments(p: &GcpParams, t: f64) -> Result<SojournMoments> {
    check_time(t)?;
    let ct = p.c1() * t;
    Ok(SojournMoments {
        mean: 0.5 * ct,
        factorial2: 0.375 * ct * ct + 0.5 * (p.c2() - p.c1()) * t,
        var: 0.125 * ct * ct + 0.5 * p.c2() * t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clocks::{first_passage_drift_density, sample_first_passage, squared_bessel_density};
    use crate::gcp::{gcp_pmf_vec, sample_gcp_value};
    use crate::mc::{histogram, replicate, tv_distance, McEstimate};
    use crate::quad::tanh_sinh;

    const TOL: Tolerance = Tolerance::new(1e-15, 1e-13);

    fn p11() -> GcpParams {
        GcpParams::new(vec![1.0, 1.0]).unwrap()
    }

    fn p1() -> GcpParams {
        GcpParams::new(vec![1.0]).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn fp_zero_state() {
        let v = fp_pmf(&p1(), 0, 1.0).unwrap();
        assert!((v - (-2f64.sqrt()).exp()).abs() < 1e-15);
        assert!((v - 0.243117).abs() < 1e-6);
        assert!((v - fp_pgf(&p1(), 0.0, 1.0).unwrap()).abs() < 1e-15);
        assert_eq!(fp_pgf(&p11(), 1.0, 3.0).unwrap(), 1.0);
    }

    #[test]
    fn fpd_functional_against_quadrature() {
        for &(mu, z, t) in &[(0.0, 0u64, 1.0), (0.0, 3, 0.7), (1.5, 2, 2.0), (-0.5, 4, 1.0)] {
            let lambda = 1.3;
            let q = semi_infinite(
                |s| s.powi(z as i32) * (-lambda * s).exp() * first_passage_drift_density(mu, s, t),
                0.0,
                TOL,
            )
            .unwrap();
            let v = ln_fpd_functional(lambda, mu, z, t).unwrap().exp();
            assert!(rel(v, q) < 1e-9, "{mu} {z} {t}: {v} vs {q}");
        }
    }

    #[test]
    fn fpd_zero_drift_is_fp() {
        let a = fp_pmf_vec(&p11(), 20, 1.2).unwrap();
        let b = fpd_pmf_vec(&p11(), 0.0, 20, 1.2).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn fp_ode() {
        let p = p11();
        assert!(fp_ode_residual(&p1(), 0, 1.0, 1e-3).unwrap().abs() < 1e-6);
        let r1 = fp_ode_residual(&p, 3, 1.0, 1e-3).unwrap();
        assert!(r1.abs() < 1e-4, "{r1}");
        let r2 = fp_ode_residual(&p, 3, 1.0, 2e-3).unwrap();
        assert!((r1 / r2 - 0.25).abs() < 0.05, "{}", r1 / r2);
        let d1 = fpd_ode_residual(&p, 1.5, 2, 1.0, 1e-3).unwrap();
        let d2 = fpd_ode_residual(&p, 1.5, 2, 1.0, 2e-3).unwrap();
        assert!(d1.abs() < 1e-4 && (d1 / d2 - 0.25).abs() < 0.05, "{d1} {d2}");
    }

    #[test]
    fn fp_mean_diverges() {
        let v = fp_pmf_vec(&p11(), 1000, 1.0).unwrap();
        let partial: Vec<f64> = [10usize, 100, 1000]
            .iter()
            .map(|&n| v[..=n].iter().enumerate().map(|(i, x)| i as f64 * x).sum())
            .collect();
        assert!(partial[1] > 2.5 * partial[0] && partial[2] > 2.5 * partial[1], "{partial:?}");
    }

    #[test]
    fn fp_composition_mc() {
        let p = p11();
        let draws = replicate(31, 200_000, |r| {
            let z = sample_first_passage(1.0, r).unwrap();
            sample_gcp_value(&p, z, r)
        });
        let tv = tv_distance(&histogram(&draws, 30), &fp_pmf_vec(&p, 30, 1.0).unwrap());
        assert!(tv < 0.01, "{tv}");
    }

    #[test]
    fn fpd_moment_examples() {
        let m = fpd_moments(&p1(), 2.0, 4.0).unwrap();
        assert!((m.mean - 2.0).abs() < 1e-15 && (m.var - 2.5).abs() < 1e-15);
        assert!(matches!(fpd_moments(&p1(), 0.0, 1.0), Err(Error::InfiniteMoment(_))));
        // against the pmf itself
        let v = fpd_pmf_vec(&p11(), 2.0, 200, 1.0).unwrap();
        let mean: f64 = v.iter().enumerate().map(|(n, x)| n as f64 * x).sum();
        assert!((mean - fpd_moments(&p11(), 2.0, 1.0).unwrap().mean).abs() < 1e-9);
    }

    #[test]
    fn bessel_examples() {
        let p = GcpParams::new(vec![1.0]).unwrap();
        assert!((bessel_pmf(&p, 2.0, 0, 1.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let m = bessel_moments(&p11(), 2.0, 0.5).unwrap();
        assert!((m.mean - 3.0).abs() < 1e-15 && (m.var - 14.0).abs() < 1e-13);
        // k = 1 so pmf(n) = λⁿ F(n)/n!
        let p = GcpParams::new(vec![2.0]).unwrap();
        let v = bessel_pmf_vec(&p, 0.7, 3, 1.3).unwrap();
        let q = semi_infinite(
            |s| s.powi(3) * (-2.0 * s).exp() * squared_bessel_density(0.7, s, 1.3),
            0.0,
            TOL,
        )
        .unwrap();
        assert!(rel(v[3], 8.0 / 6.0 * q) < 1e-9);
    }

    #[test]
    fn sojourn_examples() {
        let m = sojourn_moments(&p1(), 2.0).unwrap();
        assert!((m.var - 1.5).abs() < 1e-15 && (m.mean - 1.0).abs() < 1e-15);
        assert_eq!(sojourn_pgf(&p11(), 1.0, 2.0).unwrap(), 1.0);
        // functional against arcsine quadrature, k = 1 so pmf(n) = λⁿ F(n)/n!
        let p = GcpParams::new(vec![1.4]).unwrap();
        let t = 1.7;
        let v = sojourn_pmf_vec(&p, 4, t).unwrap();
        for n in 0..=4i32 {
            let q = tanh_sinh(
                |th| {
                    let x = t * th.sin().powi(2);
                    x.powi(n) * (-1.4 * x).exp() * 2.0 / PI
                },
                0.0,
                PI / 2.0,
                TOL,
            )
            .unwrap();
            let expected = 1.4f64.powi(n) / crate::specfun::gamma(n as f64 + 1.0) * q;
            assert!(rel(v[n as usize], expected) < 1e-10, "{n}");
        }
        // moments from the pmf
        let v = sojourn_pmf_vec(&p11(), 120, 2.0).unwrap();
        let mean: f64 = v.iter().enumerate().map(|(n, x)| n as f64 * x).sum();
        let m2: f64 = v.iter().enumerate().map(|(n, x)| (n * n) as f64 * x).sum();
        let m = sojourn_moments(&p11(), 2.0).unwrap();
        assert!((mean - m.mean).abs() < 1e-10);
        assert!((m2 - mean * mean - m.var).abs() < 1e-9);
        assert!((m2 - mean - m.factorial2).abs() < 1e-9);
    }

    #[test]
    fn elastic_methods_agree() {
        let p = p1();
        let q = elastic_pmf_vec(&p, 0.5, 12, 1.0, ElasticMethod::Quadrature).unwrap();
        let s = elastic_pmf_vec(&p, 0.5, 12, 1.0, ElasticMethod::Series).unwrap();
        for n in 0..=12 {
            assert!((q[n] - s[n]).abs() < 1e-10, "{n}: {} vs {}", q[n], s[n]);
        }
        let e = elastic_pmf_vec(&p, 1.0, 12, 1.0, ElasticMethod::EqualRate).unwrap();
        let q = elastic_pmf_vec(&p, 1.0, 12, 1.0, ElasticMethod::Quadrature).unwrap();
        for n in 0..=12 {
            assert!((q[n] - e[n]).abs() < 1e-10, "{n}: {} vs {}", q[n], e[n]);
        }
        let pk = GcpParams::new(vec![0.7, 0.3]).unwrap();
        let a = elastic_pmf_vec(&pk, 2.0, 10, 2.0, ElasticMethod::Quadrature).unwrap();
        let b = elastic_pmf_vec(&pk, 2.0, 10, 2.0, ElasticMethod::Series).unwrap();
        for n in 0..=10 {
            assert!((a[n] - b[n]).abs() < 1e-10, "{n}");
        }
        assert!(matches!(
            elastic_pmf(&pk, 2.0, 0, 1.0, ElasticMethod::EqualRate),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn elastic_small_time_and_pgf() {
        let p = p11();
        // 1 − p(0) = E[1 − e^{−ΛB}] ≤ Λ E B = O(√t)
        for &t in &[1e-6, 1e-10, 1e-14] {
            let v = elastic_pmf(&p, 0.8, 0, t, ElasticMethod::Quadrature).unwrap();
            assert!((1.0 - v) < 2.0 * t.sqrt(), "{t}: {v}");
        }
        let pmf = elastic_pmf_vec(&p, 0.8, 60, 1.0, ElasticMethod::Quadrature).unwrap();
        let s: f64 = pmf.iter().sum();
        assert!((s - 1.0).abs() < 1e-9);
        let dual: f64 = pmf.iter().enumerate().map(|(n, x)| 0.5f64.powi(n as i32) * x).sum();
        assert!((dual - elastic_pgf(&p, 0.8, 0.5, 1.0).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn k1_matches_general_path() {
        // general-k code with λ₂ = 0 reproduces k = 1
        let a = bessel_pmf_vec(&GcpParams::new(vec![0.9]).unwrap(), 1.5, 15, 1.1).unwrap();
        let b = bessel_pmf_vec(&GcpParams::new(vec![0.9, 0.0]).unwrap(), 1.5, 15, 1.1).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
        let g = gcp_pmf_vec(&p1(), 5, 1.0).unwrap();
        assert!(g.iter().all(|x| *x > 0.0));
    }

    #[test]
    fn sojourn_mean_by_mc() {
        let p = p1();
        let xs = replicate(32, 200_000, |r| {
            let s = crate::clocks::sample_arcsine(2.0, r).unwrap();
            sample_gcp_value(&p, s, r)
        });
        assert!(McEstimate::from_samples(&xs).within(1.0, 4.0));
    }
}

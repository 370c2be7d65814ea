//! The GCP subordinated to stable, inverse stable, incomplete-gamma and
//! tempered incomplete-gamma clocks.
//!
//! For a subordinator `G` with Laplace exponent φ the pmf is
//! `Σ_z W(n, z) E[G^z e^{−ΛG}]`, and the expectations are the derivatives
//! `(−∂_Λ)^z e^{−tφ(Λ)}` produced by [`exp_phi_jet`].

use num_complex::Complex64;
use rand::Rng;

use crate::clocks::CompoundPoissonClock;
use crate::error::ensure;
use crate::gcp::{sample_gcp_value, Moments, OmegaTable};
use crate::mc::{replicate, McEstimate, McRng};
use crate::specfun::{
    beta, exp_phi_jet, gamma, inc_beta, lower_inc_gamma, lower_inc_gamma_complex, PhiKind,
    MAX_JET_ORDER,
};
use crate::{Error, GcpParams, Result};

/// `Σ_z W(n, z) (−∂_Λ)^z e^{−tφ(Λ)}` for `n = 0..=n_max`.
pub fn jet_pmf_vec(p: &GcpParams, kind: PhiKind, n_max: u64, t: f64) -> Result<Vec<f64>> {
    kind.validate()?;
    ensure(t >= 0.0, || format!("time must be non-negative, got {t}"))?;
    if n_max as usize > MAX_JET_ORDER {
        return Err(Error::OrderOverflow { order: n_max as usize, max: MAX_JET_ORDER });
    }
    if t == 0.0 {
        let mut v = vec![0.0; n_max as usize + 1];
        v[0] = 1.0;
        return Ok(v);
    }
    let jet = exp_phi_jet(kind, t, p.lambda(), n_max as usize)?;
    let table = OmegaTable::new(p, n_max);
    Ok((0..=n_max)
        .map(|n| table.weights(n).map(|(z, w)| w.exp() * jet[z as usize]).sum())
        .collect())
}

fn check_u(u: f64) -> Result<()> {
    ensure(u.abs() <= 1.0, || format!("pgf argument must satisfy |u| <= 1, got {u}"))
}

fn check_beta(b: f64) -> Result<()> {
    ensure(b > 0.0 && b <= 1.0, || format!("beta must lie in (0, 1], got {b}"))
}

// ---------------------------------------------------------------- stable clock

/// `P{M(D_β(t)) = n}`.
pub fn gsfcp_pmf_vec(p: &GcpParams, beta_: f64, n_max: u64, t: f64) -> Result<Vec<f64>> {
    jet_pmf_vec(p, PhiKind::StablePower { beta: beta_ }, n_max, t)
}

pub fn gsfcp_pmf(p: &GcpParams, beta_: f64, n: u64, t: f64) -> Result<f64> {
    Ok(gsfcp_pmf_vec(p, beta_, n, t)?[n as usize])
}

/// `exp(−t ψ(u)^β)`.
pub fn gsfcp_pgf(p: &GcpParams, beta_: f64, u: f64, t: f64) -> Result<f64> {
    check_beta(beta_)?;
    check_u(u)?;
    Ok((-t * p.psi(u).powf(beta_)).exp())
}

pub fn gsfcp_pgf_complex(p: &GcpParams, beta_: f64, u: Complex64, t: f64) -> Complex64 {
    (-t * p.psi_complex(u).powf(beta_)).exp()
}

// ---------------------------------------------------------------- inverse stable clock

/// `E M(Y_β(t)) = c₁t^β / Γ(β+1)`.
pub fn gfcp_mean(p: &GcpParams, beta_: f64, t: f64) -> Result<f64> {
    check_beta(beta_)?;
    ensure(t >= 0.0, || format!("time must be non-negative, got {t}"))?;
    Ok(p.c1() * t.powf(beta_) / gamma(beta_ + 1.0))
}

/// `Cov(M(Y_β(s)), M(Y_β(t)))`, `0 < s ≤ t`.
pub fn gfcp_cov(p: &GcpParams, beta_: f64, s: f64, t: f64) -> Result<f64> {
    check_beta(beta_)?;
    ensure(s > 0.0, || format!("time must be positive, got {s}"))?;
    if s > t {
        return Err(Error::Order { s, t });
    }
    let g1 = gamma(beta_ + 1.0);
    let c = p.c1() / g1;
    let bracket = beta_ * beta(beta_, beta_ + 1.0) * s.powf(2.0 * beta_)
        + beta_ * t.powf(2.0 * beta_) * inc_beta(beta_, beta_ + 1.0, s / t)?
        - (t * s).powf(beta_);
    Ok(c * c * bracket + p.c2() * s.powf(beta_) / g1)
}

// ---------------------------------------------------------------- incomplete gamma clock

fn incgamma_kind(alpha: f64, eps: f64) -> Result<PhiKind> {
    ensure(alpha > 0.0 && alpha < 1.0, || format!("alpha must lie in (0, 1), got {alpha}"))?;
    let k = PhiKind::IncGamma { alpha, eps };
    k.validate()?;
    Ok(k)
}

/// `E e^{−sM(G_ε(t))} = exp(−αtε^{−α} γ(α; εψ_L(s)))`.
pub fn incgamma_gcp_laplace(p: &GcpParams, alpha: f64, eps: f64, s: f64, t: f64) -> Result<f64> {
    ensure(s >= 0.0, || format!("Laplace argument must be non-negative, got {s}"))?;
    Ok((-t * incgamma_kind(alpha, eps)?.eval(p.psi_laplace(s))?).exp())
}

/// `exp(−αtε^{−α} γ(α; εψ(u)))`.
pub fn incgamma_gcp_pgf(p: &GcpParams, alpha: f64, eps: f64, u: f64, t: f64) -> Result<f64> {
    check_u(u)?;
    Ok((-t * incgamma_kind(alpha, eps)?.eval(p.psi(u))?).exp())
}

pub fn incgamma_gcp_pgf_complex(
    p: &GcpParams,
    alpha: f64,
    eps: f64,
    u: Complex64,
    t: f64,
) -> Result<Complex64> {
    let g = lower_inc_gamma_complex(alpha, eps * p.psi_complex(u))?;
    Ok((-t * alpha * eps.powf(-alpha) * g).exp())
}

pub fn incgamma_gcp_pmf_vec(p: &GcpParams, alpha: f64, eps: f64, n_max: u64, t: f64) -> Result<Vec<f64>> {
    jet_pmf_vec(p, incgamma_kind(alpha, eps)?, n_max, t)
}

pub fn incgamma_gcp_pmf(p: &GcpParams, alpha: f64, eps: f64, n: u64, t: f64) -> Result<f64> {
    Ok(incgamma_gcp_pmf_vec(p, alpha, eps, n, t)?[n as usize])
}

/// Draw of `M(G(t))` where `G` is a compound-Poisson clock.
pub fn sample_compound_gcp<R: Rng + ?Sized>(
    p: &GcpParams,
    clock: &CompoundPoissonClock,
    t: f64,
    rng: &mut R,
) -> Result<f64> {
    let g = clock.sample_value(t, rng)?;
    Ok(sample_gcp_value(p, g, rng))
}

// ---------------------------------------------------------------- tails

/// Fewest exceedances accepted at any grid point.
pub const MIN_EXCEEDANCES: usize = 100;

/// Empirical survival on a grid and its log-log regression.
#[derive(Debug, Clone, PartialEq)]
pub struct TailFit {
    pub y: Vec<f64>,
    pub survival: Vec<McEstimate>,
    pub slope: f64,
    pub intercept: f64,
}

/// Least-squares slope of `ln P̂{X > y}` against `ln y`.
pub fn tail_fit(draws: &[f64], y_grid: &[f64]) -> Result<TailFit> {
    ensure(y_grid.len() >= 2, || "tail fit needs at least two grid points".into())?;
    let mut sorted = draws.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let mut survival = Vec::with_capacity(y_grid.len());
    for &y in y_grid {
        let found = n - sorted.partition_point(|x| *x <= y);
        if found < MIN_EXCEEDANCES {
            return Err(Error::InsufficientSamples { y, found, needed: MIN_EXCEEDANCES });
        }
        let pr = found as f64 / n as f64;
        survival.push(McEstimate { value: pr, stderr: (pr * (1.0 - pr) / n as f64).sqrt(), reps: n });
    }
    let xs: Vec<f64> = y_grid.iter().map(|y| y.ln()).collect();
    let ys: Vec<f64> = survival.iter().map(|s| s.value.ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    Ok(TailFit { y: y_grid.to_vec(), survival, slope, intercept: my - slope * mx })
}

/// `n` log-spaced points from `lo` to `hi`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

fn simulate_tail(
    p: &GcpParams,
    clock: CompoundPoissonClock,
    y_grid: &[f64],
    t: f64,
    seed: u64,
    reps: usize,
) -> Result<TailFit> {
    let draws: Vec<f64> = replicate(seed, reps, |r: &mut McRng| sample_compound_gcp(p, &clock, t, r))
        .into_iter()
        .collect::<Result<_>>()?;
    tail_fit(&draws, y_grid)
}

/// MC slope of `ln P{M(G_ε(t)) > y}` in `ln y`; the tail is `tc₁^α y^{−α}/Γ(1−α)`.
pub fn incgamma_tail_slope(
    p: &GcpParams,
    alpha: f64,
    eps: f64,
    y_grid: &[f64],
    t: f64,
    seed: u64,
    reps: usize,
) -> Result<TailFit> {
    simulate_tail(p, CompoundPoissonClock::incgamma(alpha, eps)?, y_grid, t, seed, reps)
}

/// Same estimate for the tempered clock.
pub fn tempered_tail_slope(
    p: &GcpParams,
    alpha: f64,
    theta: f64,
    y_grid: &[f64],
    t: f64,
    seed: u64,
    reps: usize,
) -> Result<TailFit> {
    simulate_tail(p, CompoundPoissonClock::tempered(alpha, theta)?, y_grid, t, seed, reps)
}

/// `t c₁^α y^{−α} / Γ(1−α)`.
pub fn incgamma_tail_asymptote(p: &GcpParams, alpha: f64, y: f64, t: f64) -> f64 {
    t * p.c1().powf(alpha) * y.powf(-alpha) / gamma(1.0 - alpha)
}

// ---------------------------------------------------------------- tempered clock

fn tempered_kind(alpha: f64, theta: f64) -> Result<PhiKind> {
    ensure(alpha > 0.0 && alpha < 1.0, || format!("alpha must lie in (0, 1), got {alpha}"))?;
    let k = PhiKind::TemperedIncGamma { alpha, theta };
    k.validate()?;
    Ok(k)
}

/// `exp(−αt(γ(α; ψ_L(s)+θ) − γ(α; θ)))`.
pub fn tempered_gcp_laplace(p: &GcpParams, alpha: f64, theta: f64, s: f64, t: f64) -> Result<f64> {
    ensure(s >= 0.0, || format!("Laplace argument must be non-negative, got {s}"))?;
    Ok((-t * tempered_kind(alpha, theta)?.eval(p.psi_laplace(s))?).exp())
}

pub fn tempered_gcp_pgf(p: &GcpParams, alpha: f64, theta: f64, u: f64, t: f64) -> Result<f64> {
    check_u(u)?;
    Ok((-t * tempered_kind(alpha, theta)?.eval(p.psi(u))?).exp())
}

pub fn tempered_gcp_pgf_complex(
    p: &GcpParams,
    alpha: f64,
    theta: f64,
    u: Complex64,
    t: f64,
) -> Result<Complex64> {
    let hi = lower_inc_gamma_complex(alpha, p.psi_complex(u) + theta)?;
    let lo = lower_inc_gamma(alpha, theta)?;
    Ok((-t * alpha * (hi - lo)).exp())
}

pub fn tempered_gcp_pmf_vec(p: &GcpParams, alpha: f64, theta: f64, n_max: u64, t: f64) -> Result<Vec<f64>> {
    jet_pmf_vec(p, tempered_kind(alpha, theta)?, n_max, t)
}

pub fn tempered_gcp_pmf(p: &GcpParams, alpha: f64, theta: f64, n: u64, t: f64) -> Result<f64> {
    Ok(tempered_gcp_pmf_vec(p, alpha, theta, n, t)?[n as usize])
}

fn tempered_var(p: &GcpParams, alpha: f64, theta: f64, t: f64) -> f64 {
    let m = alpha * t * theta.powf(alpha - 1.0) * (-theta).exp();
    let v = m + alpha * (1.0 - alpha) * t * theta.powf(alpha - 2.0) * (-theta).exp();
    p.c1() * p.c1() * v + p.c2() * m
}

/// Mean, variance at `t` and covariance between `s ≤ t`.
pub fn tempered_gcp_moments(p: &GcpParams, alpha: f64, theta: f64, s: f64, t: f64) -> Result<Moments> {
    tempered_kind(alpha, theta)?;
    ensure(s > 0.0, || format!("time must be positive, got {s}"))?;
    if s > t {
        return Err(Error::Order { s, t });
    }
    Ok(Moments {
        mean: p.c1() * alpha * t * theta.powf(alpha - 1.0) * (-theta).exp(),
        var: tempered_var(p, alpha, theta, t),
        cov: tempered_var(p, alpha, theta, s),
    })
}

/// `Corr(M(G(s)), M(G(t))) · √(t/s)`.
pub fn tempered_corr_ratio(p: &GcpParams, alpha: f64, theta: f64, s: f64, t: f64) -> Result<f64> {
    let m = tempered_gcp_moments(p, alpha, theta, s, t)?;
    let vs = tempered_var(p, alpha, theta, s);
    Ok(m.cov / (vs * m.var).sqrt() * (t / s).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clocks::sample_stable;
    use crate::contour::pgf_coefficients;
    use crate::mc::{histogram, tv_distance};
    use crate::specfun::erf;

    fn p1() -> GcpParams {
        GcpParams::new(vec![1.0]).unwrap()
    }

    fn p11() -> GcpParams {
        GcpParams::new(vec![1.0, 1.0]).unwrap()
    }

    #[test]
    fn gsfcp_small_states() {
        let v = gsfcp_pmf_vec(&p1(), 0.5, 1, 1.0).unwrap();
        assert!((v[0] - (-1.0f64).exp()).abs() < 1e-15);
        assert!((v[1] - 0.5 * (-1.0f64).exp()).abs() < 1e-15);
        assert!((v[1] - 0.183940).abs() < 1e-6);
        assert!(matches!(gsfcp_pmf_vec(&p1(), 0.5, 65, 1.0), Err(Error::OrderOverflow { .. })));
    }

    #[test]
    fn gsfcp_composition_mc() {
        let p = p11();
        let draws = replicate(41, 200_000, |r| {
            let d = sample_stable(0.7, 1.0, r).unwrap();
            sample_gcp_value(&p, d, r)
        });
        let tv = tv_distance(&histogram(&draws, 30), &gsfcp_pmf_vec(&p, 0.7, 30, 1.0).unwrap());
        assert!(tv < 0.01, "{tv}");
    }

    #[test]
    fn jets_match_pgf_coefficients() {
        let p = GcpParams::new(vec![0.7, 0.3]).unwrap();
        let t = 1.3;
        let cases: Vec<(Vec<f64>, Vec<f64>)> = vec![
            (
                gsfcp_pmf_vec(&p, 0.6, 4, t).unwrap(),
                pgf_coefficients(|u| Ok(gsfcp_pgf_complex(&p, 0.6, u, t)), 4).unwrap(),
            ),
            (
                incgamma_gcp_pmf_vec(&p, 0.4, 1.5, 4, t).unwrap(),
                pgf_coefficients(|u| incgamma_gcp_pgf_complex(&p, 0.4, 1.5, u, t), 4).unwrap(),
            ),
            (
                tempered_gcp_pmf_vec(&p, 0.5, 1.0, 4, t).unwrap(),
                pgf_coefficients(|u| tempered_gcp_pgf_complex(&p, 0.5, 1.0, u, t), 4).unwrap(),
            ),
        ];
        for (jet, pgf) in cases {
            for n in 0..=4 {
                assert!((jet[n] - pgf[n]).abs() <= 1e-10 * pgf[n].abs(), "{n}: {} vs {}", jet[n], pgf[n]);
            }
        }
    }

    #[test]
    fn gfcp_reductions() {
        let p = p11();
        assert!((gfcp_mean(&p, 1.0, 2.0).unwrap() - 6.0).abs() < 1e-14);
        assert!((gfcp_cov(&p, 1.0, 0.7, 2.0).unwrap() - 5.0 * 0.7).abs() < 1e-12);
        let m = gfcp_mean(&p1(), 0.5, 1.0).unwrap();
        assert!((m - 2.0 / std::f64::consts::PI.sqrt()).abs() < 1e-15);
        for &b in &[0.2, 0.5, 0.8] {
            for &s in &[0.1, 0.5, 1.0] {
                assert!(gfcp_cov(&p, b, s, 1.0).unwrap() > 0.0);
                assert!(gfcp_cov(&p, b, s, s).unwrap() > 0.0);
            }
        }
        assert!(matches!(gfcp_cov(&p, 0.5, 2.0, 1.0), Err(Error::Order { .. })));
    }

    #[test]
    fn incgamma_examples() {
        let v = incgamma_gcp_pmf(&p1(), 0.5, 1.0, 0, 1.0).unwrap();
        let expected = (-0.5 * std::f64::consts::PI.sqrt() * erf(1.0)).exp();
        assert!((v - expected).abs() < 1e-14);
        assert_eq!(incgamma_gcp_pgf(&p11(), 0.5, 1.0, 1.0, 2.0).unwrap(), 1.0);
        // 1 − L(s) ~ s^α near zero
        assert!((incgamma_gcp_laplace(&p11(), 0.5, 1.0, 1e-24, 2.0).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn tempered_examples() {
        let p = GcpParams::new(vec![0.7, 0.3]).unwrap();
        let v = tempered_gcp_pmf(&p, 0.5, 1.0, 0, 1.0).unwrap();
        let phi = 0.5 * (lower_inc_gamma(0.5, 2.0).unwrap() - lower_inc_gamma(0.5, 1.0).unwrap());
        assert!((v - (-phi).exp()).abs() < 1e-15);
        let pmf = tempered_gcp_pmf_vec(&p, 0.5, 1.0, 64, 2.0).unwrap();
        assert!((pmf.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        let m = tempered_gcp_moments(&p1(), 0.5, 1.0, 0.5, 1.0).unwrap();
        assert!((m.mean - 0.5 * (-1.0f64).exp()).abs() < 1e-15);
        let c1 = tempered_gcp_moments(&p, 0.5, 1.0, 1.0, 2.0).unwrap().cov;
        let c2 = tempered_gcp_moments(&p, 0.5, 1.0, 1.0, 50.0).unwrap().cov;
        assert_eq!(c1, c2);
        let r = tempered_corr_ratio(&p, 0.5, 1.0, 1.0, 1e6).unwrap();
        assert!((r - 1.0).abs() < 0.01);
        // mean from the pmf
        let mean: f64 = pmf.iter().enumerate().map(|(n, x)| n as f64 * x).sum();
        let expected = tempered_gcp_moments(&p, 0.5, 1.0, 2.0, 2.0).unwrap().mean;
        assert!((mean - expected).abs() < 1e-9);
    }

    #[test]
    fn tail_fit_on_exact_pareto() {
        // X = U^{−2} has P{X > y} = y^{−1/2}
        let draws: Vec<f64> = (1..=100_000).map(|i| (i as f64 / 100_001.0).powf(-2.0)).collect();
        let fit = tail_fit(&draws, &log_grid(10.0, 1000.0, 5)).unwrap();
        assert!((fit.slope + 0.5).abs() < 0.01, "{}", fit.slope);
        assert!(matches!(
            tail_fit(&draws, &[10.0, 1e12]),
            Err(Error::InsufficientSamples { .. })
        ));
    }
}

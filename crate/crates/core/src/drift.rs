//! Drifted GCPs: deterministic drift `M(t) + bt`, the random-drift process
//! `M(D_γ(Y_β(t))) + b D_α(Y_β(t))`, and hitting times of its `β = 1` case.

use rand::Rng;

use crate::clocks::{sample_inverse_stable, sample_stable};
use crate::error::ensure;
use crate::gcp::{gcp_pmf_vec, sample_gcp_value, OmegaTable};
use crate::mc::{replicate, McEstimate, McRng};
use crate::specfun::{gamma, ln_gamma, ml3};
use crate::{Error, GcpParams, Result};

/// Law of `M(t) + bt`: atoms at `n + bt` with mass `P{M(t) = n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftedLaw {
    pub b: f64,
    pub t: f64,
    /// `(location, mass)` pairs in increasing location.
    pub atoms: Vec<(f64, f64)>,
}

impl DriftedLaw {
    /// `Σ e^{−s·loc} mass` over the stored atoms.
    pub fn laplace(&self, s: f64) -> f64 {
        self.atoms.iter().map(|(x, m)| (-s * x).exp() * m).sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|(_, m)| m).sum()
    }
}

fn check_drift(b: f64, t: f64) -> Result<()> {
    ensure(b >= 0.0 && b.is_finite(), || format!("drift must be non-negative, got {b}"))?;
    ensure(t > 0.0, || format!("time must be positive, got {t}"))
}

pub fn drifted_law(p: &GcpParams, b: f64, t: f64, n_max: u64) -> Result<DriftedLaw> {
    check_drift(b, t)?;
    let pmf = gcp_pmf_vec(p, n_max, t)?;
    let atoms = pmf.into_iter().enumerate().map(|(n, m)| (n as f64 + b * t, m)).collect();
    Ok(DriftedLaw { b, t, atoms })
}

/// `E e^{−s(M(t)+bt)} = e^{−sbt} exp(−tψ_L(s))`.
pub fn drifted_laplace(p: &GcpParams, b: f64, s: f64, t: f64) -> Result<f64> {
    check_drift(b, t)?;
    ensure(s >= 0.0, || format!("Laplace argument must be non-negative, got {s}"))?;
    Ok((-s * b * t - t * p.psi_laplace(s)).exp())
}

/// `∂_t L − (−bs − Λ + Σλ_j e^{−sj}) L` by central differences.
pub fn drifted_laplace_ode_residual(p: &GcpParams, b: f64, s: f64, t: f64, h: f64) -> Result<f64> {
    ensure(h > 0.0 && t > h, || format!("need t > h > 0, got t = {t}, h = {h}"))?;
    let d = (drifted_laplace(p, b, s, t + h)? - drifted_laplace(p, b, s, t - h)?) / (2.0 * h);
    let rate = -b * s - p.psi_laplace(s);
    Ok(d - rate * drifted_laplace(p, b, s, t)?)
}

/// Indices of the random-drift process `M(D_γ(Y_β(t))) + b D_α(Y_β(t))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomDrift {
    pub b: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub beta: f64,
}

impl RandomDrift {
    pub fn validate(&self) -> Result<()> {
        ensure(self.b >= 0.0 && self.b.is_finite(), || format!("drift must be non-negative, got {}", self.b))?;
        for (name, v) in [("alpha", self.alpha), ("gamma", self.gamma), ("beta", self.beta)] {
            ensure(v > 0.0 && v <= 1.0, || format!("{name} must lie in (0, 1], got {v}"))?;
        }
        Ok(())
    }
}

/// `E e^{−ηX(t)} = E_β(−(b^α η^α + ψ_L(η)^γ) t^β)`.
pub fn gstfcp_drift_laplace(p: &GcpParams, d: RandomDrift, eta: f64, t: f64) -> Result<f64> {
    d.validate()?;
    ensure(eta >= 0.0, || format!("Laplace argument must be non-negative, got {eta}"))?;
    ensure(t >= 0.0, || format!("time must be non-negative, got {t}"))?;
    let rate = (d.b * eta).powf(d.alpha) + p.psi_laplace(eta).powf(d.gamma);
    ml3(d.beta, 1.0, 1.0, -rate * t.powf(d.beta))
}

/// One draw of `X(t)`.
///
/// A single `Y = Y_β(t)` drives both subordinators, which are conditionally
/// independent given `Y`: `D_γ(Y) ≍ Y^{1/γ}S_γ`, `D_α(Y) ≍ Y^{1/α}S_α`.
pub fn sample_gstfcp_drift<R: Rng + ?Sized>(p: &GcpParams, d: RandomDrift, t: f64, rng: &mut R) -> Result<f64> {
    d.validate()?;
    let y = sample_inverse_stable(d.beta, t, rng)?;
    let dg = sample_stable(d.gamma, y, rng)?;
    let da = if d.b == 0.0 { 0.0 } else { sample_stable(d.alpha, y, rng)? };
    Ok(sample_gcp_value(p, dg, rng) + d.b * da)
}

/// Grid step, level and horizon cap for hitting-time paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HittingGrid {
    pub delta: f64,
    pub cap: f64,
}

/// `X(x) = M(x^{1/γ}S_γ) + b x^{1/α}S_α`, the `β = 1` marginal.
pub fn sample_hitting_marginal<R: Rng + ?Sized>(p: &GcpParams, d: RandomDrift, x: f64, rng: &mut R) -> Result<f64> {
    sample_gstfcp_drift(p, RandomDrift { beta: 1.0, ..d }, x, rng)
}

/// First grid time at which `s ↦ M(D_γ(s)) + bD_α(s)` exceeds `level`.
///
/// Each cell adds independent stable increments `δ^{1/γ}S_γ` and
/// `δ^{1/α}S_α`; the GCP advances by an exact Poisson increment over
/// the `D_γ` increment.
pub fn sample_hitting_time<R: Rng + ?Sized>(
    p: &GcpParams,
    d: RandomDrift,
    level: f64,
    grid: HittingGrid,
    rng: &mut R,
) -> Result<f64> {
    RandomDrift { beta: 1.0, ..d }.validate()?;
    ensure(grid.delta > 0.0 && grid.cap > grid.delta, || {
        format!("need cap > delta > 0, got delta = {}, cap = {}", grid.delta, grid.cap)
    })?;
    ensure(level >= 0.0, || format!("level must be non-negative, got {level}"))?;
    let steps = (grid.cap / grid.delta).ceil() as u64;
    let mut x = 0.0;
    for i in 1..=steps {
        let dg = sample_stable(d.gamma, grid.delta, rng)?;
        x += sample_gcp_value(p, dg, rng);
        if d.b > 0.0 {
            x += d.b * sample_stable(d.alpha, grid.delta, rng)?;
        }
        if x > level {
            return Ok(i as f64 * grid.delta);
        }
    }
    Err(Error::HorizonExceeded { level, cap: grid.cap })
}

/// Both sides of `P{H(t) > x} = P{X(x) < t}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualityGap {
    pub path: McEstimate,
    pub marginal: McEstimate,
}

impl DualityGap {
    pub fn gap(&self) -> f64 {
        (self.path.value - self.marginal.value).abs()
    }
}

/// Estimates both probabilities from independent path and marginal draws.
#[allow(clippy::too_many_arguments)]
pub fn hitting_duality_gap(
    p: &GcpParams,
    d: RandomDrift,
    x: f64,
    t: f64,
    grid: HittingGrid,
    seed: u64,
    reps: usize,
) -> Result<DualityGap> {
    let path: Vec<bool> = replicate(seed, reps, |r: &mut McRng| {
        sample_hitting_time(p, d, t, grid, r).map(|h| h > x)
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let marg: Vec<bool> = replicate(seed ^ 0x9e37_79b9_7f4a_7c15, reps, |r: &mut McRng| {
        sample_hitting_marginal(p, d, x, r).map(|v| v < t)
    })
    .into_iter()
    .collect::<Result<_>>()?;
    Ok(DualityGap { path: McEstimate::proportion(path), marginal: McEstimate::proportion(marg) })
}

/// Coefficients `c_m`, `m = 0..=m_max`, of the boundary series `Σ_{m ≤ t} c_m`.
///
/// `c_m = −γΛ^γ/Γ(1−γ) Σ_{z ≤ min(m, n_trunc)} Γ(z−γ) Λ^{−z} W(m, z)`.
pub fn hitting_boundary_coefficients(p: &GcpParams, gamma_: f64, m_max: u64, n_trunc: u64) -> Result<Vec<f64>> {
    ensure(gamma_ > 0.0 && gamma_ < 1.0, || format!("gamma must lie in (0, 1), got {gamma_}"))?;
    let lambda = p.lambda();
    let pre = -gamma_ * lambda.powf(gamma_) / gamma(1.0 - gamma_);
    let table = OmegaTable::new(p, m_max);
    let mut out = Vec::with_capacity(m_max as usize + 1);
    for m in 0..=m_max {
        let mut acc = 0.0;
        for (z, ln_w) in table.weights(m) {
            if z > n_trunc {
                continue;
            }
            acc += if z == 0 {
                gamma(-gamma_) * ln_w.exp()
            } else {
                (ln_gamma(z as f64 - gamma_) - z as f64 * lambda.ln() + ln_w).exp()
            };
        }
        out.push(pre * acc);
    }
    Ok(out)
}

/// The boundary series at `t`, with the Heaviside step right-continuous.
pub fn hitting_boundary_series(p: &GcpParams, gamma_: f64, t: f64, n_trunc: u64) -> Result<f64> {
    ensure(t >= 0.0, || format!("time must be non-negative, got {t}"))?;
    let c = hitting_boundary_coefficients(p, gamma_, t.floor() as u64, n_trunc)?;
    Ok(c.iter().sum())
}

/// `|∫_0^T e^{−ηt} w(t) dt − η^{−1} ψ_L(η)^γ|`.
///
/// The series is a step function, so the integral is exact piecewise:
/// `Σ_m c_m (e^{−ηm} − e^{−ηT})/η`.
pub fn hitting_boundary_laplace_gap(p: &GcpParams, gamma_: f64, eta: f64, t_max: f64, n_trunc: u64) -> Result<f64> {
    ensure(eta > 0.0, || format!("Laplace argument must be positive, got {eta}"))?;
    let c = hitting_boundary_coefficients(p, gamma_, t_max.floor() as u64, n_trunc)?;
    let tail = (-eta * t_max).exp();
    let integral: f64 = c
        .iter()
        .enumerate()
        .map(|(m, cm)| cm * ((-eta * m as f64).exp() - tail) / eta)
        .sum();
    Ok((integral - p.psi_laplace(eta).powf(gamma_) / eta).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subordinated::{gfcp_mean, gsfcp_pmf_vec};
    use crate::mc::{histogram, try_replicate, tv_distance};

    fn p1() -> GcpParams {
        GcpParams::new(vec![1.0]).unwrap()
    }

    #[test]
    fn drifted_law_examples() {
        let p = p1();
        let law = drifted_law(&p, 2.0, 1.0, 40).unwrap();
        assert_eq!(law.atoms[0].0, 2.0);
        assert!((law.atoms[0].1 - (-1.0f64).exp()).abs() < 1e-15);
        let l = drifted_laplace(&p, 2.0, 1.0, 1.0).unwrap();
        assert!((l - (-2.0 - (1.0 - (-1.0f64).exp())).exp()).abs() < 1e-15);
        assert!((l - 0.07192577756494899).abs() < 1e-15);
        assert!((law.laplace(1.0) - l).abs() < 1e-8);
        assert_eq!(drifted_laplace(&p, 2.0, 0.0, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn drifted_ode() {
        let p = GcpParams::new(vec![1.0, 1.0]).unwrap();
        assert_eq!(drifted_laplace_ode_residual(&p, 1.0, 0.0, 1.0, 1e-3).unwrap(), 0.0);
        let r1 = drifted_laplace_ode_residual(&p, 1.0, 1.0, 1.0, 1e-3).unwrap();
        let r2 = drifted_laplace_ode_residual(&p, 1.0, 1.0, 1.0, 2e-3).unwrap();
        assert!(r1.abs() < 1e-6);
        assert!((r1 / r2 - 0.25).abs() < 0.01, "{}", r1 / r2);
    }

    #[test]
    fn gstfcp_laplace_reductions_and_monotonicity() {
        let p = p1();
        let d = RandomDrift { b: 0.0, alpha: 0.5, gamma: 1.0, beta: 1.0 };
        let v = gstfcp_drift_laplace(&p, d, 0.7, 1.5).unwrap();
        assert!((v - (-1.5 * p.psi_laplace(0.7)).exp()).abs() < 1e-14);
        let d = RandomDrift { b: 1.0, alpha: 1.0, gamma: 1.0, beta: 1.0 };
        let v = gstfcp_drift_laplace(&p, d, 1.0, 1.0).unwrap();
        assert!((v - 0.19551453415258813).abs() < 1e-15);
        // completely monotone: (−Δ)^r L ≥ 0 for r ≤ 3
        let d = RandomDrift { b: 1.0, alpha: 0.5, gamma: 0.5, beta: 0.5 };
        let h = 0.1;
        let l: Vec<f64> = (0..40).map(|i| gstfcp_drift_laplace(&p, d, i as f64 * h, 1.0).unwrap()).collect();
        let mut diff = l.clone();
        for _ in 0..3 {
            diff = diff.windows(2).map(|w| w[0] - w[1]).collect();
            assert!(diff.iter().all(|x| *x >= -1e-14));
        }
    }

    #[test]
    fn gstfcp_sampler_laplace_and_reductions() {
        let p = p1();
        let d = RandomDrift { b: 1.0, alpha: 0.5, gamma: 0.5, beta: 0.5 };
        for &eta in &[0.5, 1.0, 2.0] {
            let xs = try_replicate(51, 100_000, |r| Ok((-eta * sample_gstfcp_drift(&p, d, 1.0, r)?).exp())).unwrap();
            let e = McEstimate::from_samples(&xs);
            assert!(e.within(gstfcp_drift_laplace(&p, d, eta, 1.0).unwrap(), 4.0), "{eta}: {e:?}");
        }
        let pk = GcpParams::new(vec![1.0, 1.0]).unwrap();
        let g = RandomDrift { b: 0.0, alpha: 1.0, gamma: 0.5, beta: 1.0 };
        let xs = try_replicate(52, 200_000, |r| sample_gstfcp_drift(&pk, g, 1.0, r)).unwrap();
        let tv = tv_distance(&histogram(&xs, 30), &gsfcp_pmf_vec(&pk, 0.5, 30, 1.0).unwrap());
        assert!(tv < 0.01, "{tv}");
        let f = RandomDrift { b: 0.0, alpha: 1.0, gamma: 1.0, beta: 0.6 };
        let xs = try_replicate(53, 200_000, |r| sample_gstfcp_drift(&pk, f, 2.0, r)).unwrap();
        assert!(McEstimate::from_samples(&xs).within(gfcp_mean(&pk, 0.6, 2.0).unwrap(), 4.0));
    }

    #[test]
    fn pure_drift_hitting_time() {
        let p = GcpParams::new(vec![1e-300]).unwrap();
        let d = RandomDrift { b: 2.0, alpha: 1.0, gamma: 1.0, beta: 1.0 };
        let grid = HittingGrid { delta: 1e-3, cap: 100.0 };
        let mut r = crate::mc::substream(54, 0);
        let h = sample_hitting_time(&p, d, 3.0, grid, &mut r).unwrap();
        assert!((h - 1.5).abs() <= grid.delta + 1e-12, "{h}");
        let slow = RandomDrift { b: 1e-6, ..d };
        assert!(matches!(
            sample_hitting_time(&p, slow, 3.0, HittingGrid { delta: 0.1, cap: 1.0 }, &mut r),
            Err(Error::HorizonExceeded { .. })
        ));
    }

    #[test]
    fn duality_small_run() {
        let p = p1();
        let d = RandomDrift { b: 1.0, alpha: 0.7, gamma: 0.7, beta: 1.0 };
        let g = hitting_duality_gap(&p, d, 0.5, 2.0, HittingGrid { delta: 0.01, cap: 1e4 }, 55, 20_000).unwrap();
        assert!(g.gap() < 4.0 * (g.path.stderr + g.marginal.stderr), "{g:?}");
    }

    #[test]
    fn boundary_series() {
        let p = p1();
        let v = hitting_boundary_series(&p, 0.5, 0.5, 300).unwrap();
        assert!((v - 1.0).abs() < 1e-14, "{v}");
        let gap = hitting_boundary_laplace_gap(&p, 0.5, 1.0, 200.0, 300).unwrap();
        assert!(gap < 1e-3, "{gap}");
        let pk = GcpParams::new(vec![1.0, 0.5]).unwrap();
        for &eta in &[0.5, 1.0] {
            let gap = hitting_boundary_laplace_gap(&pk, 0.5, eta, 200.0, 300).unwrap();
            assert!(gap < 1e-3, "{eta}: {gap}");
        }
    }
}

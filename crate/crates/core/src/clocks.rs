//! Random clocks: samplers, densities and Laplace transforms.
//!
//! Every sampler is exact in distribution. The one-sided stable law is drawn
//! with the Kanter / Chambers–Mallows–Stuck representation, the inverse
//! stable marginal through `Y(t) ≍ (t/S)^β`, and the incomplete-gamma
//! subordinators as compound Poisson processes.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use rand_distr::{Beta, Distribution, Exp1, Gamma, InverseGaussian, StandardNormal};

use crate::error::ensure;
use crate::gcp::sample_poisson;
use crate::specfun::{erfcx, gamma, lower_inc_gamma, ml3, upper_inc_gamma, PhiKind};
use crate::{Error, Result};

/// Cap on consecutive rejections in the tempered jump sampler.
pub const REJECTION_CAP: usize = 1_000_000;

/// The random clocks composed with the GCP.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClockSpec {
    Stable { alpha: f64 },
    InverseStable { beta: f64 },
    FirstPassage,
    FirstPassageDrift { mu: f64 },
    SquaredBessel { dim: f64 },
    ArcsineSojourn,
    Elastic { gamma: f64 },
    IncGamma { alpha: f64, eps: f64 },
    TemperedIncGamma { alpha: f64, theta: f64 },
}

fn unit_interval(name: &str, v: f64) -> Result<()> {
    ensure(v > 0.0 && v <= 1.0, || format!("{name} must lie in (0, 1], got {v}"))
}

fn positive(name: &str, v: f64) -> Result<()> {
    ensure(v > 0.0 && v.is_finite(), || format!("{name} must be positive, got {v}"))
}

impl ClockSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ClockSpec::Stable { alpha } => unit_interval("alpha", alpha),
            ClockSpec::InverseStable { beta } => unit_interval("beta", beta),
            ClockSpec::FirstPassage | ClockSpec::ArcsineSojourn => Ok(()),
            ClockSpec::FirstPassageDrift { mu } => {
                ensure(mu.is_finite(), || format!("drift must be finite, got {mu}"))
            }
            ClockSpec::SquaredBessel { dim } => positive("dimension", dim),
            ClockSpec::Elastic { gamma } => positive("absorbing rate", gamma),
            ClockSpec::IncGamma { alpha, eps } => {
                ensure(alpha > 0.0 && alpha < 1.0, || format!("alpha must lie in (0, 1), got {alpha}"))?;
                positive("epsilon", eps)
            }
            ClockSpec::TemperedIncGamma { alpha, theta } => {
                ensure(alpha > 0.0 && alpha < 1.0, || format!("alpha must lie in (0, 1), got {alpha}"))?;
                positive("theta", theta)
            }
        }
    }

    /// One draw of the clock at time `t`; `None` is the never-absorbed
    /// outcome of a first passage with negative drift.
    pub fn sample<R: Rng + ?Sized>(&self, t: f64, rng: &mut R) -> Result<Option<f64>> {
        self.validate()?;
        Ok(Some(match *self {
            ClockSpec::Stable { alpha } => sample_stable(alpha, t, rng)?,
            ClockSpec::InverseStable { beta } => sample_inverse_stable(beta, t, rng)?,
            ClockSpec::FirstPassage => sample_first_passage(t, rng)?,
            ClockSpec::FirstPassageDrift { mu } => match sample_first_passage_drift(mu, t, rng)? {
                FirstPassage::Hit(v) => v,
                FirstPassage::AbsorbedNever => return Ok(None),
            },
            ClockSpec::SquaredBessel { dim } => sample_squared_bessel(dim, t, rng)?,
            ClockSpec::ArcsineSojourn => sample_arcsine(t, rng)?,
            ClockSpec::Elastic { gamma } => sample_elastic(gamma, t, rng)?,
            ClockSpec::IncGamma { alpha, eps } => sample_incgamma_value(alpha, eps, t, rng)?,
            ClockSpec::TemperedIncGamma { alpha, theta } => {
                sample_tempered_value(alpha, theta, t, rng)?
            }
        }))
    }

    /// `E e^{−sC(t)}` in closed form, `s ≥ 0`; the drifted first passage
    /// with negative drift returns the defective transform.
    pub fn laplace(&self, s: f64, t: f64) -> Result<f64> {
        self.validate()?;
        ensure(s >= 0.0, || format!("Laplace argument must be non-negative, got {s}"))?;
        Ok(match *self {
            ClockSpec::Stable { alpha } => (-t * s.powf(alpha)).exp(),
            ClockSpec::InverseStable { beta } => ml3(beta, 1.0, 1.0, -s * t.powf(beta))?,
            ClockSpec::FirstPassage => (-t * (2.0 * s).sqrt()).exp(),
            ClockSpec::FirstPassageDrift { mu } => (mu * t - t * (mu * mu + 2.0 * s).sqrt()).exp(),
            ClockSpec::SquaredBessel { dim } => (1.0 + 2.0 * t * s).powf(-0.5 * dim),
            ClockSpec::ArcsineSojourn => {
                crate::specfun::kummer1f1(0.5, 1.0, -s * t)?
            }
            ClockSpec::Elastic { gamma } => elastic_laplace(gamma, s, t)?,
            ClockSpec::IncGamma { alpha, eps } => {
                (-t * PhiKind::IncGamma { alpha, eps }.eval(s)?).exp()
            }
            ClockSpec::TemperedIncGamma { alpha, theta } => {
                (-t * PhiKind::TemperedIncGamma { alpha, theta }.eval(s)?).exp()
            }
        })
    }
}

/// Unit one-sided stable draw, `E e^{−sS} = e^{−s^α}`.
pub fn sample_unit_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    if alpha == 1.0 {
        return 1.0;
    }
    // U uniform on (0, π), W standard exponential
    let u = PI * (1.0 - rng.random::<f64>());
    let w: f64 = Exp1.sample(rng);
    let ln_s = (alpha * u).sin().ln() - (u.sin().ln()) / alpha
        + (1.0 - alpha) / alpha * (((1.0 - alpha) * u).sin().ln() - w.ln());
    ln_s.exp()
}

/// `D_α(t) ≍ t^{1/α} S`.
pub fn sample_stable<R: Rng + ?Sized>(alpha: f64, t: f64, rng: &mut R) -> Result<f64> {
    unit_interval("alpha", alpha)?;
    ensure(t >= 0.0, || format!("time must be non-negative, got {t}"))?;
    if alpha == 1.0 {
        return Ok(t);
    }
    Ok(t.powf(1.0 / alpha) * sample_unit_stable(alpha, rng))
}

/// `Y_β(t) ≍ (t/S)^β`, from `P{Y(t) ≤ x} = P{D(x) ≥ t}` and self-similarity.
pub fn sample_inverse_stable<R: Rng + ?Sized>(beta: f64, t: f64, rng: &mut R) -> Result<f64> {
    unit_interval("beta", beta)?;
    ensure(t >= 0.0, || format!("time must be non-negative, got {t}"))?;
    if beta == 1.0 {
        return Ok(t);
    }
    Ok((t / sample_unit_stable(beta, rng)).powf(beta))
}

/// First passage of standard Brownian motion to level `t`: `t² / N²`.
pub fn sample_first_passage<R: Rng + ?Sized>(t: f64, rng: &mut R) -> Result<f64> {
    positive("level", t)?;
    let n: f64 = StandardNormal.sample(rng);
    Ok(t * t / (n * n))
}

/// `f(s, t) = t e^{−t²/2s} / √(2πs³)`.
pub fn first_passage_density(s: f64, t: f64) -> f64 {
    first_passage_drift_density(0.0, s, t)
}

/// Outcome of a first passage with drift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FirstPassage {
    Hit(f64),
    /// Brownian motion with negative drift that never reaches the level.
    AbsorbedNever,
}

/// First passage of `B(s) + μs` to level `t`.
///
/// For `μ > 0` this is inverse Gaussian with mean `t/μ` and shape `t²`. For
/// `μ < 0` the level is reached with probability `e^{2μt}` only, and then at
/// an inverse Gaussian time with drift `|μ|`.
pub fn sample_first_passage_drift<R: Rng + ?Sized>(
    mu: f64,
    t: f64,
    rng: &mut R,
) -> Result<FirstPassage> {
    positive("level", t)?;
    if mu == 0.0 {
        return sample_first_passage(t, rng).map(FirstPassage::Hit);
    }
    if mu < 0.0 && rng.random::<f64>() >= (2.0 * mu * t).exp() {
        return Ok(FirstPassage::AbsorbedNever);
    }
    let ig = InverseGaussian::new(t / mu.abs(), t * t).map_err(|e| Error::domain(e.to_string()))?;
    Ok(FirstPassage::Hit(ig.sample(rng)))
}

/// `f^μ(s, t) = t e^{−(t−μs)²/2s} / √(2πs³)`.
pub fn first_passage_drift_density(mu: f64, s: f64, t: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    let ln = t.ln() - (t - mu * s).powi(2) / (2.0 * s) - 0.5 * (2.0 * PI).ln() - 1.5 * s.ln();
    ln.exp()
}

/// Squared Bessel process of dimension `γ` started at 0: Gamma(γ/2, scale 2t).
pub fn sample_squared_bessel<R: Rng + ?Sized>(dim: f64, t: f64, rng: &mut R) -> Result<f64> {
    positive("dimension", dim)?;
    positive("time", t)?;
    let g = Gamma::new(0.5 * dim, 2.0 * t).map_err(|e| Error::domain(e.to_string()))?;
    Ok(g.sample(rng))
}

/// `s^{γ/2−1} e^{−s/2t} / ((2t)^{γ/2} Γ(γ/2))`.
pub fn squared_bessel_density(dim: f64, s: f64, t: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    let a = 0.5 * dim;
    ((a - 1.0) * s.ln() - s / (2.0 * t) - a * (2.0 * t).ln() - crate::specfun::ln_gamma(a)).exp()
}

/// Brownian sojourn time above zero on `[0, t]`: `t sin²(πU/2)`.
pub fn sample_arcsine<R: Rng + ?Sized>(t: f64, rng: &mut R) -> Result<f64> {
    positive("time", t)?;
    let u: f64 = rng.random();
    Ok(t * (FRAC_PI_2 * u).sin().powi(2))
}

/// `1 / (π √(x(t−x)))` on `(0, t)`.
pub fn arcsine_density(x: f64, t: f64) -> f64 {
    if x <= 0.0 || x >= t {
        return 0.0;
    }
    1.0 / (PI * (x * (t - x)).sqrt())
}

/// Probability that elastic Brownian motion has been absorbed by time `t`.
///
/// `q = 1 − 2e^{γ²t/2} Φ̄(γ√t) = 1 − erfcx(γ√(t/2))`.
pub fn elastic_q(gamma_el: f64, t: f64) -> Result<f64> {
    positive("absorbing rate", gamma_el)?;
    ensure(t >= 0.0, || format!("time must be non-negative, got {t}"))?;
    Ok(1.0 - erfcx(gamma_el * (0.5 * t).sqrt()))
}

/// Continuous part of the elastic law at `s > 0`.
///
/// The defining integral `2e^{γs} ∫_s^∞ v e^{−γv} e^{−v²/2t} / √(2πt³) dv`
/// integrates by parts to `e^{−s²/2t} (√(2/πt) − γ erfcx((s+γt)/√(2t)))`.
pub fn elastic_density(gamma_el: f64, s: f64, t: f64) -> Result<f64> {
    positive("absorbing rate", gamma_el)?;
    positive("time", t)?;
    if s < 0.0 {
        return Ok(0.0);
    }
    let w = (s + gamma_el * t) / (2.0 * t).sqrt();
    Ok((-s * s / (2.0 * t)).exp() * ((2.0 / (PI * t)).sqrt() - gamma_el * erfcx(w)))
}

/// Elastic Brownian motion at time `t`; `0.0` is the absorbed atom.
///
/// With `B = √t·N` and running maximum `M = (B + √(B² + 2tE))/2`, the pair
/// `(M − B, M)` has the law of reflected Brownian motion and its local time
/// at zero. Killing at rate `γ` per unit local time keeps the path with
/// probability `e^{−γM}`.
pub fn sample_elastic<R: Rng + ?Sized>(gamma_el: f64, t: f64, rng: &mut R) -> Result<f64> {
    positive("absorbing rate", gamma_el)?;
    positive("time", t)?;
    let n: f64 = StandardNormal.sample(rng);
    let e: f64 = Exp1.sample(rng);
    let b = t.sqrt() * n;
    let m = 0.5 * (b + (b * b + 2.0 * t * e).sqrt());
    if rng.random::<f64>() < (-gamma_el * m).exp() {
        Ok(m - b)
    } else {
        Ok(0.0)
    }
}

/// `E e^{−sB^{el}(t)}` including the absorbed atom, by quadrature.
pub fn elastic_laplace(gamma_el: f64, s: f64, t: f64) -> Result<f64> {
    use crate::quad::{semi_infinite, Tolerance};
    let cont = semi_infinite(
        |x| (-s * x).exp() * elastic_density(gamma_el, x, t).unwrap_or(0.0),
        0.0,
        Tolerance::new(1e-14, 1e-12),
    )?;
    Ok(cont + elastic_q(gamma_el, t)?)
}

/// Jump intensity and jump sampler of the (tempered) incomplete-gamma subordinator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompoundPoissonClock {
    alpha: f64,
    eps: f64,
    theta: f64,
    rate: f64,
}

impl CompoundPoissonClock {
    /// `φ(η) = αε^{−α}γ(α; εη)`: rate `αΓ(α)ε^{−α}`, jumps `ε/U`, `U ~ Beta(α, 1−α)`.
    pub fn incgamma(alpha: f64, eps: f64) -> Result<Self> {
        ClockSpec::IncGamma { alpha, eps }.validate()?;
        Ok(Self { alpha, eps, theta: 0.0, rate: alpha * gamma(alpha) * eps.powf(-alpha) })
    }

    /// `φ(η) = α(γ(α; η+θ) − γ(α; θ))`: the jump law above tilted by `e^{−θx}`,
    /// at rate `αΓ(α, θ)`.
    pub fn tempered(alpha: f64, theta: f64) -> Result<Self> {
        ClockSpec::TemperedIncGamma { alpha, theta }.validate()?;
        Ok(Self { alpha, eps: 1.0, theta, rate: alpha * upper_inc_gamma(alpha, theta)? })
    }

    /// Arrival rate of jumps, `φ(∞)`.
    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// One jump size.
    pub fn sample_jump<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        // x = 1/u maps the density (x−1)^{−α}x^{−1} on (1,∞) to Beta(α, 1−α)
        let beta = Beta::new(self.alpha, 1.0 - self.alpha).map_err(|e| Error::domain(e.to_string()))?;
        if self.theta == 0.0 {
            return Ok(self.eps / beta.sample(rng));
        }
        for _ in 0..REJECTION_CAP {
            let x = self.eps / beta.sample(rng);
            if rng.random::<f64>() < (-self.theta * (x - self.eps)).exp() {
                return Ok(x);
            }
        }
        Err(Error::RejectionCap(REJECTION_CAP))
    }

    /// `G(t)` at a single time.
    pub fn sample_value<R: Rng + ?Sized>(&self, t: f64, rng: &mut R) -> Result<f64> {
        ensure(t >= 0.0, || format!("time must be non-negative, got {t}"))?;
        let count = sample_poisson(self.rate * t, rng) as u64;
        let mut total = 0.0;
        for _ in 0..count {
            total += self.sample_jump(rng)?;
        }
        Ok(total)
    }

    /// Full path on `[0, horizon]`.
    pub fn sample_path<R: Rng + ?Sized>(&self, horizon: f64, rng: &mut R) -> Result<ClockPath> {
        positive("horizon", horizon)?;
        let count = sample_poisson(self.rate * horizon, rng) as usize;
        let mut epochs: Vec<f64> = (0..count).map(|_| horizon * rng.random::<f64>()).collect();
        epochs.sort_by(f64::total_cmp);
        let mut values = Vec::with_capacity(count);
        let mut acc = 0.0;
        for _ in 0..count {
            acc += self.sample_jump(rng)?;
            values.push(acc);
        }
        Ok(ClockPath { grid: epochs, values, horizon })
    }
}

/// A non-decreasing clock path: `values[i]` holds on `[grid[i], grid[i+1])`,
/// and the path is 0 before `grid[0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClockPath {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub horizon: f64,
}

impl ClockPath {
    pub fn value_at(&self, s: f64) -> f64 {
        let idx = self.grid.partition_point(|g| *g <= s);
        if idx == 0 {
            0.0
        } else {
            self.values[idx - 1]
        }
    }
}

/// Stable subordinator on a regular grid of step `h` over `[0, horizon]`.
pub fn sample_stable_path<R: Rng + ?Sized>(
    alpha: f64,
    h: f64,
    horizon: f64,
    rng: &mut R,
) -> Result<ClockPath> {
    positive("grid step", h)?;
    positive("horizon", horizon)?;
    let cells = (horizon / h).ceil() as usize;
    let mut grid = Vec::with_capacity(cells + 1);
    let mut values = Vec::with_capacity(cells + 1);
    grid.push(0.0);
    values.push(0.0);
    let mut acc = 0.0;
    for i in 1..=cells {
        acc += sample_stable(alpha, h, rng)?;
        grid.push((i as f64 * h).min(horizon));
        values.push(acc);
    }
    Ok(ClockPath { grid, values, horizon })
}

/// `G_ε(t)` for the incomplete-gamma subordinator.
pub fn sample_incgamma_value<R: Rng + ?Sized>(alpha: f64, eps: f64, t: f64, rng: &mut R) -> Result<f64> {
    CompoundPoissonClock::incgamma(alpha, eps)?.sample_value(t, rng)
}

/// `G_{α,θ}(t)` for the tempered incomplete-gamma subordinator.
pub fn sample_tempered_value<R: Rng + ?Sized>(alpha: f64, theta: f64, t: f64, rng: &mut R) -> Result<f64> {
    CompoundPoissonClock::tempered(alpha, theta)?.sample_value(t, rng)
}

/// `E G_{α,θ}(t) = αtθ^{α−1}e^{−θ}`.
pub fn tempered_clock_mean(alpha: f64, theta: f64, t: f64) -> f64 {
    alpha * t * theta.powf(alpha - 1.0) * (-theta).exp()
}

/// `γ(α; η)` shortcut used by several Laplace exponents.
pub fn incgamma_exponent(alpha: f64, eps: f64, eta: f64) -> Result<f64> {
    Ok(alpha * eps.powf(-alpha) * lower_inc_gamma(alpha, eps * eta)?)
}

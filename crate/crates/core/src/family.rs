//! Uniform access to every integer-valued family: pmf, pgf, sampler,
//! closed-form moments and normalization with adaptive truncation.

use num_complex::Complex64;
use rand::Rng;

use crate::brownian::{
    bessel_moments, bessel_pgf, bessel_pmf_vec, elastic_pgf, elastic_pmf_vec, fp_pgf, fp_pgf_complex,
    fp_pmf_vec, fpd_moments, fpd_pgf, fpd_pgf_complex, fpd_pmf_vec, sojourn_moments, sojourn_pgf,
    sojourn_pmf_vec, ElasticMethod,
};
use crate::clocks::ClockSpec;
use crate::contour::tail_mass;
use crate::drift::{gstfcp_drift_laplace, sample_gstfcp_drift, RandomDrift};
use crate::gcp::{gcp_moments, gcp_pgf, gcp_pmf_vec, sample_gcp_value, MeanVar};
use crate::specfun::{gamma, MAX_JET_ORDER};
use crate::subordinated::{
    gsfcp_pgf, gsfcp_pgf_complex, gsfcp_pmf_vec, incgamma_gcp_pgf, incgamma_gcp_pgf_complex,
    incgamma_gcp_pmf_vec, tempered_gcp_moments, tempered_gcp_pgf, tempered_gcp_pgf_complex,
    tempered_gcp_pmf_vec,
};
use crate::{Error, GcpParams, Result};

/// A GCP run on one of the supported clocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Gcp,
    /// Stable subordinator of index `beta`.
    Gsfcp { beta: f64 },
    /// First passage of Brownian motion.
    Fp,
    /// First passage of Brownian motion with drift `mu`.
    Fpd { mu: f64 },
    Bessel { dim: f64 },
    Elastic { gamma: f64 },
    Sojourn,
    IncGamma { alpha: f64, eps: f64 },
    Tempered { alpha: f64, theta: f64 },
    /// `M(D_γ(Y_β(t))) + b D_α(Y_β(t))`.
    GstfcpDrift(RandomDrift),
}

/// Outcome of [`Family::normalization`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalization {
    pub total: f64,
    /// Number of pmf terms summed explicitly.
    pub terms: u64,
    /// Mass beyond the last explicit term, from the pgf; zero when the
    /// explicit terms already vanish.
    pub tail: f64,
}

const LIGHT_CAP: u64 = 1 << 12;
const NEGLIGIBLE: f64 = 1e-15;
const HEAVY_TERMS: u64 = 64;

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Family::Gcp | Family::Fp | Family::Sojourn => write!(f, "{}", self.name()),
            Family::Gsfcp { beta } => write!(f, "gsfcp(beta={beta})"),
            Family::Fpd { mu } => write!(f, "fpd(mu={mu})"),
            Family::Bessel { dim } => write!(f, "bessel(dim={dim})"),
            Family::Elastic { gamma } => write!(f, "elastic(gamma={gamma})"),
            Family::IncGamma { alpha, eps } => write!(f, "incgamma(alpha={alpha},eps={eps})"),
            Family::Tempered { alpha, theta } => write!(f, "tempered(alpha={alpha},theta={theta})"),
            Family::GstfcpDrift(d) => write!(
                f,
                "gstfcp-drift(b={},alpha={},gamma={},beta={})",
                d.b, d.alpha, d.gamma, d.beta
            ),
        }
    }
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Gcp => "gcp",
            Family::Gsfcp { .. } => "gsfcp",
            Family::Fp => "fp",
            Family::Fpd { .. } => "fpd",
            Family::Bessel { .. } => "bessel",
            Family::Elastic { .. } => "elastic",
            Family::Sojourn => "sojourn",
            Family::IncGamma { .. } => "incgamma",
            Family::Tempered { .. } => "tempered",
            Family::GstfcpDrift(_) => "gstfcp-drift",
        }
    }

    /// The clock, for families of the form `M(C(t))` with `C` independent of `M`.
    pub fn clock(&self) -> Option<ClockSpec> {
        Some(match *self {
            Family::Gsfcp { beta } => ClockSpec::Stable { alpha: beta },
            Family::Fp => ClockSpec::FirstPassage,
            Family::Fpd { mu } => ClockSpec::FirstPassageDrift { mu },
            Family::Bessel { dim } => ClockSpec::SquaredBessel { dim },
            Family::Elastic { gamma } => ClockSpec::Elastic { gamma },
            Family::Sojourn => ClockSpec::ArcsineSojourn,
            Family::IncGamma { alpha, eps } => ClockSpec::IncGamma { alpha, eps },
            Family::Tempered { alpha, theta } => ClockSpec::TemperedIncGamma { alpha, theta },
            Family::Gcp | Family::GstfcpDrift(_) => return None,
        })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Family::Gcp => Ok(()),
            Family::GstfcpDrift(d) => d.validate(),
            _ => self.clock().map_or(Ok(()), |c| c.validate()),
        }
    }

    /// Whether the pmf decays polynomially, so explicit summation cannot
    /// reach the tolerance and the tail must come from the pgf.
    pub fn heavy_tailed(&self) -> bool {
        match *self {
            Family::Fp | Family::Gsfcp { .. } | Family::IncGamma { .. } => true,
            Family::Fpd { mu } => mu == 0.0,
            Family::GstfcpDrift(d) => d.b == 0.0 && d.beta == 1.0 && d.gamma < 1.0,
            _ => false,
        }
    }

    /// Largest `n` the pmf can be evaluated at.
    pub fn max_terms(&self) -> u64 {
        match self {
            Family::Gsfcp { .. } | Family::IncGamma { .. } | Family::Tempered { .. } => MAX_JET_ORDER as u64,
            Family::GstfcpDrift(d) if d.gamma < 1.0 => MAX_JET_ORDER as u64,
            _ => LIGHT_CAP,
        }
    }

    fn drift_as_gsfcp(d: &RandomDrift) -> Result<Family> {
        if d.b == 0.0 && d.beta == 1.0 {
            Ok(if d.gamma == 1.0 { Family::Gcp } else { Family::Gsfcp { beta: d.gamma } })
        } else {
            Err(Error::domain("random-drift pmf has a closed form only for b = 0, beta = 1"))
        }
    }

    /// `P{X(t) = n}` for `n = 0..=n_max`.
    pub fn pmf_vec(&self, p: &GcpParams, n_max: u64, t: f64) -> Result<Vec<f64>> {
        self.validate()?;
        match *self {
            Family::Gcp => gcp_pmf_vec(p, n_max, t),
            Family::Gsfcp { beta } => gsfcp_pmf_vec(p, beta, n_max, t),
            Family::Fp => fp_pmf_vec(p, n_max, t),
            Family::Fpd { mu } => fpd_pmf_vec(p, mu, n_max, t),
            Family::Bessel { dim } => bessel_pmf_vec(p, dim, n_max, t),
            Family::Elastic { gamma } => elastic_pmf_vec(p, gamma, n_max, t, ElasticMethod::Series),
            Family::Sojourn => sojourn_pmf_vec(p, n_max, t),
            Family::IncGamma { alpha, eps } => incgamma_gcp_pmf_vec(p, alpha, eps, n_max, t),
            Family::Tempered { alpha, theta } => tempered_gcp_pmf_vec(p, alpha, theta, n_max, t),
            Family::GstfcpDrift(d) => Self::drift_as_gsfcp(&d)?.pmf_vec(p, n_max, t),
        }
    }

    /// `E u^{X(t)}`, `u ∈ [0, 1]`.
    pub fn pgf(&self, p: &GcpParams, u: f64, t: f64) -> Result<f64> {
        self.validate()?;
        match *self {
            Family::Gcp => gcp_pgf(p, u, t),
            Family::Gsfcp { beta } => gsfcp_pgf(p, beta, u, t),
            Family::Fp => fp_pgf(p, u, t),
            Family::Fpd { mu } => fpd_pgf(p, mu, u, t),
            Family::Bessel { dim } => bessel_pgf(p, dim, u, t),
            Family::Elastic { gamma } => elastic_pgf(p, gamma, u, t),
            Family::Sojourn => sojourn_pgf(p, u, t),
            Family::IncGamma { alpha, eps } => incgamma_gcp_pgf(p, alpha, eps, u, t),
            Family::Tempered { alpha, theta } => tempered_gcp_pgf(p, alpha, theta, u, t),
            Family::GstfcpDrift(d) => {
                if d.b != 0.0 {
                    return Err(Error::domain("pgf needs integer values, i.e. b = 0"));
                }
                if u == 0.0 {
                    return Ok(self.pmf_vec(p, 0, t).map(|v| v[0]).unwrap_or(0.0));
                }
                gstfcp_drift_laplace(p, d, -u.ln(), t)
            }
        }
    }

    /// The pgf off the real axis, where a closed form is available.
    pub fn pgf_complex(&self, p: &GcpParams, u: Complex64, t: f64) -> Result<Complex64> {
        self.validate()?;
        match *self {
            Family::Gcp => Ok((-t * p.psi_complex(u)).exp()),
            Family::Gsfcp { beta } => Ok(gsfcp_pgf_complex(p, beta, u, t)),
            Family::Fp => Ok(fp_pgf_complex(p, u, t)),
            Family::Fpd { mu } => Ok(fpd_pgf_complex(p, mu, u, t)),
            Family::Bessel { dim } => Ok((1.0 + 2.0 * t * p.psi_complex(u)).powf(-0.5 * dim)),
            Family::IncGamma { alpha, eps } => incgamma_gcp_pgf_complex(p, alpha, eps, u, t),
            Family::Tempered { alpha, theta } => tempered_gcp_pgf_complex(p, alpha, theta, u, t),
            Family::GstfcpDrift(d) => Self::drift_as_gsfcp(&d)?.pgf_complex(p, u, t),
            Family::Elastic { .. } | Family::Sojourn => {
                Err(Error::domain(format!("no complex pgf for the {} family", self.name())))
            }
        }
    }

    /// One draw of `X(t)`; `+∞` when a first passage never happens.
    pub fn sample<R: Rng + ?Sized>(&self, p: &GcpParams, t: f64, rng: &mut R) -> Result<f64> {
        self.validate()?;
        match *self {
            Family::Gcp => Ok(sample_gcp_value(p, t, rng)),
            Family::GstfcpDrift(d) => sample_gstfcp_drift(p, d, t, rng),
            _ => {
                let clock = self.clock().expect("clock families");
                match clock.sample(t, rng)? {
                    Some(c) => Ok(sample_gcp_value(p, c, rng)),
                    None => Ok(f64::INFINITY),
                }
            }
        }
    }

    /// Closed-form mean and variance at `t`.
    pub fn moments(&self, p: &GcpParams, t: f64) -> Result<MeanVar> {
        self.validate()?;
        match *self {
            Family::Gcp => {
                let m = gcp_moments(p, t, t)?;
                Ok(MeanVar { mean: m.mean, var: m.var })
            }
            Family::Fpd { mu } => fpd_moments(p, mu, t),
            Family::Bessel { dim } => bessel_moments(p, dim, t),
            Family::Sojourn => {
                let m = sojourn_moments(p, t)?;
                Ok(MeanVar { mean: m.mean, var: m.var })
            }
            Family::Tempered { alpha, theta } => {
                let m = tempered_gcp_moments(p, alpha, theta, t, t)?;
                Ok(MeanVar { mean: m.mean, var: m.var })
            }
            Family::Fp | Family::Gsfcp { .. } | Family::IncGamma { .. } => {
                Err(Error::InfiniteMoment(format!("the {} family has an infinite mean", self.name())))
            }
            Family::GstfcpDrift(d) => {
                if d.gamma < 1.0 || (d.b > 0.0 && d.alpha < 1.0) {
                    return Err(Error::InfiniteMoment("stable component has an infinite mean".into()));
                }
                // X = M(Y) + bY with Y = Y_β(t)
                let ey = t.powf(d.beta) / gamma(d.beta + 1.0);
                let g = gamma(d.beta + 1.0);
                let vy = t.powf(2.0 * d.beta) * (2.0 / gamma(2.0 * d.beta + 1.0) - 1.0 / (g * g));
                let c = p.c1() + d.b;
                Ok(MeanVar { mean: c * ey, var: p.c2() * ey + c * c * vy.max(0.0) })
            }
            Family::Elastic { .. } => Err(Error::domain("no closed-form moments for the elastic family")),
        }
    }

    /// `Σ_n P{X(t) = n}` with adaptive truncation.
    ///
    /// The explicit sum grows by doubling until its last terms are negligible.
    /// Heavy-tailed families, and light ones that hit [`Family::max_terms`],
    /// add the remaining mass from a contour integral of the pgf.
    pub fn normalization(&self, p: &GcpParams, t: f64) -> Result<Normalization> {
        let cap = self.max_terms();
        let mut n = if self.heavy_tailed() { HEAVY_TERMS.min(cap) } else { 32.min(cap) };
        loop {
            let v = self.pmf_vec(p, n, t)?;
            let sum: f64 = v.iter().sum();
            let last: f64 = v.iter().rev().take(8).sum();
            if !self.heavy_tailed() && last <= NEGLIGIBLE * sum.max(f64::MIN_POSITIVE) {
                return Ok(Normalization { total: sum, terms: n + 1, tail: 0.0 });
            }
            if self.heavy_tailed() || n >= cap {
                let tail = tail_mass(|u| self.pgf_complex(p, u, t), n as usize)?;
                return Ok(Normalization { total: sum + tail, terms: n + 1, tail });
            }
            n = (2 * n).min(cap);
        }
    }
}

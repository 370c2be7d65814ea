//! Oracle checks, grouped by module, with measured values and tolerances.
//!
//! Every Monte Carlo check draws from a seed derived from the run seed and
//! the check's label, so a check's result does not depend on which other
//! checks ran or in what order.

use std::fmt;
use std::str::FromStr;

use crate::brownian::{elastic_pmf_vec, fp_ode_residual, fp_pmf, fpd_ode_residual, fpd_pmf, ElasticMethod};
use crate::clocks::{ClockSpec, CompoundPoissonClock};
use crate::drift::{
    drifted_laplace, drifted_laplace_ode_residual, gstfcp_drift_laplace, hitting_boundary_laplace_gap,
    hitting_duality_gap, sample_gstfcp_drift, HittingGrid, RandomDrift,
};
use crate::family::Family;
use crate::fracint::{
    fracint_conditional_mean, fracint_gcp_moments, fracint_gfcp_variance, rl_integral_step,
    simulate_gfcp_paths, GfcpClock, FRACINT_QUAD_TOL,
};
use crate::gcp::{gcp_ode_residual, gcp_pmf, gcp_pmf_vec, gcp_truncation, sample_gcp_value, simulate_gcp};
use crate::mc::{histogram, try_replicate, tv_distance, McEstimate};
use crate::quad::{semi_infinite, Tolerance};
use crate::specfun::{bessel_k_halfint, erfc, erfcx, exp_phi_jet, kummer1f1, ml3, PhiKind};
use crate::subordinated::{
    incgamma_gcp_laplace, incgamma_tail_slope, log_grid, tempered_corr_ratio, tempered_gcp_laplace,
    tempered_gcp_moments, tempered_tail_slope,
};
use crate::{Error, GcpParams, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Specfun,
    Gcp,
    Clocks,
    Brownian,
    Subordinated,
    Drift,
    Fracint,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 8] =
        ["specfun", "gcp", "clocks", "brownian", "subordinated", "drift", "fracint", "all"];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Specfun => "specfun",
            Suite::Gcp => "gcp",
            Suite::Clocks => "clocks",
            Suite::Brownian => "brownian",
            Suite::Subordinated => "subordinated",
            Suite::Drift => "drift",
            Suite::Fracint => "fracint",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "specfun" => Suite::Specfun,
            "gcp" => Suite::Gcp,
            "clocks" => Suite::Clocks,
            "brownian" => Suite::Brownian,
            "subordinated" => Suite::Subordinated,
            "drift" => Suite::Drift,
            "fracint" => Suite::Fracint,
            "all" => Suite::All,
            other => return Err(Error::domain(format!("unknown suite {other:?}"))),
        })
    }
}

/// One measured check. `passed` is `measured <= tolerance`.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub seed: Option<u64>,
    pub reps: Option<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Replaces every check's default replicate count.
    pub reps: Option<usize>,
}

/// FNV-1a of the label folded into the run seed, then a splitmix64 finalizer.
pub fn derive_seed(seed: u64, label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    let mut z = seed ^ h;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `(name, measured, tolerance, detail)`.
type Row = (String, f64, f64, String);

fn row(name: impl Into<String>, measured: f64, tolerance: f64, detail: String) -> Row {
    (name.into(), measured, tolerance, detail)
}

fn z_row(name: impl Into<String>, est: McEstimate, target: f64) -> Row {
    let detail = format!("mc={:.6e} se={:.3e} analytic={:.6e}", est.value, est.stderr, target);
    row(name, est.z_score(target).abs(), 4.0, detail)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Collects checks for one suite (or all of them).
pub struct Verifier {
    suite: Suite,
    opts: VerifyOptions,
    checks: Vec<Check>,
}

fn two_rates() -> GcpParams {
    GcpParams::new(vec![0.7, 0.3]).expect("valid rates")
}

fn unit_rate() -> GcpParams {
    GcpParams::new(vec![1.0]).expect("valid rates")
}

const TIMES: [f64; 3] = [0.5, 1.0, 2.0];
const ARGS: [f64; 3] = [0.5, 1.0, 2.0];

fn family_suite(f: &Family) -> Suite {
    match f {
        Family::Gcp => Suite::Gcp,
        Family::Gsfcp { .. } | Family::IncGamma { .. } | Family::Tempered { .. } => Suite::Subordinated,
        Family::GstfcpDrift(_) => Suite::Drift,
        _ => Suite::Brownian,
    }
}

/// Families with an analytic pmf.
pub fn pmf_families() -> Vec<Family> {
    vec![
        Family::Gcp,
        Family::Gsfcp { beta: 0.6 },
        Family::Fp,
        Family::Fpd { mu: 0.0 },
        Family::Fpd { mu: 0.8 },
        Family::Bessel { dim: 2.0 },
        Family::Elastic { gamma: 1.0 },
        Family::Sojourn,
        Family::IncGamma { alpha: 0.5, eps: 1.0 },
        Family::Tempered { alpha: 0.5, theta: 1.0 },
    ]
}

/// Families with both a sampler and an analytic pmf.
pub fn sampled_families() -> Vec<Family> {
    vec![
        Family::Gcp,
        Family::Gsfcp { beta: 0.6 },
        Family::Fp,
        Family::Fpd { mu: 0.8 },
        Family::Bessel { dim: 2.0 },
        Family::Elastic { gamma: 1.0 },
        Family::Sojourn,
        Family::IncGamma { alpha: 0.5, eps: 1.0 },
        Family::Tempered { alpha: 0.5, theta: 1.0 },
        Family::GstfcpDrift(RandomDrift { b: 0.0, alpha: 1.0, gamma: 0.5, beta: 1.0 }),
    ]
}

impl Verifier {
    pub fn new(suite: Suite, opts: VerifyOptions) -> Self {
        Self { suite, opts, checks: Vec::new() }
    }

    pub fn finish(self) -> Vec<Check> {
        self.checks
    }

    fn wants(&self, s: Suite) -> bool {
        self.suite == Suite::All || self.suite == s
    }

    fn push(&mut self, suite: Suite, label: &str, seed: Option<u64>, reps: Option<usize>, rows: Result<Vec<Row>>) {
        match rows {
            Ok(rows) => {
                for (name, measured, tolerance, detail) in rows {
                    self.checks.push(Check {
                        suite,
                        name,
                        measured,
                        tolerance,
                        passed: measured <= tolerance,
                        seed,
                        reps,
                        detail,
                    });
                }
            }
            Err(e) => self.checks.push(Check {
                suite,
                name: label.to_string(),
                measured: f64::NAN,
                tolerance: f64::NAN,
                passed: false,
                seed,
                reps,
                detail: format!("error: {e}"),
            }),
        }
    }

    fn analytic(&mut self, suite: Suite, label: &str, f: impl FnOnce() -> Result<Vec<Row>>) {
        if self.wants(suite) {
            let rows = f();
            self.push(suite, label, None, None, rows);
        }
    }

    fn mc(&mut self, suite: Suite, label: &str, default_reps: usize, f: impl FnOnce(u64, usize) -> Result<Vec<Row>>) {
        if self.wants(suite) {
            let seed = derive_seed(self.opts.seed, label);
            let reps = self.opts.reps.unwrap_or(default_reps);
            let rows = f(seed, reps);
            self.push(suite, label, Some(seed), Some(reps), rows);
        }
    }

    /// Every pmf family sums to one within `10⁻⁶`.
    pub fn normalization(&mut self) -> &mut Self {
        let p = two_rates();
        for f in pmf_families() {
            for t in TIMES {
                let label = format!("normalization {f} t={t}");
                self.analytic(family_suite(&f), &label.clone(), || {
                    let n = f.normalization(&p, t)?;
                    let detail = format!("total={:.15} terms={} tail={:.3e}", n.total, n.terms, n.tail);
                    Ok(vec![row(label, (n.total - 1.0).abs(), 1e-6, detail)])
                });
            }
        }
        self
    }

    /// Histogram of sampled values against the pmf, TV over `n ≤ 30`.
    pub fn sampled_pmf(&mut self) -> &mut Self {
        let p = two_rates();
        for f in sampled_families() {
            let label = format!("sampled pmf {f} t=1");
            self.mc(family_suite(&f), &label.clone(), 200_000, |seed, reps| {
                let draws = try_replicate(seed, reps, |r| f.sample(&p, 1.0, r))?;
                let pmf = f.pmf_vec(&p, 30, 1.0)?;
                let tv = tv_distance(&histogram(&draws, 30), &pmf);
                Ok(vec![row(label, tv, 0.01, format!("tv={tv:.5}"))])
            });
        }
        self
    }

    /// Central-difference residuals of the forward equations, `h = 10⁻³`,
    /// and their second-order decay under halving.
    pub fn ode_residuals(&mut self) -> &mut Self {
        type Residual = Box<dyn Fn(u64, f64) -> Result<(f64, f64)>>;
        let p = two_rates();
        let (t, h) = (1.0, 1e-3);
        let pg = p.clone();
        let pf = p.clone();
        let pd = p.clone();
        let cases: Vec<(Suite, &str, Residual)> = vec![
            (
                Suite::Gcp,
                "gcp forward equation",
                Box::new(move |n, h| Ok((gcp_ode_residual(&pg, n, t, h)?, gcp_pmf(&pg, n, t)?))),
            ),
            (
                Suite::Brownian,
                "first-passage second-order system",
                Box::new(move |n, h| Ok((fp_ode_residual(&pf, n, t, h)?, fp_pmf(&pf, n, t)?))),
            ),
            (
                Suite::Brownian,
                "drifted first-passage system mu=0.8",
                Box::new(move |n, h| Ok((fpd_ode_residual(&pd, 0.8, n, t, h)?, fpd_pmf(&pd, 0.8, n, t)?))),
            ),
        ];
        for (suite, name, f) in cases {
            self.analytic(suite, name, || {
                let mut worst: f64 = 0.0;
                for n in 0..=6 {
                    let (r, scale) = f(n, h)?;
                    worst = worst.max(r.abs() / scale);
                }
                let ratio = f(2, h)?.0.abs() / f(2, h / 2.0)?.0.abs();
                Ok(vec![
                    row(format!("{name} residual"), worst, 1e-4, format!("max relative residual {worst:.3e}")),
                    row(format!("{name} order"), (ratio - 4.0).abs(), 1.0, format!("halving ratio {ratio:.4}")),
                ])
            });
        }
        let pd = p.clone();
        self.analytic(Suite::Drift, "drifted transform equation b=0.5", || {
            let (b, s) = (0.5, 1.0);
            let r1 = drifted_laplace_ode_residual(&pd, b, s, t, h)?;
            let r2 = drifted_laplace_ode_residual(&pd, b, s, t, h / 2.0)?;
            let scale = drifted_laplace(&pd, b, s, t)?;
            let ratio = r1.abs() / r2.abs();
            Ok(vec![
                row("drifted transform equation residual", r1.abs() / scale, 1e-4, format!("relative {:.3e}", r1.abs() / scale)),
                row("drifted transform equation order", (ratio - 4.0).abs(), 1.0, format!("halving ratio {ratio:.4}")),
            ])
        });
        self
    }

    fn laplace_rows(
        label: &str,
        draws: &[f64],
        analytic: impl Fn(f64) -> Result<f64>,
    ) -> Result<Vec<Row>> {
        ARGS.iter()
            .map(|&s| {
                let xs: Vec<f64> = draws.iter().map(|x| (-s * x).exp()).collect();
                Ok(z_row(format!("{label} s={s}"), McEstimate::from_samples(&xs), analytic(s)?))
            })
            .collect()
    }

    /// Empirical Laplace transforms against closed forms at `s ∈ {0.5, 1, 2}`.
    pub fn transforms(&mut self) -> &mut Self {
        let t = 1.0;
        let clocks = [
            ClockSpec::Stable { alpha: 0.6 },
            ClockSpec::InverseStable { beta: 0.6 },
            ClockSpec::FirstPassage,
        ];
        for c in clocks {
            let label = format!("laplace {c:?}");
            self.mc(Suite::Clocks, &label.clone(), 100_000, |seed, reps| {
                let draws = try_replicate(seed, reps, |r| Ok(c.sample(t, r)?.unwrap_or(f64::INFINITY)))?;
                Self::laplace_rows(&label, &draws, |s| c.laplace(s, t))
            });
        }
        let p = two_rates();
        let (alpha, eps, theta) = (0.5, 1.0, 1.0);
        let label = format!("laplace incgamma(alpha={alpha},eps={eps})");
        self.mc(Suite::Subordinated, &label.clone(), 100_000, |seed, reps| {
            let f = Family::IncGamma { alpha, eps };
            let draws = try_replicate(seed, reps, |r| f.sample(&p, t, r))?;
            Self::laplace_rows(&label, &draws, |s| incgamma_gcp_laplace(&p, alpha, eps, s, t))
        });
        let label = format!("laplace tempered(alpha={alpha},theta={theta})");
        self.mc(Suite::Subordinated, &label.clone(), 100_000, |seed, reps| {
            let f = Family::Tempered { alpha, theta };
            let draws = try_replicate(seed, reps, |r| f.sample(&p, t, r))?;
            Self::laplace_rows(&label, &draws, |s| tempered_gcp_laplace(&p, alpha, theta, s, t))
        });
        let d = RandomDrift { b: 0.5, alpha: 0.7, gamma: 0.8, beta: 0.9 };
        let label = format!("laplace {}", Family::GstfcpDrift(d));
        self.mc(Suite::Drift, &label.clone(), 100_000, |seed, reps| {
            let draws = try_replicate(seed, reps, |r| sample_gstfcp_drift(&p, d, t, r))?;
            Self::laplace_rows(&label, &draws, |s| gstfcp_drift_laplace(&p, d, s, t))
        });
        self
    }

    /// Closed-form means, variances and the tempered covariance against MC.
    pub fn moments(&mut self) -> &mut Self {
        let p = two_rates();
        let t = 1.0;
        for f in [Family::Fpd { mu: 0.8 }, Family::Bessel { dim: 2.0 }, Family::Sojourn] {
            let label = format!("moments {f} t={t}");
            self.mc(Suite::Brownian, &label.clone(), 200_000, |seed, reps| {
                let draws = try_replicate(seed, reps, |r| f.sample(&p, t, r))?;
                let m = f.moments(&p, t)?;
                Ok(vec![
                    z_row(format!("{label} mean"), McEstimate::from_samples(&draws), m.mean),
                    z_row(format!("{label} var"), McEstimate::variance(&draws), m.var),
                ])
            });
        }
        let (alpha, theta, s) = (0.5, 1.0, 0.5);
        let label = format!("moments tempered(alpha={alpha},theta={theta}) s={s} t={t}");
        self.mc(Suite::Subordinated, &label.clone(), 200_000, |seed, reps| {
            let clock = CompoundPoissonClock::tempered(alpha, theta)?;
            let pairs = try_replicate(seed, reps, |r| {
                let g = clock.sample_path(t, r)?;
                let (gs, gt) = (g.value_at(s), g.value_at(t));
                let xs = sample_gcp_value(&p, gs, r);
                Ok((xs, xs + sample_gcp_value(&p, gt - gs, r)))
            })?;
            let (xs, xt): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
            let m = tempered_gcp_moments(&p, alpha, theta, s, t)?;
            Ok(vec![
                z_row(format!("{label} mean"), McEstimate::from_samples(&xt), m.mean),
                z_row(format!("{label} var"), McEstimate::variance(&xt), m.var),
                z_row(format!("{label} cov"), McEstimate::covariance(&xs, &xt), m.cov),
            ])
        });
        self
    }

    /// Log-survival regression slopes over `y ∈ [10², 10⁴]`.
    pub fn tails(&mut self) -> &mut Self {
        let p = unit_rate();
        let grid = log_grid(1e2, 1e4, 9);
        // α = 0.9 needs a longer horizon to put enough mass beyond 10⁴
        for (alpha, t) in [(0.5, 1.0), (0.9, 10.0)] {
            let label = format!("tail slope incgamma(alpha={alpha},eps=1) t={t}");
            self.mc(Suite::Subordinated, &label.clone(), 1_000_000, |seed, reps| {
                let fit = incgamma_tail_slope(&p, alpha, 1.0, &grid, t, seed, reps)?;
                Ok(vec![row(label, (fit.slope + alpha).abs(), 0.1, format!("slope={:.4}", fit.slope))])
            });
            let theta = 1e-6;
            let label = format!("tail slope tempered(alpha={alpha},theta={theta}) t={t}");
            self.mc(Suite::Subordinated, &label.clone(), 1_000_000, |seed, reps| {
                let fit = tempered_tail_slope(&p, alpha, theta, &grid, t, seed, reps)?;
                Ok(vec![row(label, (fit.slope + alpha).abs(), 0.1, format!("slope={:.4}", fit.slope))])
            });
        }
        self
    }

    /// `corr_ratio(1, 10⁶) ∈ [0.99, 1.01]`.
    pub fn long_range(&mut self) -> &mut Self {
        let p = two_rates();
        self.analytic(Suite::Subordinated, "corr ratio tempered s=1 t=1e6", || {
            let r = tempered_corr_ratio(&p, 0.5, 1.0, 1.0, 1e6)?;
            Ok(vec![row("corr ratio tempered s=1 t=1e6", (r - 1.0).abs(), 0.01, format!("ratio={r:.12}"))])
        });
        self
    }

    /// Fractional-integral moments, conditional mean and GFCP variance.
    pub fn fractional(&mut self) -> &mut Self {
        let p = two_rates();
        let grid: Vec<(f64, f64)> = TIMES.iter().flat_map(|&a| TIMES.iter().map(move |&t| (a, t))).collect();
        self.mc(Suite::Fracint, "rl integral of gcp paths", 200_000, |seed, reps| {
            let vals = try_replicate(seed, reps, |r| {
                let path = simulate_gcp(&p, 2.0, r)?;
                grid.iter().map(|&(a, t)| rl_integral_step(&path, a, t)).collect::<Result<Vec<f64>>>()
            })?;
            let mut rows = Vec::new();
            for (i, &(a, t)) in grid.iter().enumerate() {
                let xs: Vec<f64> = vals.iter().map(|v| v[i]).collect();
                let m = fracint_gcp_moments(&p, a, t)?;
                rows.push(z_row(format!("rl integral a={a} t={t} mean"), McEstimate::from_samples(&xs), m.mean));
                rows.push(z_row(format!("rl integral a={a} t={t} var"), McEstimate::variance(&xs), m.var));
            }
            Ok(rows)
        });

        let p2 = GcpParams::new(vec![1.0, 1.0]).expect("valid rates");
        let (a, n, t) = (0.5, 2u64, 1.0);
        let label = format!("conditional mean a={a} n={n} t={t}");
        self.mc(Suite::Fracint, &label.clone(), 10_000, |seed, needed| {
            const BATCH: usize = 20_000;
            let mut accepted = Vec::new();
            let mut batch = 0u64;
            while accepted.len() < needed {
                ensure_batches(batch)?;
                let s = derive_seed(seed, &batch.to_string());
                let got = try_replicate(s, BATCH, |r| {
                    let path = simulate_gcp(&p2, t, r)?;
                    if path.final_value() == n {
                        Ok(Some(rl_integral_step(&path, a, t)?))
                    } else {
                        Ok(None)
                    }
                })?;
                accepted.extend(got.into_iter().flatten());
                batch += 1;
            }
            let target = fracint_conditional_mean(&p2, a, n, t)?;
            let mut r = z_row(label, McEstimate::from_samples(&accepted), target);
            r.3 = format!("{} accepted={}", r.3, accepted.len());
            Ok(vec![r])
        });

        self.analytic(Suite::Fracint, "conditional mean total expectation", || {
            let (a, t) = (0.7, 1.5);
            let n_max = gcp_truncation(&p, t, 1e-14);
            let pmf = gcp_pmf_vec(&p, n_max, t)?;
            let mut total = 0.0;
            for (n, w) in pmf.iter().enumerate() {
                total += w * fracint_conditional_mean(&p, a, n as u64, t)?;
            }
            let m = fracint_gcp_moments(&p, a, t)?.mean;
            Ok(vec![row(
                "conditional mean total expectation",
                (total - m).abs(),
                1e-6,
                format!("sum={total:.12} mean={m:.12}"),
            )])
        });

        let p1 = unit_rate();
        let (a, beta_, t, h) = (0.5, 0.5, 1.0, 1e-3);
        let label = format!("gfcp rl variance a={a} beta={beta_} t={t}");
        self.mc(Suite::Fracint, &label.clone(), 10_000, |seed, reps| {
            let vals = try_replicate(seed, reps, |r| {
                let paths =
                    simulate_gfcp_paths(&p1, beta_, t, &[GfcpClock::Grid(h), GfcpClock::Grid(h / 2.0)], r)?;
                Ok((rl_integral_step(&paths[0], a, t)?, rl_integral_step(&paths[1], a, t)?))
            })?;
            let (xh, xh2): (Vec<f64>, Vec<f64>) = vals.into_iter().unzip();
            let target = fracint_gfcp_variance(&p1, a, beta_, t, FRACINT_QUAD_TOL)?;
            let vh = McEstimate::variance(&xh).value;
            let vh2 = McEstimate::variance(&xh2).value;
            Ok(vec![
                row(format!("{label} grid h={h}"), rel(vh, target), 0.1, format!("mc={vh:.6} analytic={target:.6}")),
                row(
                    format!("{label} grid h={}", h / 2.0),
                    rel(vh2, target),
                    0.1,
                    format!("mc={vh2:.6} analytic={target:.6}"),
                ),
                row(
                    format!("{label} refinement shift"),
                    rel(vh, vh2),
                    0.02,
                    format!("h={h}: {vh:.6} h/2: {vh2:.6}"),
                ),
            ])
        });
        self
    }

    /// Special-function identities, jets, elastic series and the hitting boundary series.
    pub fn oracles(&mut self) -> &mut Self {
        self.analytic(Suite::Specfun, "half-integer bessel k vs quadrature", || {
            let mut worst: f64 = 0.0;
            for m in [0u32, 1, 2, 4, 7] {
                let nu = (m as f64 - 0.5).abs();
                for z in [0.3, 1.0, 5.0] {
                    // K_ν(z) = ∫_0^∞ e^{−z cosh u} cosh(νu) du
                    let q = semi_infinite(
                        |u| (-z * u.cosh() + nu * u).exp() * 0.5 * (1.0 + (-2.0 * nu * u).exp()),
                        0.0,
                        Tolerance::new(0.0, 1e-13),
                    )?;
                    worst = worst.max(rel(bessel_k_halfint(m, z)?, q));
                }
            }
            Ok(vec![row("half-integer bessel k vs quadrature", worst, 1e-10, format!("max relative {worst:.3e}"))])
        });
        self.analytic(Suite::Specfun, "mittag-leffler erfc identity", || {
            let mut worst: f64 = 0.0;
            for x in [0.1, 0.5, 1.0, 2.0, 3.0] {
                worst = worst.max(rel(ml3(0.5, 1.0, 1.0, -x)?, erfcx(x)));
                if x <= 2.0 {
                    worst = worst.max(rel(ml3(0.5, 1.0, 1.0, x)?, (x * x).exp() * erfc(-x)));
                }
            }
            Ok(vec![row("mittag-leffler erfc identity", worst, 1e-10, format!("max relative {worst:.3e}"))])
        });
        self.analytic(Suite::Specfun, "kummer transformation", || {
            let mut worst: f64 = 0.0;
            for (a, b, x) in [(0.5, 1.0, 2.0), (0.5, 1.5, -3.0), (1.3, 2.7, 5.0), (0.5, 3.0, 10.0)] {
                worst = worst.max(rel(kummer1f1(a, b, x)?, x.exp() * kummer1f1(b - a, b, -x)?));
            }
            Ok(vec![row("kummer transformation", worst, 1e-10, format!("max relative {worst:.3e}"))])
        });
        for (kind, tag) in [
            (PhiKind::StablePower { beta: 0.6 }, "stable(beta=0.6)"),
            (PhiKind::IncGamma { alpha: 0.5, eps: 1.0 }, "incgamma(alpha=0.5,eps=1)"),
            (PhiKind::TemperedIncGamma { alpha: 0.5, theta: 1.0 }, "tempered(alpha=0.5,theta=1)"),
        ] {
            let label = format!("jet vs finite differences {tag}");
            self.analytic(Suite::Specfun, &label.clone(), || {
                let (t, lambda, order) = (1.0, 1.0, 6);
                let h = 1e-4;
                let jet = exp_phi_jet(kind, t, lambda, order)?;
                let up = exp_phi_jet(kind, t, lambda + h, order - 1)?;
                let down = exp_phi_jet(kind, t, lambda - h, order - 1)?;
                let mut worst: f64 = 0.0;
                for r in 1..=order {
                    let fd = -(up[r - 1] - down[r - 1]) / (2.0 * h);
                    worst = worst.max(rel(fd, jet[r]));
                }
                Ok(vec![row(label, worst, 1e-6, format!("max relative {worst:.3e}"))])
            });
        }
        let p = two_rates();
        self.analytic(Suite::Brownian, "elastic series vs quadrature", || {
            let mut worst: f64 = 0.0;
            for t in TIMES {
                let s = elastic_pmf_vec(&p, 1.0, 10, t, ElasticMethod::Series)?;
                let q = elastic_pmf_vec(&p, 1.0, 10, t, ElasticMethod::Quadrature)?;
                for (a, b) in s.iter().zip(&q) {
                    worst = worst.max((a - b).abs());
                }
            }
            Ok(vec![row("elastic series vs quadrature", worst, 1e-6, format!("max abs {worst:.3e}"))])
        });
        self.analytic(Suite::Drift, "hitting boundary series laplace gap", || {
            let mut rows = Vec::new();
            for (rates, eta) in [(vec![1.0], 1.0), (vec![1.0, 0.5], 0.5), (vec![1.0, 0.5], 1.0)] {
                let q = GcpParams::new(rates.clone())?;
                let gap = hitting_boundary_laplace_gap(&q, 0.5, eta, 200.0, 300)?;
                rows.push(row(
                    format!("hitting boundary series laplace gap rates={rates:?} eta={eta}"),
                    gap,
                    1e-3,
                    format!("gap={gap:.3e}"),
                ));
            }
            Ok(rows)
        });
        self
    }

    /// `P{H(t) > x}` from grid paths against `P{X(x) < t}` from the marginal.
    pub fn duality(&mut self) -> &mut Self {
        let p = unit_rate();
        let d = RandomDrift { b: 1.0, alpha: 0.7, gamma: 0.7, beta: 1.0 };
        let (x, t, delta) = (0.5, 2.0, 0.01);
        let label = format!("hitting duality x={x} t={t}");
        self.mc(Suite::Drift, &label.clone(), 100_000, |seed, reps| {
            let coarse = hitting_duality_gap(&p, d, x, t, HittingGrid { delta, cap: 1e4 }, seed, reps)?;
            let fine = hitting_duality_gap(&p, d, x, t, HittingGrid { delta: delta / 2.0, cap: 1e4 }, seed, reps)?;
            let detail = |g: &crate::drift::DualityGap| {
                format!("path={:.5} marginal={:.5}", g.path.value, g.marginal.value)
            };
            let shift = (coarse.path.value - fine.path.value).abs();
            Ok(vec![
                row(format!("{label} delta={delta}"), coarse.gap(), 0.02, detail(&coarse)),
                row(format!("{label} delta={}", delta / 2.0), fine.gap(), 0.02, detail(&fine)),
                row(format!("{label} refinement shift"), shift, 0.01, format!("shift={shift:.5}")),
            ])
        });
        self
    }

    /// Every check of the selected suite.
    pub fn run_all(&mut self) -> &mut Self {
        self.normalization()
            .sampled_pmf()
            .ode_residuals()
            .transforms()
            .moments()
            .tails()
            .long_range()
            .fractional()
            .oracles()
            .duality()
    }
}

fn ensure_batches(batch: u64) -> Result<()> {
    if batch >= 1000 {
        return Err(Error::RejectionCap(1000 * 20_000));
    }
    Ok(())
}

/// Runs one suite.
pub fn run(suite: Suite, opts: VerifyOptions) -> Vec<Check> {
    let mut v = Verifier::new(suite, opts);
    v.run_all();
    v.finish()
}

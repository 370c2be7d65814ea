//! One function per subcommand, each turning an [`Experiment`] into a table.

use gcplab::clocks::ClockSpec;
use gcplab::family::Family;
use gcplab::fracint::{
    fracint_gcp_moments, fracint_gfcp_mean, fracint_gfcp_variance, rl_integral_step, simulate_gfcp_paths,
    GfcpClock,
};
use gcplab::gcp::simulate_gcp;
use gcplab::mc::{histogram, try_replicate, McEstimate};
use gcplab::subordinated::{incgamma_tail_slope, log_grid, tempered_corr_ratio, tempered_tail_slope};
use gcplab::verify::{self, derive_seed, VerifyOptions};
use gcplab::{Error, StepPath};

use crate::config::{Experiment, Target};
use crate::error::CliError;
use crate::table::{Cell, Table};

/// A finished command: its table, plus the number of failed checks for `verify`.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub table: Table,
    pub failed: usize,
}

impl From<Table> for Outcome {
    fn from(table: Table) -> Self {
        Outcome { table, failed: 0 }
    }
}

/// Analytic values that genuinely do not exist become blank cells;
/// anything else is a numeric failure.
fn optional<T>(r: gcplab::Result<T>) -> Result<Option<T>, CliError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::InfiniteMoment(_)) | Err(Error::Domain(_)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn mc_reps(e: &Experiment) -> Result<Option<(u64, usize)>, CliError> {
    match e.reps {
        Some(r) => Ok(Some((e.require_seed()?, r))),
        None => Ok(None),
    }
}

fn integer_valued(f: &Family) -> bool {
    !matches!(f, Family::GstfcpDrift(d) if d.b != 0.0)
}

/// `n, analytic, mc, mc_stderr`.
pub fn pmf(e: &Experiment) -> Result<Outcome, CliError> {
    let f = e.family()?;
    let t = e.single_time()?;
    if !integer_valued(&f) {
        return Err(CliError::validation("a drift b > 0 makes the process non-integer; pmf needs b = 0"));
    }
    if e.n_max > f.max_terms() {
        return Err(CliError::validation(format!("{} supports n_max up to {}", e.tag, f.max_terms())));
    }
    let analytic = optional(f.pmf_vec(&e.gcp, e.n_max, t))?;
    let mc = match mc_reps(e)? {
        Some((seed, reps)) => {
            let draws = try_replicate(seed, reps, |r| f.sample(&e.gcp, t, r))?;
            Some((histogram(&draws, e.n_max as usize), reps))
        }
        None => None,
    };
    let mut table = Table::new(&["n", "analytic", "mc", "mc_stderr"]);
    for n in 0..=e.n_max as usize {
        let a = analytic.as_ref().map(|v| v[n]);
        let (m, se) = match &mc {
            Some((h, reps)) => {
                let p = h[n];
                (Some(p), Some((p * (1.0 - p) / *reps as f64).sqrt()))
            }
            None => (None, None),
        };
        table.push(vec![(n as u64).into(), a.into(), m.into(), se.into()]);
    }
    Ok(table.into())
}

/// `stat, t, analytic, mc, mc_stderr` with `stat ∈ {mean, var}`.
pub fn moments(e: &Experiment) -> Result<Outcome, CliError> {
    let f = e.family()?;
    let mc = mc_reps(e)?;
    let mut table = Table::new(&["stat", "t", "analytic", "mc", "mc_stderr"]);
    for &t in &e.times {
        let m = optional(f.moments(&e.gcp, t))?;
        let draws = match mc {
            Some((seed, reps)) => {
                Some(try_replicate(derive_seed(seed, &format!("moments t={t}")), reps, |r| f.sample(&e.gcp, t, r))?)
            }
            None => None,
        };
        let mean = draws.as_ref().map(|d| McEstimate::from_samples(d));
        let var = draws.as_ref().map(|d| McEstimate::variance(d));
        table.push(vec![
            "mean".into(),
            t.into(),
            m.map(|m| m.mean).into(),
            mean.map(|x| x.value).into(),
            mean.map(|x| x.stderr).into(),
        ]);
        table.push(vec![
            "var".into(),
            t.into(),
            m.map(|m| m.var).into(),
            var.map(|x| x.value).into(),
            var.map(|x| x.stderr).into(),
        ]);
    }
    Ok(table.into())
}

enum Transform {
    Pgf(Family),
    Laplace(Family),
    Clock(ClockSpec),
}

/// `arg, analytic, mc, mc_stderr`: the pgf `E u^X` for counting families,
/// the Laplace transform `E e^{−sX}` for clocks and drifted processes.
pub fn transform(e: &Experiment) -> Result<Outcome, CliError> {
    let t = e.single_time()?;
    let kind = match e.target {
        Target::Family(f) if integer_valued(&f) => Transform::Pgf(f),
        Target::Family(f) => Transform::Laplace(f),
        Target::Clock(c) => Transform::Clock(c),
    };
    if let Transform::Pgf(_) = kind {
        if let Some(u) = e.args.iter().find(|u| **u > 1.0) {
            return Err(CliError::validation(format!("pgf arguments must lie in [0, 1], got {u}")));
        }
    }
    let draws = match mc_reps(e)? {
        Some((seed, reps)) => Some(try_replicate(seed, reps, |r| match kind {
            Transform::Pgf(f) | Transform::Laplace(f) => f.sample(&e.gcp, t, r),
            Transform::Clock(c) => Ok(c.sample(t, r)?.unwrap_or(f64::INFINITY)),
        })?),
        None => None,
    };
    let mut table = Table::new(&["arg", "analytic", "mc", "mc_stderr"]);
    for &a in &e.args {
        let analytic = match kind {
            Transform::Pgf(f) => optional(f.pgf(&e.gcp, a, t))?,
            Transform::Laplace(Family::GstfcpDrift(d)) => {
                Some(gcplab::drift::gstfcp_drift_laplace(&e.gcp, d, a, t)?)
            }
            Transform::Laplace(_) => None,
            Transform::Clock(c) => Some(c.laplace(a, t)?),
        };
        let est = draws.as_ref().map(|d| {
            let xs: Vec<f64> = match kind {
                Transform::Pgf(_) => d.iter().map(|x| a.powf(*x)).collect(),
                _ => d.iter().map(|x| (-a * x).exp()).collect(),
            };
            McEstimate::from_samples(&xs)
        });
        table.push(vec![a.into(), analytic.into(), est.map(|x| x.value).into(), est.map(|x| x.stderr).into()]);
    }
    Ok(table.into())
}

enum PathKind {
    Gcp,
    Gfcp(f64),
}

fn path_kind(e: &Experiment) -> Result<PathKind, CliError> {
    match e.target {
        Target::Family(Family::Gcp) => Ok(PathKind::Gcp),
        Target::Family(Family::GstfcpDrift(d)) if d.b == 0.0 && d.gamma == 1.0 => Ok(PathKind::Gfcp(d.beta)),
        _ => Err(CliError::validation(format!("path simulation supports gcp and gfcp, not {}", e.tag))),
    }
}

fn sample_path(
    e: &Experiment,
    kind: &PathKind,
    horizon: f64,
    clock: GfcpClock,
    r: &mut gcplab::mc::McRng,
) -> gcplab::Result<StepPath> {
    match *kind {
        PathKind::Gcp | PathKind::Gfcp(1.0) => simulate_gcp(&e.gcp, horizon, r),
        PathKind::Gfcp(beta) => Ok(simulate_gfcp_paths(&e.gcp, beta, horizon, &[clock], r)?.remove(0)),
    }
}

/// `path, epoch, size`: one row per jump, paths on `[0, max t]`.
pub fn simulate(e: &Experiment) -> Result<Outcome, CliError> {
    let kind = path_kind(e)?;
    let seed = e.require_seed()?;
    let reps = e.reps.unwrap_or(1);
    let horizon = e.times.iter().cloned().fold(0.0, f64::max);
    let paths = try_replicate(seed, reps, |r| sample_path(e, &kind, horizon, GfcpClock::Exact, r))?;
    let mut table = Table::new(&["path", "epoch", "size"]);
    for (i, p) in paths.iter().enumerate() {
        for (ep, s) in p.epochs().iter().zip(p.sizes()) {
            table.push(vec![i.into(), (*ep).into(), (*s).into()]);
        }
    }
    Ok(table.into())
}

/// `t, corr_ratio` of the tempered family at lag `s`.
pub fn lrd(e: &Experiment) -> Result<Outcome, CliError> {
    let (alpha, theta) = match e.target {
        Target::Family(Family::Tempered { alpha, theta }) => (alpha, theta),
        _ => return Err(CliError::validation("lrd is defined for the tempered family")),
    };
    let mut table = Table::new(&["t", "corr_ratio"]);
    for &t in &e.times {
        if t < e.lrd_s {
            return Err(CliError::validation(format!("lrd needs t >= s = {}, got {t}", e.lrd_s)));
        }
        table.push(vec![t.into(), tempered_corr_ratio(&e.gcp, alpha, theta, e.lrd_s, t)?.into()]);
    }
    Ok(table.into())
}

/// `y, survival, survival_stderr, log_survival, slope, intercept`.
pub fn tails(e: &Experiment) -> Result<Outcome, CliError> {
    let t = e.single_time()?;
    let seed = e.require_seed()?;
    let reps = e.reps.unwrap_or(1_000_000);
    let (lo, hi, n) = e.tail_grid;
    let grid = log_grid(lo, hi, n);
    let fit = match e.target {
        Target::Family(Family::IncGamma { alpha, eps }) => incgamma_tail_slope(&e.gcp, alpha, eps, &grid, t, seed, reps)?,
        Target::Family(Family::Tempered { alpha, theta }) => {
            tempered_tail_slope(&e.gcp, alpha, theta, &grid, t, seed, reps)?
        }
        _ => return Err(CliError::validation("tails is defined for the incgamma and tempered families")),
    };
    let mut table = Table::new(&["y", "survival", "survival_stderr", "log_survival", "slope", "intercept"]);
    for (y, s) in fit.y.iter().zip(&fit.survival) {
        table.push(vec![
            (*y).into(),
            s.value.into(),
            s.stderr.into(),
            s.value.ln().into(),
            fit.slope.into(),
            fit.intercept.into(),
        ]);
    }
    Ok(table.into())
}

/// `a, t, analytic_mean, mc_mean, mc_mean_stderr, analytic_var, mc_var, mc_var_stderr`.
pub fn fracint(e: &Experiment) -> Result<Outcome, CliError> {
    let kind = path_kind(e)?;
    let cells: Vec<(f64, f64)> = e.fracint_a.iter().flat_map(|&a| e.times.iter().map(move |&t| (a, t))).collect();
    let horizon = e.times.iter().cloned().fold(0.0, f64::max);
    let mc = match mc_reps(e)? {
        Some((seed, reps)) => Some(try_replicate(seed, reps, |r| {
            let path = sample_path(e, &kind, horizon, GfcpClock::Grid(e.grid_step), r)?;
            cells.iter().map(|&(a, t)| rl_integral_step(&path, a, t)).collect::<gcplab::Result<Vec<f64>>>()
        })?),
        None => None,
    };
    let mut table = Table::new(&[
        "a",
        "t",
        "analytic_mean",
        "mc_mean",
        "mc_mean_stderr",
        "analytic_var",
        "mc_var",
        "mc_var_stderr",
    ]);
    for (i, &(a, t)) in cells.iter().enumerate() {
        let (mean, var) = match kind {
            PathKind::Gfcp(beta) if beta < 1.0 => (
                fracint_gfcp_mean(&e.gcp, a, beta, t)?,
                fracint_gfcp_variance(&e.gcp, a, beta, t, e.quad_tol)?,
            ),
            _ => {
                let m = fracint_gcp_moments(&e.gcp, a, t)?;
                (m.mean, m.var)
            }
        };
        let (em, ev) = match &mc {
            Some(rows) => {
                let xs: Vec<f64> = rows.iter().map(|r| r[i]).collect();
                (Some(McEstimate::from_samples(&xs)), Some(McEstimate::variance(&xs)))
            }
            None => (None, None),
        };
        table.push(vec![
            a.into(),
            t.into(),
            mean.into(),
            em.map(|x| x.value).into(),
            em.map(|x| x.stderr).into(),
            var.into(),
            ev.map(|x| x.value).into(),
            ev.map(|x| x.stderr).into(),
        ]);
    }
    Ok(table.into())
}

/// `suite, name, passed, measured, tolerance, seed, reps, detail`.
pub fn verify(e: &Experiment) -> Result<Outcome, CliError> {
    let seed = e.require_seed()?;
    let checks = verify::run(e.suite, VerifyOptions { seed, reps: e.reps });
    let mut table = Table::new(&["suite", "name", "passed", "measured", "tolerance", "seed", "reps", "detail"]);
    let failed = checks.iter().filter(|c| !c.passed).count();
    for c in checks {
        table.push(vec![
            c.suite.name().into(),
            c.name.into(),
            c.passed.into(),
            c.measured.into(),
            c.tolerance.into(),
            c.seed.into(),
            c.reps.into(),
            Cell::Text(c.detail),
        ]);
    }
    Ok(Outcome { table, failed })
}

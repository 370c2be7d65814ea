//! Experiment configuration: the JSON file, flag overrides and the
//! validated experiment every command runs on.

use std::collections::BTreeMap;

use clap::ValueEnum;
use gcplab::clocks::ClockSpec;
use gcplab::drift::RandomDrift;
use gcplab::family::Family;
use gcplab::verify::Suite;
use gcplab::GcpParams;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, CliError};

/// The only schema version this build reads.
pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable consulted when neither flag nor config sets a seed.
pub const SEED_ENV: &str = "GCPLAB_SEED";

const MAX_N: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Absolute tolerance of the fractional-integral double quadrature.
    pub quad: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FracintConfig {
    /// Integration orders.
    pub a: Option<Vec<f64>>,
    /// Grid step of the stable path behind GFCP paths.
    pub grid_step: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailsConfig {
    pub y_min: Option<f64>,
    pub y_max: Option<f64>,
    pub points: Option<usize>,
}

/// Contents of a `--config` file. Every key is optional except `schema`;
/// unknown keys are rejected.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema: u32,
    pub family: Option<String>,
    pub rates: Option<Vec<f64>>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    pub t: Option<Vec<f64>>,
    pub n_max: Option<u64>,
    pub reps: Option<usize>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub args: Option<Vec<f64>>,
    pub lrd_s: Option<f64>,
    pub suite: Option<String>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub fracint: FracintConfig,
    #[serde(default)]
    pub tails: TailsConfig,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| CliError::validation(format!("config: {e}")))?;
        if cfg.schema != SCHEMA_VERSION {
            return Err(CliError::validation(format!(
                "config schema {} is not supported (expected {SCHEMA_VERSION})",
                cfg.schema
            )));
        }
        Ok(cfg)
    }
}

/// Values given on the command line; each one beats the config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub family: Option<String>,
    pub rates: Option<Vec<f64>>,
    pub params: Vec<(String, f64)>,
    pub t: Option<Vec<f64>>,
    pub n_max: Option<u64>,
    pub reps: Option<usize>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub args: Option<Vec<f64>>,
    pub suite: Option<String>,
}

/// What a command evaluates: a counting family or a bare clock.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    Family(Family),
    Clock(ClockSpec),
}

struct Spec {
    required: &'static [&'static str],
    optional: &'static [(&'static str, f64)],
}

const NONE: Spec = Spec { required: &[], optional: &[] };

fn spec(tag: &str) -> Option<Spec> {
    Some(match tag {
        "gcp" | "fp" | "sojourn" | "first-passage" | "arcsine" => NONE,
        "gsfcp" | "gfcp" | "inverse-stable" => Spec { required: &["beta"], optional: &[] },
        "fpd" | "first-passage-drift" => Spec { required: &["mu"], optional: &[] },
        "bessel" | "squared-bessel" => Spec { required: &["dim"], optional: &[] },
        "elastic" | "elastic-clock" => Spec { required: &["gamma"], optional: &[] },
        "incgamma" | "incgamma-clock" => Spec { required: &["alpha"], optional: &[("eps", 1.0)] },
        "tempered" | "tempered-clock" => Spec { required: &["alpha", "theta"], optional: &[] },
        "stable" => Spec { required: &["alpha"], optional: &[] },
        "gstfcp-drift" => Spec {
            required: &[],
            optional: &[("b", 0.0), ("alpha", 1.0), ("gamma", 1.0), ("beta", 1.0)],
        },
        _ => return None,
    })
}

/// Every accepted family or clock tag.
pub const TAGS: [&str; 20] = [
    "gcp", "gsfcp", "gfcp", "fp", "fpd", "bessel", "elastic", "sojourn", "incgamma", "tempered",
    "gstfcp-drift", "stable", "inverse-stable", "first-passage", "first-passage-drift", "squared-bessel",
    "arcsine", "elastic-clock", "incgamma-clock", "tempered-clock",
];

/// Builds and validates the target named `tag`.
pub fn build_target(tag: &str, params: &BTreeMap<String, f64>) -> Result<Target, CliError> {
    let s = spec(tag).ok_or_else(|| {
        CliError::validation(format!("unknown family {tag:?}; expected one of {}", TAGS.join(", ")))
    })?;
    for k in params.keys() {
        if !s.required.contains(&k.as_str()) && !s.optional.iter().any(|(n, _)| n == k) {
            return Err(CliError::validation(format!("parameter {k:?} is not used by {tag}")));
        }
    }
    let get = |name: &str| -> Result<f64, CliError> {
        if let Some(v) = params.get(name) {
            return Ok(*v);
        }
        s.optional
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, d)| *d)
            .ok_or_else(|| CliError::validation(format!("{tag} needs parameter {name}")))
    };
    let target = match tag {
        "gcp" => Target::Family(Family::Gcp),
        "gsfcp" => Target::Family(Family::Gsfcp { beta: get("beta")? }),
        "gfcp" => Target::Family(Family::GstfcpDrift(RandomDrift {
            b: 0.0,
            alpha: 1.0,
            gamma: 1.0,
            beta: get("beta")?,
        })),
        "fp" => Target::Family(Family::Fp),
        "fpd" => Target::Family(Family::Fpd { mu: get("mu")? }),
        "bessel" => Target::Family(Family::Bessel { dim: get("dim")? }),
        "elastic" => Target::Family(Family::Elastic { gamma: get("gamma")? }),
        "sojourn" => Target::Family(Family::Sojourn),
        "incgamma" => Target::Family(Family::IncGamma { alpha: get("alpha")?, eps: get("eps")? }),
        "tempered" => Target::Family(Family::Tempered { alpha: get("alpha")?, theta: get("theta")? }),
        "gstfcp-drift" => Target::Family(Family::GstfcpDrift(RandomDrift {
            b: get("b")?,
            alpha: get("alpha")?,
            gamma: get("gamma")?,
            beta: get("beta")?,
        })),
        "stable" => Target::Clock(ClockSpec::Stable { alpha: get("alpha")? }),
        "inverse-stable" => Target::Clock(ClockSpec::InverseStable { beta: get("beta")? }),
        "first-passage" => Target::Clock(ClockSpec::FirstPassage),
        "first-passage-drift" => Target::Clock(ClockSpec::FirstPassageDrift { mu: get("mu")? }),
        "squared-bessel" => Target::Clock(ClockSpec::SquaredBessel { dim: get("dim")? }),
        "arcsine" => Target::Clock(ClockSpec::ArcsineSojourn),
        "elastic-clock" => Target::Clock(ClockSpec::Elastic { gamma: get("gamma")? }),
        "incgamma-clock" => Target::Clock(ClockSpec::IncGamma { alpha: get("alpha")?, eps: get("eps")? }),
        "tempered-clock" => {
            Target::Clock(ClockSpec::TemperedIncGamma { alpha: get("alpha")?, theta: get("theta")? })
        }
        _ => unreachable!("tag checked above"),
    };
    match &target {
        Target::Family(f) => f.validate().map_err(invalid)?,
        Target::Clock(c) => c.validate().map_err(invalid)?,
    }
    Ok(target)
}

/// A fully resolved, validated experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub tag: String,
    pub target: Target,
    pub gcp: GcpParams,
    pub times: Vec<f64>,
    pub n_max: u64,
    pub reps: Option<usize>,
    pub seed: Option<u64>,
    pub format: Format,
    pub args: Vec<f64>,
    pub lrd_s: f64,
    pub suite: Suite,
    pub quad_tol: f64,
    pub fracint_a: Vec<f64>,
    pub grid_step: f64,
    pub tail_grid: (f64, f64, usize),
}

fn positive_list(name: &str, v: &[f64]) -> Result<(), CliError> {
    if v.is_empty() {
        return Err(CliError::validation(format!("{name} must not be empty")));
    }
    if let Some(x) = v.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        return Err(CliError::validation(format!("{name} values must be positive, got {x}")));
    }
    Ok(())
}

fn positive(name: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(CliError::validation(format!("{name} must be positive, got {v}")))
    }
}

impl Experiment {
    /// Merges flags over the config file over defaults, then validates.
    /// `env_seed` is the raw value of [`SEED_ENV`], if set.
    pub fn resolve(
        cfg: Option<ExperimentConfig>,
        o: Overrides,
        env_seed: Option<&str>,
    ) -> Result<Self, CliError> {
        let cfg = cfg.unwrap_or(ExperimentConfig { schema: SCHEMA_VERSION, ..Default::default() });
        let tag = o.family.or(cfg.family).unwrap_or_else(|| "gcp".into());
        let mut params = cfg.params;
        params.extend(o.params);
        let target = build_target(&tag, &params)?;
        let rates = o.rates.or(cfg.rates).unwrap_or_else(|| vec![1.0]);
        let gcp = GcpParams::new(rates).map_err(invalid)?;
        let times = o.t.or(cfg.t).unwrap_or_else(|| vec![1.0]);
        positive_list("t", &times)?;
        let n_max = o.n_max.or(cfg.n_max).unwrap_or(10);
        if n_max > MAX_N {
            return Err(CliError::validation(format!("n_max must be at most {MAX_N}, got {n_max}")));
        }
        let env_seed = match env_seed {
            Some(s) => Some(
                s.trim()
                    .parse::<u64>()
                    .map_err(|_| CliError::validation(format!("{SEED_ENV} is not a u64: {s:?}")))?,
            ),
            None => None,
        };
        let args = o.args.or(cfg.args).unwrap_or_else(|| vec![0.5, 1.0, 2.0]);
        if let Some(x) = args.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
            return Err(CliError::validation(format!("transform arguments must be non-negative, got {x}")));
        }
        let suite_name = o.suite.or(cfg.suite).unwrap_or_else(|| "all".into());
        let suite = suite_name.parse::<Suite>().map_err(invalid)?;
        let quad_tol = cfg.tolerances.quad.unwrap_or(gcplab::fracint::FRACINT_QUAD_TOL);
        positive("tolerances.quad", quad_tol)?;
        let fracint_a = cfg.fracint.a.unwrap_or_else(|| vec![0.5, 1.0, 2.0]);
        positive_list("fracint.a", &fracint_a)?;
        let grid_step = cfg.fracint.grid_step.unwrap_or(1e-3);
        positive("fracint.grid_step", grid_step)?;
        if grid_step > 1.0 {
            return Err(CliError::validation(format!("fracint.grid_step must be at most 1, got {grid_step}")));
        }
        let tail_grid = (
            cfg.tails.y_min.unwrap_or(1e2),
            cfg.tails.y_max.unwrap_or(1e4),
            cfg.tails.points.unwrap_or(9),
        );
        positive("tails.y_min", tail_grid.0)?;
        if !(tail_grid.1.is_finite() && tail_grid.1 > tail_grid.0) || tail_grid.2 < 2 {
            return Err(CliError::validation("tails needs y_max > y_min and at least 2 points"));
        }
        let lrd_s = cfg.lrd_s.unwrap_or(1.0);
        positive("lrd_s", lrd_s)?;
        let reps = o.reps.or(cfg.reps);
        if reps == Some(0) {
            return Err(CliError::validation("reps must be positive"));
        }
        Ok(Experiment {
            tag,
            target,
            gcp,
            times,
            n_max,
            reps,
            seed: o.seed.or(cfg.seed).or(env_seed),
            format: o.format.or(cfg.format).unwrap_or_default(),
            args,
            lrd_s,
            suite,
            quad_tol,
            fracint_a,
            grid_step,
            tail_grid,
        })
    }

    /// The seed, which every Monte Carlo output needs.
    pub fn require_seed(&self) -> Result<u64, CliError> {
        self.seed.ok_or_else(|| {
            CliError::validation(format!(
                "Monte Carlo output needs a seed: pass --seed, set \"seed\" in the config, or set {SEED_ENV}"
            ))
        })
    }

    pub fn family(&self) -> Result<Family, CliError> {
        match self.target {
            Target::Family(f) => Ok(f),
            Target::Clock(_) => Err(CliError::validation(format!("{} is a clock, not a counting family", self.tag))),
        }
    }

    /// The single time of commands that do not sweep `t`.
    pub fn single_time(&self) -> Result<f64, CliError> {
        match self.times.as_slice() {
            [t] => Ok(*t),
            _ => Err(CliError::validation("this command takes a single time t")),
        }
    }
}

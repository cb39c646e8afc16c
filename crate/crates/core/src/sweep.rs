//! Sweep configuration, the sweep driver, CSV output and verification.
//!
//! Configuration is layered: built-in defaults (chosen by flavor), then an
//! optional parameters file, then an optional config file, then command-line
//! flags. Files use flat `key = value` lines with `#` comments.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::error::Error;
use crate::flavor_state::Pair;
use crate::oscillation::{
    default_params, pmns_matrix, probability_direct, BaselinePoint, Flavor, LoeUnit,
    OscillationParams,
};
use crate::tradeoff::{closed_form_report, evaluate_with, TradeoffReport, BOUND_TOL, CHSH_SUM_BOUND};

pub const MAX_POINTS: usize = 10_000_000;

/// First line of every CSV file; bump the version when the columns change.
pub const CSV_SCHEMA: &str = "# nuqrt tradeoff sweep, schema v1";

pub const CSV_COLUMNS: [&str; 20] = [
    "loe_km_per_GeV",
    "flavor",
    "p_e",
    "p_mu",
    "p_tau",
    "chsh_paper_ab",
    "chsh_paper_ac",
    "chsh_paper_bc",
    "chsh_paper_sum",
    "chsh_horo_sq_ab",
    "chsh_horo_sq_ac",
    "chsh_horo_sq_bc",
    "chsh_horo_sq_sum",
    "d_sq",
    "ci_sq_two_thirds",
    "identity_residual",
    "coh_ab",
    "coh_ac",
    "coh_abc",
    "q",
];

/// Keys accepted in a parameters file (and, with the sweep keys, in a config file).
pub const PARAM_KEYS: [&str; 9] = [
    "theta12", "theta23", "theta13", "delta_cp", "alpha1", "alpha2", "dm21_sq", "dm31_sq",
    "dm32_sq",
];

pub const SWEEP_KEYS: [&str; 7] = [
    "flavor", "loe_min", "loe_max", "points", "spacing", "units", "output",
];

/// Tolerance on `|ΣP − 1|`.
pub const UNITARITY_TOL: f64 = 1e-10;

/// Tolerance between the generic path and the probability-only formulas.
pub const ORACLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

impl FromStr for Spacing {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "linear" | "lin" => Ok(Spacing::Linear),
            "log" | "logarithmic" => Ok(Spacing::Log),
            other => Err(format!("unknown spacing {other:?} (expected linear or log)")),
        }
    }
}

impl fmt::Display for Spacing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Spacing::Linear => "linear",
            Spacing::Log => "log",
        })
    }
}

/// Where a configuration value came from, for error messages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Flag,
    File { path: PathBuf, line: usize },
}

impl Origin {
    fn describe(&self, key: &str) -> String {
        match self {
            Origin::Flag => format!("--{}", key.replace('_', "-")),
            Origin::File { path, line } => format!("{key} ({}:{line})", path.display()),
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("unknown key {key}")]
    UnknownKey { key: String },

    #[error("invalid value {value:?} for {key}: {reason}")]
    BadValue {
        key: String,
        value: String,
        reason: String,
    },

    #[error("{path}:{line}: expected `key = value`, got {text:?}")]
    Syntax {
        path: PathBuf,
        line: usize,
        text: String,
    },

    #[error("invalid {field}: {reason}")]
    Invalid { field: String, reason: String },

    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error("evaluation failed at L/E = {loe_km_per_gev} km/GeV: {source}")]
    Eval {
        loe_km_per_gev: f64,
        #[source]
        source: Error,
    },

    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub flavor: Flavor,
    pub loe_min: f64,
    pub loe_max: f64,
    pub units: LoeUnit,
    pub points: usize,
    pub spacing: Spacing,
    pub params: OscillationParams,
    pub output: Option<PathBuf>,
}

impl SweepConfig {
    /// Electron: 0–40 km/MeV, linear. Muon: 10–1000 km/GeV, log.
    pub fn defaults_for(flavor: Flavor) -> Self {
        match flavor {
            Flavor::E => Self {
                flavor,
                loe_min: 0.0,
                loe_max: 40.0,
                units: LoeUnit::KmPerMeV,
                points: 400,
                spacing: Spacing::Linear,
                params: default_params(),
                output: None,
            },
            Flavor::Mu | Flavor::Tau => Self {
                flavor,
                loe_min: 10.0,
                loe_max: 1000.0,
                units: LoeUnit::KmPerGeV,
                points: 500,
                spacing: Spacing::Log,
                params: default_params(),
                output: None,
            },
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |field: &str, reason: String| ConfigError::Invalid {
            field: field.to_string(),
            reason,
        };
        if self.flavor == Flavor::Tau {
            return Err(invalid("flavor", "sweeps start from e or mu".into()));
        }
        if !self.loe_min.is_finite() || self.loe_min < 0.0 {
            return Err(invalid("loe_min", format!("must be >= 0, got {}", self.loe_min)));
        }
        if !self.loe_max.is_finite() || self.loe_min >= self.loe_max {
            return Err(invalid(
                "loe_max",
                format!("must exceed loe_min ({} >= {})", self.loe_min, self.loe_max),
            ));
        }
        if self.spacing == Spacing::Log && self.loe_min <= 0.0 {
            return Err(invalid("loe_min", "log spacing requires loe_min > 0".into()));
        }
        if !(2..=MAX_POINTS).contains(&self.points) {
            return Err(invalid(
                "points",
                format!("must be in [2, {MAX_POINTS}], got {}", self.points),
            ));
        }
        self.params.validate().map_err(|e| match e {
            Error::InvalidParam { field, reason } => invalid(field, reason),
            other => invalid("params", other.to_string()),
        })
    }

    /// Sweep grid in the configured units.
    pub fn grid(&self) -> Vec<BaselinePoint> {
        let n = self.points;
        let last = (n - 1) as f64;
        (0..n)
            .map(|k| {
                let t = k as f64;
                let loe = match self.spacing {
                    Spacing::Linear => self.loe_min + t * (self.loe_max - self.loe_min) / last,
                    Spacing::Log => {
                        let (lo, hi) = (self.loe_min.ln(), self.loe_max.ln());
                        (lo + t * (hi - lo) / last).exp()
                    }
                };
                BaselinePoint::new(loe, self.units).expect("grid points are nonnegative")
            })
            .collect()
    }

    fn set(&mut self, key: &str, value: &str, origin: &Origin) -> Result<(), ConfigError> {
        let bad = |reason: String| ConfigError::BadValue {
            key: origin.describe(key),
            value: value.to_string(),
            reason,
        };
        let num = || match value.trim().parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x),
            Ok(_) => Err(bad("must be finite".into())),
            Err(e) => Err(bad(e.to_string())),
        };
        match key {
            "flavor" => self.flavor = value.parse().map_err(bad)?,
            "loe_min" => self.loe_min = num()?,
            "loe_max" => self.loe_max = num()?,
            "points" => {
                self.points = value.trim().parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?
            }
            "spacing" => self.spacing = value.parse().map_err(bad)?,
            "units" => self.units = value.parse().map_err(bad)?,
            "output" => self.output = Some(PathBuf::from(value.trim())),
            "theta12" => self.params.theta12 = num()?,
            "theta23" => self.params.theta23 = num()?,
            "theta13" => self.params.theta13 = num()?,
            "delta_cp" => self.params.delta_cp = num()?,
            "alpha1" => self.params.alpha1 = num()?,
            "alpha2" => self.params.alpha2 = num()?,
            "dm21_sq" => self.params.dm21_sq = num()?,
            "dm31_sq" => self.params.dm31_sq = num()?,
            "dm32_sq" => self.params.dm32_sq = num()?,
            _ => {
                return Err(ConfigError::UnknownKey {
                    key: origin.describe(key),
                })
            }
        }
        Ok(())
    }
}

/// A single `key = value` assignment and where it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Setting {
    pub key: String,
    pub value: String,
    pub origin: Origin,
}

/// Parses flat `key = value` text. Blank lines and `#` comments are skipped.
pub fn parse_settings(text: &str, path: &Path) -> Result<Vec<Setting>, ConfigError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::Syntax {
                path: path.to_path_buf(),
                line: i + 1,
                text: raw.to_string(),
            });
        };
        out.push(Setting {
            key: key.trim().to_string(),
            value: value.trim().to_string(),
            origin: Origin::File {
                path: path.to_path_buf(),
                line: i + 1,
            },
        });
    }
    Ok(out)
}

fn read_settings(path: &Path) -> Result<Vec<Setting>, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_settings(&text, path)
}

/// Everything [`parse_config`] layers together.
#[derive(Debug, Clone, Default)]
pub struct ConfigInputs {
    /// Command-line overrides as `(snake_case_key, raw value)`.
    pub flags: Vec<(String, String)>,
    pub config_file: Option<PathBuf>,
    /// Parameters-only file, typically from `NU_QRT_PARAMS`.
    pub params_file: Option<PathBuf>,
}

/// Builds and validates a [`SweepConfig`]: flags override the config file,
/// which overrides the parameters file, which overrides the defaults.
pub fn parse_config(inputs: &ConfigInputs) -> Result<SweepConfig, ConfigError> {
    let params_layer = match &inputs.params_file {
        Some(path) => read_settings(path)?,
        None => Vec::new(),
    };
    for s in &params_layer {
        if !PARAM_KEYS.contains(&s.key.as_str()) {
            return Err(ConfigError::UnknownKey {
                key: s.origin.describe(&s.key),
            });
        }
    }
    let file_layer = match &inputs.config_file {
        Some(path) => read_settings(path)?,
        None => Vec::new(),
    };
    let flag_layer: Vec<Setting> = inputs
        .flags
        .iter()
        .map(|(k, v)| Setting {
            key: k.clone(),
            value: v.clone(),
            origin: Origin::Flag,
        })
        .collect();

    let layers = [params_layer, file_layer, flag_layer];
    let mut flavor = Flavor::E;
    for s in layers.iter().flatten().filter(|s| s.key == "flavor") {
        flavor = s.value.parse().map_err(|reason| ConfigError::BadValue {
            key: s.origin.describe(&s.key),
            value: s.value.clone(),
            reason,
        })?;
    }

    let mut config = SweepConfig::defaults_for(flavor);
    for s in layers.iter().flatten() {
        config.set(&s.key, &s.value, &s.origin)?;
    }
    config.validate()?;
    Ok(config)
}

/// `key = value` lines for the effective oscillation parameters; readable
/// back as a parameters file.
pub fn format_params(params: &OscillationParams) -> String {
    let values = [
        params.theta12,
        params.theta23,
        params.theta13,
        params.delta_cp,
        params.alpha1,
        params.alpha2,
        params.dm21_sq,
        params.dm31_sq,
        params.dm32_sq,
    ];
    PARAM_KEYS
        .iter()
        .zip(values)
        .map(|(k, v)| format!("{k} = {v}\n"))
        .collect()
}

/// Evaluates every grid point. Points run in parallel; rows come back in grid
/// order. Writes the CSV when `config.output` is set.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<TradeoffReport>, SweepError> {
    config.validate()?;
    let u = pmns_matrix(&config.params);
    let rows = config
        .grid()
        .into_par_iter()
        .map(|point| {
            evaluate_with(&u, config.flavor, point, &config.params).map_err(|source| {
                SweepError::Eval {
                    loe_km_per_gev: point.in_km_per_gev(),
                    source,
                }
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    if let Some(path) = &config.output {
        write_csv_file(path, &rows)?;
    }
    Ok(rows)
}

pub fn write_csv_file(path: &Path, rows: &[TradeoffReport]) -> Result<(), SweepError> {
    let werr = |source| SweepError::Write {
        path: path.to_path_buf(),
        source,
    };
    let file = fs::File::create(path).map_err(werr)?;
    let mut w = io::BufWriter::new(file);
    write_csv(&mut w, rows).map_err(werr)?;
    w.flush().map_err(werr)
}

/// 12 significant digits, with negative zero folded into zero.
fn num(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

pub fn csv_row(r: &TradeoffReport) -> String {
    let mut fields = vec![num(r.point.in_km_per_gev()), r.flavor.to_string()];
    fields.extend(r.probabilities.iter().map(|&p| num(p)));
    fields.extend(r.chsh.paper.iter().map(|&v| num(v)));
    fields.push(num(r.chsh.paper_sum));
    fields.extend(r.chsh.horodecki_sq.iter().map(|&v| num(v)));
    fields.push(num(r.chsh.horodecki_sum));
    fields.push(num(r.d_squared));
    fields.push(num(r.two_thirds_ci_squared));
    fields.push(num(r.identity_residual));
    fields.push(num(r.coherence.ab));
    fields.push(num(r.coherence.ac));
    fields.push(num(r.coherence.abc));
    fields.push(num(r.coherence.q));
    fields.join(",")
}

pub fn write_csv<W: Write>(w: &mut W, rows: &[TradeoffReport]) -> io::Result<()> {
    writeln!(w, "{CSV_SCHEMA}")?;
    writeln!(w, "{}", CSV_COLUMNS.join(","))?;
    for r in rows {
        writeln!(w, "{}", csv_row(r))?;
    }
    Ok(())
}

/// The first check that failed during [`verify`].
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyFailure {
    pub loe_km_per_gev: f64,
    pub quantity: String,
    pub value: f64,
    /// Signed amount by which the check was missed.
    pub residual: f64,
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} failed at L/E = {} km/GeV: value {:e}, residual {:e}",
            self.quantity, self.loe_km_per_gev, self.value, self.residual
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOutcome {
    pub points: usize,
    pub checks: usize,
    pub failure: Option<VerifyFailure>,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Runs every per-point check on a report. Returns the number of checks
/// performed or the first failure.
pub fn check_report(
    r: &TradeoffReport,
    params: &OscillationParams,
) -> Result<usize, VerifyFailure> {
    let loe = r.point.in_km_per_gev();
    let mut checks = 0usize;
    let mut check = |quantity: String, value: f64, residual: f64, tol: f64| {
        checks += 1;
        if residual > tol || residual.is_nan() {
            Err(VerifyFailure {
                loe_km_per_gev: loe,
                quantity,
                value,
                residual,
            })
        } else {
            Ok(())
        }
    };

    let psum: f64 = r.probabilities.iter().sum();
    check("probability_sum".into(), psum, (psum - 1.0).abs(), UNITARITY_TOL)?;
    for to in Flavor::ALL {
        let direct = probability_direct(r.flavor, to, r.point, params).map_err(|e| VerifyFailure {
            loe_km_per_gev: loe,
            quantity: format!("p_direct_{to}: {e}"),
            value: f64::NAN,
            residual: f64::NAN,
        })?;
        let p = r.probabilities[to.index()];
        check(format!("p_direct_{to}"), direct, (direct - p).abs(), ORACLE_TOL)?;
    }

    check(
        "identity_residual".into(),
        r.identity_residual,
        r.identity_residual.abs(),
        BOUND_TOL,
    )?;
    check(
        "chsh_paper_sum".into(),
        r.chsh.paper_sum,
        r.chsh.paper_sum - CHSH_SUM_BOUND,
        BOUND_TOL,
    )?;
    check(
        "chsh_horo_sq_sum".into(),
        r.chsh.horodecki_sum,
        r.chsh.horodecki_sum - CHSH_SUM_BOUND,
        BOUND_TOL,
    )?;
    check("q".into(), r.coherence.q, r.coherence.q, BOUND_TOL)?;

    let closed = closed_form_report(r.probabilities);
    for (k, pair) in Pair::ALL.iter().enumerate() {
        let bridge = r.chsh.horodecki_sq[k] - 2.0 * r.chsh.paper[k];
        check(
            format!("chsh_bridge_{}", pair.as_str().to_lowercase()),
            r.chsh.horodecki_sq[k],
            bridge.abs(),
            ORACLE_TOL,
        )?;
        check(
            format!("chsh_horo_sq_{}_closed_form", pair.as_str().to_lowercase()),
            r.chsh.horodecki_sq[k],
            (r.chsh.horodecki_sq[k] - closed.horodecki_sq[k]).abs(),
            ORACLE_TOL,
        )?;
    }
    for (name, generic, oracle) in [
        ("d_sq", r.d_squared, closed.d_squared),
        ("ci_sq_two_thirds", r.two_thirds_ci_squared, closed.two_thirds_ci_squared),
        ("coh_ab", r.coherence.ab, closed.coherence_ab),
        ("coh_ac", r.coherence.ac, closed.coherence_ac),
        ("coh_abc", r.coherence.abc, closed.coherence_abc),
        ("q", r.coherence.q, closed.q),
    ] {
        check(format!("{name}_closed_form"), generic, (generic - oracle).abs(), ORACLE_TOL)?;
    }
    Ok(checks)
}

/// Sweeps `config` and checks every invariant and bound at every point.
pub fn verify(config: &SweepConfig) -> Result<VerifyOutcome, SweepError> {
    let rows = run_sweep(config)?;
    let mut checks = 0;
    for r in &rows {
        match check_report(r, &config.params) {
            Ok(n) => checks += n,
            Err(failure) => {
                return Ok(VerifyOutcome {
                    points: rows.len(),
                    checks,
                    failure: Some(failure),
                })
            }
        }
    }
    Ok(VerifyOutcome {
        points: rows.len(),
        checks,
        failure: None,
    })
}

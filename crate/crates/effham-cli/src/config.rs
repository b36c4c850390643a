//! Run configuration: a TOML document describing one batch run.
//!
//! Top-level keys are `command`, `q_max`, `variant` and the tables
//! `[params]`, `[space]`, `[sweep]`, `[tolerances]`, `[output]`; all keys
//! are lower_snake_case. Unknown keys are rejected so typos surface as
//! parse errors instead of silently falling back to defaults.

use std::fmt;
use std::str::FromStr;

use effham::variants::VariantId;
use effham::SpaceSpec;
use serde::Deserialize;

pub const DEFAULT_TOL_GAP: f64 = 1e-9;
pub const DEFAULT_TOL_OFFDIAG: f64 = 1e-10;

#[derive(Debug)]
pub enum ConfigError {
    /// Malformed document (with the TOML parser's line/field diagnostics).
    Parse(String),
    /// Well-formed document with a missing or out-of-range field.
    Validation(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Parse(msg) => write!(f, "parse error: {msg}"),
            ConfigError::Validation(msg) => write!(f, "invalid config: {msg}"),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Eliminate,
    Variants,
    Flow,
    Compare,
    Sweep,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Eliminate => "eliminate",
            Command::Variants => "variants",
            Command::Flow => "flow",
            Command::Compare => "compare",
            Command::Sweep => "sweep",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn name(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }

    pub fn extension(&self) -> &'static str {
        self.name()
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub delta_min: f64,
    pub delta_max: f64,
    pub points: u32,
    pub spacing: Spacing,
}

impl SweepSpec {
    /// The concrete detuning values of the sweep, ascending.
    pub fn deltas(&self) -> Vec<f64> {
        let n = self.points as usize;
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Linear => self.delta_min + t * (self.delta_max - self.delta_min),
                    Spacing::Log => {
                        (self.delta_min.ln() + t * (self.delta_max.ln() - self.delta_min.ln()))
                            .exp()
                    }
                }
            })
            .collect()
    }
}

/// Fully validated run configuration with defaults filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub omega0: f64,
    /// Absent only for `sweep`, where it is derived per point.
    pub omega1: Option<f64>,
    pub g: f64,
    pub two_s: u32,
    pub n_max: u32,
    pub q_max: u32,
    pub variant: VariantId,
    pub sweep: Option<SweepSpec>,
    pub tol_gap: f64,
    pub tol_offdiag: f64,
    pub output_path: String,
    pub format: Format,
}

impl RunConfig {
    pub fn space(&self) -> SpaceSpec {
        SpaceSpec::new(self.two_s, self.n_max).expect("validated at parse time")
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    command: String,
    params: RawParams,
    space: RawSpace,
    q_max: Option<u32>,
    variant: Option<String>,
    sweep: Option<RawSweep>,
    tolerances: Option<RawTolerances>,
    output: Option<RawOutput>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    omega0: f64,
    omega1: Option<f64>,
    g: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpace {
    two_s: u32,
    n_max: u32,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    delta_min: f64,
    delta_max: f64,
    points: u32,
    spacing: Option<String>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawTolerances {
    tol_gap: Option<f64>,
    tol_offdiag: Option<f64>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    path: Option<String>,
    format: Option<String>,
}

fn invalid(field: &str, why: &str) -> ConfigError {
    ConfigError::Validation(format!("field '{field}': {why}"))
}

fn check_finite(field: &str, value: f64) -> Result<(), ConfigError> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(invalid(field, "must be finite"))
    }
}

/// Parse and validate a configuration document.
///
/// Physics is not pre-judged here: `omega1 = omega0` is accepted and the
/// resulting resonance surfaces at execution time.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let raw: RawConfig =
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;

    let command = match raw.command.as_str() {
        "eliminate" => Command::Eliminate,
        "variants" => Command::Variants,
        "flow" => Command::Flow,
        "compare" => Command::Compare,
        "sweep" => Command::Sweep,
        other => return Err(invalid("command", &format!("unknown command '{other}'"))),
    };

    check_finite("omega0", raw.params.omega0)?;
    check_finite("g", raw.params.g)?;
    if raw.params.g < 0.0 {
        return Err(invalid("g", "must be non-negative"));
    }
    if let Some(omega1) = raw.params.omega1 {
        check_finite("omega1", omega1)?;
    }
    if command != Command::Sweep && raw.params.omega1.is_none() {
        return Err(invalid("omega1", "required for this command"));
    }

    SpaceSpec::new(raw.space.two_s, raw.space.n_max)
        .map_err(|e| invalid("space", &e.to_string()))?;

    let q_max = raw.q_max.unwrap_or(raw.space.n_max);
    if q_max > raw.space.n_max {
        return Err(invalid("q_max", "must not exceed n_max"));
    }

    let variant = match raw.variant {
        Some(name) => VariantId::from_str(&name).map_err(|e| invalid("variant", &e))?,
        None => VariantId::Froehlich17,
    };

    let sweep = match raw.sweep {
        Some(s) => {
            if command != Command::Sweep {
                return Err(invalid("sweep", "only valid for the sweep command"));
            }
            if s.points < 2 {
                return Err(invalid("points", "must be at least 2"));
            }
            check_finite("delta_min", s.delta_min)?;
            check_finite("delta_max", s.delta_max)?;
            if !(s.delta_min > 0.0) {
                return Err(invalid("delta_min", "must be positive"));
            }
            if !(s.delta_max > s.delta_min) {
                return Err(invalid("delta_max", "must exceed delta_min"));
            }
            let spacing = match s.spacing.as_deref() {
                None | Some("linear") => Spacing::Linear,
                Some("log") => Spacing::Log,
                Some(other) => {
                    return Err(invalid(
                        "spacing",
                        &format!("unknown spacing '{other}' (expected linear or log)"),
                    ))
                }
            };
            Some(SweepSpec {
                delta_min: s.delta_min,
                delta_max: s.delta_max,
                points: s.points,
                spacing,
            })
        }
        None => {
            if command == Command::Sweep {
                return Err(invalid("sweep", "required for the sweep command"));
            }
            None
        }
    };

    let tolerances = raw.tolerances.unwrap_or_default();
    let tol_gap = tolerances.tol_gap.unwrap_or(DEFAULT_TOL_GAP);
    let tol_offdiag = tolerances.tol_offdiag.unwrap_or(DEFAULT_TOL_OFFDIAG);
    if !(tol_gap > 0.0) {
        return Err(invalid("tol_gap", "must be positive"));
    }
    if !(tol_offdiag > 0.0) {
        return Err(invalid("tol_offdiag", "must be positive"));
    }

    let output = raw.output.unwrap_or_default();
    let format = match output.format.as_deref() {
        Some(name) => Format::from_str(name).map_err(|e| invalid("format", &e))?,
        None => Format::Csv,
    };
    let output_path = output
        .path
        .unwrap_or_else(|| format!("report.{}", format.extension()));

    Ok(RunConfig {
        command,
        omega0: raw.params.omega0,
        omega1: raw.params.omega1,
        g: raw.params.g,
        two_s: raw.space.two_s,
        n_max: raw.space.n_max,
        q_max,
        variant,
        sweep,
        tol_gap,
        tol_offdiag,
        output_path,
        format,
    })
}

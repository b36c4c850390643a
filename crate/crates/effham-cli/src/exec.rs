//! Command execution and deterministic report writing.
//!
//! Every command produces a flat list of records plus optional footer
//! facts (sweep slope, flow step counts). CSV output freezes the column
//! sets, uses LF line endings, and prints floats with 17 significant
//! digits, so identical configurations yield byte-identical files.

use std::fmt::Write as _;
use std::time::Instant;

use effham::elimination::{dicke_hamiltonian, effective_hamiltonian};
use effham::flow::integrate_flow_default;
use effham::spectra::{
    block_decompose, compare_spectra, detuning_sweep, symmetric_eigenvalues,
    DEFAULT_BLOCK_TOL,
};
use effham::variants::{effective_closed_form, VariantId};
use effham::DickeParams;
use serde_json::json;

use crate::config::{Command, Format, RunConfig};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Execution failure, split by exit-status class.
#[derive(Debug)]
pub enum ExecError {
    /// Physics failure surfaced by the engine (exit status 2).
    Physics(effham::Error),
    /// Filesystem failure while writing the report (exit status 1).
    Io(String),
}

impl From<effham::Error> for ExecError {
    fn from(e: effham::Error) -> Self {
        ExecError::Physics(e)
    }
}

/// The report of one run: records as ordered key/value rows plus footer
/// facts, ready to serialize as CSV or JSON.
#[derive(Debug)]
pub struct Report {
    pub command: Command,
    pub columns: Vec<&'static str>,
    pub records: Vec<Vec<Value>>,
    pub footer: Vec<(&'static str, Value)>,
}

/// One report cell.
#[derive(Debug, Clone)]
pub enum Value {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
    None,
}

impl Value {
    fn to_csv(&self) -> String {
        match self {
            Value::Int(v) => v.to_string(),
            Value::Float(v) => format!("{v:.16e}"),
            Value::Text(v) => v.clone(),
            Value::Bool(v) => v.to_string(),
            Value::None => "none".to_string(),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Value::Int(v) => json!(v),
            Value::Float(v) => json!(v),
            Value::Text(v) => json!(v),
            Value::Bool(v) => json!(v),
            Value::None => serde_json::Value::Null,
        }
    }
}

fn params_at(config: &RunConfig, omega1: f64) -> DickeParams {
    DickeParams::new(config.omega0, omega1, config.g)
}

/// Run the configured command and collect its records.
pub fn run(config: &RunConfig) -> Result<Report, ExecError> {
    match config.command {
        Command::Eliminate => run_eliminate(config),
        Command::Variants => run_variants(config),
        Command::Flow => run_flow(config),
        Command::Compare => run_compare(config),
        Command::Sweep => run_sweep(config),
    }
}

fn run_eliminate(config: &RunConfig) -> Result<Report, ExecError> {
    let space = config.space();
    let params = params_at(config, config.omega1.expect("validated"));
    let (effective, diag) = effective_hamiltonian(params, space, config.tol_gap)?;
    let full = dicke_hamiltonian(params, space);
    let spectrum = compare_spectra(&full, &effective, space, config.q_max)?;

    let records = vec![
        vec![Value::Text("residual_max".into()), Value::Float(diag.residual_max)],
        vec![
            Value::Text("zeroed_entries".into()),
            Value::Int(diag.zeroed_entries as i64),
        ],
        vec![Value::Text("min_gap_used".into()), Value::Float(diag.min_gap_used)],
        vec![
            Value::Text("max_abs_err".into()),
            Value::Float(spectrum.global_max_abs_err),
        ],
        vec![Value::Text("rmse".into()), Value::Float(spectrum.global_rmse)],
    ];
    Ok(Report {
        command: config.command,
        columns: vec!["key", "value"],
        records,
        footer: vec![],
    })
}

fn run_variants(config: &RunConfig) -> Result<Report, ExecError> {
    let space = config.space();
    let params = params_at(config, config.omega1.expect("validated"));
    let full = dicke_hamiltonian(params, space);

    let mut records = Vec::new();
    for variant in VariantId::ALL {
        let effective = effective_closed_form(params, space, variant)?;
        let spectrum = compare_spectra(&full, &effective, space, config.q_max)?;
        records.push(vec![
            Value::Text(variant.name().into()),
            Value::Float(spectrum.global_max_abs_err),
            Value::Float(spectrum.global_rmse),
        ]);
    }
    Ok(Report {
        command: config.command,
        columns: vec!["variant", "max_abs_err", "rmse"],
        records,
        footer: vec![],
    })
}

fn run_flow(config: &RunConfig) -> Result<Report, ExecError> {
    let space = config.space();
    let params = params_at(config, config.omega1.expect("validated"));
    let full = dicke_hamiltonian(params, space);
    let blocks = block_decompose(&full, space, DEFAULT_BLOCK_TOL)?;

    let mut records = Vec::new();
    let mut total_steps: u64 = 0;
    let mut all_converged = true;
    for q in 0..=config.q_max {
        let block = blocks.block(q).expect("q_max <= n_max <= max excitation");
        let result = integrate_flow_default(&block.submatrix)?;
        total_steps += result.steps as u64;
        all_converged &= result.converged;
        let mut flowed = result.diagonal();
        flowed.sort_by(f64::total_cmp);
        let exact = symmetric_eigenvalues(&block.submatrix);
        for (f, e) in flowed.iter().zip(&exact) {
            records.push(vec![
                Value::Int(q as i64),
                Value::Float(*f),
                Value::Float(*e),
                Value::Float((f - e).abs()),
            ]);
        }
    }
    Ok(Report {
        command: config.command,
        columns: vec!["q", "eig_flow", "eig_exact", "abs_err"],
        records,
        footer: vec![
            ("steps", Value::Int(total_steps as i64)),
            ("converged", Value::Bool(all_converged)),
        ],
    })
}

fn run_compare(config: &RunConfig) -> Result<Report, ExecError> {
    let space = config.space();
    let params = params_at(config, config.omega1.expect("validated"));
    let full = dicke_hamiltonian(params, space);
    let effective = effective_closed_form(params, space, config.variant)?;
    let spectrum = compare_spectra(&full, &effective, space, config.q_max)?;

    let mut records = Vec::new();
    for block in &spectrum.per_block {
        for (exact, eff) in block.eigs_a.iter().zip(&block.eigs_b) {
            records.push(vec![
                Value::Int(block.q as i64),
                Value::Float(*exact),
                Value::Float(*eff),
                Value::Float((exact - eff).abs()),
            ]);
        }
    }
    Ok(Report {
        command: config.command,
        columns: vec!["q", "eig_exact", "eig_effective", "abs_err"],
        records,
        footer: vec![],
    })
}

fn run_sweep(config: &RunConfig) -> Result<Report, ExecError> {
    let space = config.space();
    let sweep = config.sweep.as_ref().expect("validated");
    let base = DickeParams::new(config.omega0, config.omega0, config.g);
    let (records, slope) = detuning_sweep(base, &sweep.deltas(), space, config.q_max)?;

    let rows = records
        .iter()
        .map(|r| {
            vec![
                Value::Float(r.delta),
                Value::Float(config.g),
                Value::Float(config.omega0),
                Value::Int(config.two_s as i64),
                Value::Int(config.n_max as i64),
                Value::Int(config.q_max as i64),
                Value::Float(r.global_max_abs_err),
                Value::Float(r.global_rmse),
            ]
        })
        .collect();
    Ok(Report {
        command: config.command,
        columns: vec![
            "delta", "g", "omega0", "two_s", "n_max", "q_max", "max_abs_err", "rmse",
        ],
        records: rows,
        footer: vec![("slope", slope.map_or(Value::None, Value::Float))],
    })
}

/// Serialize a report as CSV: fixed header, one row per record, footer
/// facts as `# key=value` comment lines, LF terminators.
pub fn to_csv(report: &Report) -> String {
    let mut out = String::new();
    out.push_str(&report.columns.join(","));
    out.push('\n');
    for record in &report.records {
        let row: Vec<String> = record.iter().map(Value::to_csv).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    for (key, value) in &report.footer {
        let _ = writeln!(out, "# {key}={}", value.to_csv());
    }
    out
}

/// Serialize a report as JSON: `meta` (command, version, config echo),
/// `records` keyed by column name, footer facts as top-level keys.
pub fn to_json(report: &Report, config: &RunConfig) -> String {
    let records: Vec<serde_json::Value> = report
        .records
        .iter()
        .map(|record| {
            let mut obj = serde_json::Map::new();
            for (col, value) in report.columns.iter().zip(record) {
                obj.insert((*col).to_string(), value.to_json());
            }
            serde_json::Value::Object(obj)
        })
        .collect();

    let mut top = serde_json::Map::new();
    top.insert("meta".into(), meta_json(report, config));
    top.insert("records".into(), json!(records));
    for (key, value) in &report.footer {
        top.insert((*key).to_string(), value.to_json());
    }
    let mut text = serde_json::to_string_pretty(&serde_json::Value::Object(top))
        .expect("report values are always serializable");
    text.push('\n');
    text
}

fn meta_json(report: &Report, config: &RunConfig) -> serde_json::Value {
    let mut echo = serde_json::Map::new();
    echo.insert("command".into(), json!(config.command.name()));
    echo.insert("omega0".into(), json!(config.omega0));
    if let Some(omega1) = config.omega1 {
        echo.insert("omega1".into(), json!(omega1));
    }
    echo.insert("g".into(), json!(config.g));
    echo.insert("two_s".into(), json!(config.two_s));
    echo.insert("n_max".into(), json!(config.n_max));
    echo.insert("q_max".into(), json!(config.q_max));
    echo.insert("variant".into(), json!(config.variant.name()));
    if let Some(sweep) = &config.sweep {
        echo.insert(
            "sweep".into(),
            json!({
                "delta_min": sweep.delta_min,
                "delta_max": sweep.delta_max,
                "points": sweep.points,
                "spacing": match sweep.spacing {
                    crate::config::Spacing::Linear => "linear",
                    crate::config::Spacing::Log => "log",
                },
            }),
        );
    }
    echo.insert("tol_gap".into(), json!(config.tol_gap));
    echo.insert("tol_offdiag".into(), json!(config.tol_offdiag));
    json!({
        "command": report.command.name(),
        "version": VERSION,
        "config": serde_json::Value::Object(echo),
    })
}

/// Render the report in the requested format.
pub fn render(report: &Report, config: &RunConfig, format: Format) -> String {
    match format {
        Format::Csv => to_csv(report),
        Format::Json => to_json(report, config),
    }
}

/// Run the command and write the report file. Returns the elapsed time.
pub fn execute(config: &RunConfig) -> Result<f64, ExecError> {
    let start = Instant::now();
    let report = run(config)?;
    let text = render(&report, config, config.format);
    std::fs::write(&config.output_path, text).map_err(|e| {
        ExecError::Io(format!("cannot write '{}': {e}", config.output_path))
    })?;
    Ok(start.elapsed().as_secs_f64())
}

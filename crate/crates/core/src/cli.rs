//! Command-line front end.
//!
//! Exit codes: `0` success, `2` usage error, `3` file input/output error, `4` numeric
//! failure. Ports are 1-indexed in every flag and every printed table. Setting
//! `REPORT_JSON=1` switches stdout to one JSON record per command.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::contexts::{greechie_dot, validate_context_graph, ContextGraph, Preset};
use crate::decompose::{decompose, reconstruct, Factorization};
use crate::error::Error;
use crate::interferometer::{
    netlist_from_factorization, render_schematic, simulate, transfer_matrix, Netlist, SchematicFormat,
};
use crate::numerics::{
    equal_up_to_global_phase, format_significant, ComplexMatrix, ComplexVector, C64, NORM_TOLERANCE,
};
use crate::observables::{analyzer_unitary, parse_observables, particle_dim, predict_ports, RowOrdering};
use crate::states::{preparation_unitary, resolve_state, StateSpecError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

/// Simulated outputs must match their targets up to a global phase within this bound.
const CHECK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(
    name = "multiport",
    version,
    about = "Multiport beam-splitter networks for unitaries and singlet states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Command {
    /// Factorize a unitary matrix file into beam-splitter cells.
    Decompose(DecomposeArgs),
    /// Build the network that prepares a state from one input port.
    Prepare(PrepareArgs),
    /// Port probabilities of a state behind an analyzer for the given observables.
    Predict(PredictArgs),
    /// Propagate one particle entering a port of a netlist.
    Simulate(SimulateArgs),
    /// Validate a context graph and print its Greechie diagram as DOT.
    Contexts(ContextsArgs),
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct DecomposeArgs {
    /// Matrix file `{"rows", "cols", "entries": [[re, im], ...]}`.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Netlist output file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Factorization output file.
    #[arg(long)]
    pub factorization: Option<PathBuf>,
    /// SVG schematic output file.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct PrepareArgs {
    /// State name or `@file` holding a single-column matrix.
    #[arg(long)]
    pub state: String,
    /// Input port carrying the particle.
    #[arg(long, default_value_t = 1)]
    pub port: usize,
    /// Netlist output file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Preparation unitary output file.
    #[arg(long)]
    pub matrix_out: Option<PathBuf>,
    /// SVG schematic output file.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct PredictArgs {
    /// State name or `@file` holding a single-column matrix.
    #[arg(long)]
    pub state: String,
    /// Per-particle observables separated by `|`, fields by `;`:
    /// `id`, `plane=a,b`, `theta=<radians>`, `labels=v1,v2[,v3]`.
    #[arg(long)]
    pub obs: String,
    /// Analyzer row order: `reversed` or `forward`.
    #[arg(long, default_value = "reversed")]
    pub order: String,
    /// Also write the prediction as JSON to this file.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub netlist: PathBuf,
    /// Input port carrying the particle.
    #[arg(long, default_value_t = 1)]
    pub port: usize,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct ContextsArgs {
    /// Context graph file: a list of `{name, rays: [{label, vector}]}`.
    #[arg(long = "in", conflicts_with = "preset", required_unless_present = "preset")]
    pub input: Option<PathBuf>,
    /// Built-in graph: `two-tripods` or `three-chain`.
    #[arg(long)]
    pub preset: Option<String>,
    /// DOT output file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Rejected command line. `exit_code` is 0 for help and version requests.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError {
    pub message: String,
    pub exit_code: i32,
}

pub fn parse_args<I, S>(argv: I) -> Result<Command, UsageError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args = std::iter::once(std::ffi::OsString::from("multiport")).chain(argv.into_iter().map(Into::into));
    Cli::try_parse_from(args).map(|c| c.command).map_err(|e| UsageError {
        message: e.render().to_string(),
        exit_code: if e.use_stderr() { EXIT_USAGE } else { EXIT_OK },
    })
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Numeric(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => EXIT_USAGE,
            Self::Io(_) => EXIT_IO,
            Self::Numeric(_) => EXIT_NUMERIC,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Usage(m) => write!(f, "usage error: {m}"),
            Self::Io(m) => write!(f, "io error: {m}"),
            Self::Numeric(e) => write!(f, "numeric error: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownState(_) | Error::UnknownGate(_) | Error::BadAxes { .. } | Error::BadLabels(_) => {
                Self::Usage(e.to_string())
            }
            e => Self::Numeric(e),
        }
    }
}

impl From<StateSpecError> for CliError {
    fn from(e: StateSpecError) -> Self {
        match e {
            StateSpecError::Io(m) => Self::Io(m),
            StateSpecError::Invalid(Error::Parse(m)) => Self::Io(m),
            StateSpecError::Invalid(e) => e.into(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

/// Output settings shared by all verbs.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Report {
    pub json: bool,
}

impl Report {
    pub fn from_env() -> Self {
        Self {
            json: std::env::var("REPORT_JSON").is_ok_and(|v| v == "1"),
        }
    }
}

/// Runs a command, writing results to `out` and diagnostics to `err`; returns the exit code.
pub fn run(cmd: &Command, report: Report, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(cmd, report, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            e.exit_code()
        }
    }
}

pub fn execute(cmd: &Command, report: Report, out: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::Decompose(a) => run_decompose(a, report, out),
        Command::Prepare(a) => run_prepare(a, report, out),
        Command::Predict(a) => run_predict(a, report, out),
        Command::Simulate(a) => run_simulate(a, report, out),
        Command::Contexts(a) => run_contexts(a, report, out),
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    serde_json::from_str(&read_text(path)?).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    write_text(path, &text)
}

fn emit_json(out: &mut dyn Write, value: &serde_json::Value) -> Result<(), CliError> {
    writeln!(out, "{}", serde_json::to_string(value).expect("serializable"))?;
    Ok(())
}

fn complex_text(z: C64) -> String {
    let re = format_significant(z.re);
    let im = format_significant(z.im);
    match im.strip_prefix('-') {
        Some(abs) => format!("{re}-{abs}i"),
        None => format!("{re}+{im}i"),
    }
}

fn complex_json(z: C64) -> serde_json::Value {
    json!([z.re, z.im])
}

fn input_port(port: usize, dim: usize) -> Result<usize, CliError> {
    if port == 0 || port > dim {
        return Err(CliError::Usage(format!("port {port} outside 1..={dim}")));
    }
    Ok(port - 1)
}

/// Factorization, netlist, and the worst deviation of the netlist from `u`.
fn compile(u: &ComplexMatrix) -> Result<(Factorization, Netlist, f64, f64), CliError> {
    let f = decompose(u)?;
    let reconstruction = reconstruct(&f).max_abs_diff(u);
    let nl = netlist_from_factorization(&f)?;
    let network = transfer_matrix(&nl).max_abs_diff(u);
    Ok((f, nl, reconstruction, network))
}

fn run_decompose(a: &DecomposeArgs, report: Report, out: &mut dyn Write) -> Result<(), CliError> {
    let u: ComplexMatrix = read_json(&a.input)?;
    let (f, nl, reconstruction, network) = compile(&u)?;
    if let Some(p) = &a.factorization {
        write_json(p, &f)?;
    }
    if let Some(p) = &a.out {
        write_json(p, &nl)?;
    }
    if let Some(p) = &a.svg {
        write_text(p, &render_schematic(&nl, SchematicFormat::Svg))?;
    }
    if report.json {
        return emit_json(
            out,
            &json!({
                "command": "decompose",
                "dim": f.dim,
                "factors": f.factors.len(),
                "reconstruction_error": reconstruction,
                "netlist_error": network,
            }),
        );
    }
    writeln!(out, "dim {}", f.dim)?;
    writeln!(
        out,
        "factors {} (at most {})",
        f.factors.len(),
        Factorization::max_factor_count(f.dim)
    )?;
    writeln!(out, "reconstruction_error {}", format_significant(reconstruction))?;
    writeln!(out, "netlist_error {}", format_significant(network))?;
    out.write_all(render_schematic(&nl, SchematicFormat::Text).as_bytes())?;
    Ok(())
}

fn run_prepare(a: &PrepareArgs, report: Report, out: &mut dyn Write) -> Result<(), CliError> {
    let psi = resolve_state(&a.state)?;
    psi.ensure_normalized(NORM_TOLERANCE)?;
    let port = input_port(a.port, psi.dim())?;
    let u = preparation_unitary(&psi, port)?;
    let (f, nl, _, _) = compile(&u)?;
    let output = simulate(&nl, &ComplexVector::basis(psi.dim(), port)?)?;
    if !equal_up_to_global_phase(&output, &psi, CHECK_TOLERANCE)? {
        return Err(CliError::Numeric(Error::FitFailure(
            "network does not reproduce the state".into(),
        )));
    }
    if let Some(p) = &a.out {
        write_json(p, &nl)?;
    }
    if let Some(p) = &a.matrix_out {
        write_json(p, &u)?;
    }
    if let Some(p) = &a.svg {
        write_text(p, &render_schematic(&nl, SchematicFormat::Svg))?;
    }
    if report.json {
        return emit_json(
            out,
            &json!({
                "command": "prepare",
                "state": a.state,
                "port": a.port,
                "dim": psi.dim(),
                "factors": f.factors.len(),
                "output": output.entries().iter().copied().map(complex_json).collect::<Vec<_>>(),
            }),
        );
    }
    writeln!(out, "state {} (dim {}) from port {}", a.state, psi.dim(), a.port)?;
    writeln!(out, "factors {}", f.factors.len())?;
    writeln!(out, "port amplitude")?;
    for (k, z) in output.entries().iter().enumerate() {
        writeln!(out, "{} {}", k + 1, complex_text(*z))?;
    }
    out.write_all(render_schematic(&nl, SchematicFormat::Text).as_bytes())?;
    Ok(())
}

fn run_predict(a: &PredictArgs, report: Report, out: &mut dyn Write) -> Result<(), CliError> {
    let psi = resolve_state(&a.state)?;
    let ordering: RowOrdering = a.order.parse().map_err(|e: Error| CliError::Usage(e.to_string()))?;
    let particles = a.obs.split('|').count();
    let dim = particle_dim(psi.dim(), particles).map_err(|e| CliError::Usage(e.to_string()))?;
    let parts = parse_observables(&a.obs, dim).map_err(|e| CliError::Usage(e.to_string()))?;
    let analyzer = analyzer_unitary(&parts, ordering)?;
    let dist = predict_ports(&analyzer, &psi)?;
    let amplitudes = analyzer.matrix.apply(&psi)?;
    let record = json!({
        "command": "predict",
        "state": a.state,
        "observables": a.obs,
        "ordering": ordering.to_string(),
        "amplitudes": amplitudes.entries().iter().copied().map(complex_json).collect::<Vec<_>>(),
        "probabilities": dist.probabilities,
    });
    if let Some(p) = &a.json {
        write_json(p, &record)?;
    }
    if report.json {
        return emit_json(out, &record);
    }
    writeln!(out, "port amplitude probability")?;
    for (k, (z, p)) in amplitudes.entries().iter().zip(&dist.probabilities).enumerate() {
        writeln!(out, "{} {} {}", k + 1, complex_text(*z), format_significant(*p))?;
    }
    Ok(())
}

fn run_simulate(a: &SimulateArgs, report: Report, out: &mut dyn Write) -> Result<(), CliError> {
    let nl: Netlist = read_json(&a.netlist)?;
    let port = input_port(a.port, nl.dim())?;
    let output = simulate(&nl, &ComplexVector::basis(nl.dim(), port)?)?;
    let probabilities: Vec<f64> = output.entries().iter().map(|z| z.norm_sqr()).collect();
    if report.json {
        return emit_json(
            out,
            &json!({
                "command": "simulate",
                "port": a.port,
                "amplitudes": output.entries().iter().copied().map(complex_json).collect::<Vec<_>>(),
                "probabilities": probabilities,
            }),
        );
    }
    writeln!(out, "port amplitude probability")?;
    for (k, (z, p)) in output.entries().iter().zip(&probabilities).enumerate() {
        writeln!(out, "{} {} {}", k + 1, complex_text(*z), format_significant(*p))?;
    }
    Ok(())
}

fn run_contexts(a: &ContextsArgs, report: Report, out: &mut dyn Write) -> Result<(), CliError> {
    let graph = match (&a.input, &a.preset) {
        (Some(path), _) => {
            ContextGraph::from_json(&read_text(path)?).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?
        }
        (None, Some(name)) => name
            .parse::<Preset>()
            .map_err(|e| CliError::Usage(e.to_string()))?
            .graph(),
        (None, None) => return Err(CliError::Usage("one of --in or --preset is required".into())),
    };
    let validation = validate_context_graph(&graph);
    if !validation.is_ok() {
        if report.json {
            let violations: Vec<String> = validation.violations.iter().map(ToString::to_string).collect();
            emit_json(
                out,
                &json!({"command": "contexts", "valid": false, "violations": violations}),
            )?;
        }
        return Err(CliError::Numeric(Error::InvalidGraph(validation.to_string())));
    }
    let dot = greechie_dot(&graph)?;
    if let Some(p) = &a.out {
        write_text(p, &dot)?;
    }
    if report.json {
        let links: Vec<_> = graph
            .links()
            .iter()
            .map(|l| {
                json!({
                    "first": graph.contexts[l.first].name,
                    "second": graph.contexts[l.second].name,
                    "shared": l.shared.iter().map(|s| s.first_label.clone()).collect::<Vec<_>>(),
                })
            })
            .collect();
        return emit_json(
            out,
            &json!({"command": "contexts", "valid": true, "nodes": graph.labels(), "links": links}),
        );
    }
    if a.out.is_none() {
        out.write_all(dot.as_bytes())?;
    } else {
        writeln!(
            out,
            "nodes {} contexts {} links {}",
            graph.labels().len(),
            graph.contexts.len(),
            graph.links().len()
        )?;
    }
    Ok(())
}

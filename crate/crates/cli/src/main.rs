//! `su2-deficit`: closed-form and brute-force correlation measures for
//! SU(2)-invariant spin-j ⊗ spin-1/2 states.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use su2_deficit::measures::correlation_report;
use su2_deficit::oracle::{run_oracle, OracleConfig};
use su2_deficit::spin::SpinLabel;
use su2_deficit::state::build_state;
use su2_deficit::sweep::{run_sweep, Figure, Measure, SweepSpec};
use su2_deficit::verify::{run_verify, VerifyConfig};
use su2_deficit::Error;

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "su2-deficit", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Every measure at one (2j, F) point, as a JSON object.
    Compute(ComputeArgs),
    /// CSV over a grid of spins and weights.
    Sweep(SweepArgs),
    /// Cross-check closed forms against the brute-force oracle.
    Verify(VerifyArgs),
    /// CSV for one of the preset figure panels.
    Figure(FigureArgs),
}

#[derive(Args)]
struct OracleArgs {
    /// Also run the brute-force oracle.
    #[arg(long)]
    oracle: bool,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Random measurement frames sampled by the oracle.
    #[arg(long, default_value_t = 200)]
    frames: usize,
    /// Skip the deterministic axis frames.
    #[arg(long)]
    no_axis_frames: bool,
}

impl OracleArgs {
    fn config(&self) -> Option<OracleConfig> {
        self.oracle.then(|| OracleConfig {
            n_random_frames: self.frames,
            seed: self.seed,
            include_axis_frames: !self.no_axis_frames,
            ..OracleConfig::default()
        })
    }
}

#[derive(Args)]
struct ComputeArgs {
    /// Twice the spin quantum number j.
    #[arg(long = "two-j")]
    two_j: u32,
    /// Multiplet weight F; fractions such as 1/3 are accepted.
    #[arg(long = "f", value_parser = parse_weight)]
    f: f64,
    #[command(flatten)]
    oracle: OracleArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated list of 2j values.
    #[arg(long = "two-j", value_delimiter = ',', required = true)]
    two_j: Vec<u32>,
    #[arg(long, default_value = "0", value_parser = parse_weight)]
    f_start: f64,
    #[arg(long, default_value = "1", value_parser = parse_weight)]
    f_end: f64,
    /// Number of grid points, endpoints included.
    #[arg(long, default_value_t = 101)]
    f_steps: usize,
    /// Comma-separated measure names, in column order.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "deficit_paper,deficit_exact,discord_paper,discord_exact,eof"
    )]
    measures: Vec<String>,
    #[command(flatten)]
    oracle: OracleArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "two-j-max", default_value_t = 10)]
    two_j_max: u32,
    #[arg(long, default_value_t = 51)]
    f_steps: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    frames: usize,
    #[arg(long, default_value_t = 1e-8)]
    oracle_tol: f64,
    #[arg(long, default_value_t = 1e-9)]
    constancy_tol: f64,
    #[arg(long, default_value_t = 1e-10)]
    identity_tol: f64,
    #[arg(long, default_value_t = 1e-10)]
    invariance_tol: f64,
    /// Also write the report as JSON to this path ("-" for standard output,
    /// replacing the text report).
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct FigureArgs {
    /// fig1a, fig1b, fig1c, fig1d, fig2a or fig2b.
    name: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Accepts decimals (`0.25`) and integer fractions (`1/3`); fractions are
/// divided once, in floating point, from their exact integer parts.
fn parse_weight(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let value = match s.split_once('/') {
        Some((num, den)) => {
            let num: u64 = num
                .trim()
                .parse()
                .map_err(|_| format!("bad numerator in '{s}'"))?;
            let den: u64 = den
                .trim()
                .parse()
                .map_err(|_| format!("bad denominator in '{s}'"))?;
            if den == 0 {
                return Err(format!("zero denominator in '{s}'"));
            }
            num as f64 / den as f64
        }
        None => s
            .parse::<f64>()
            .map_err(|_| format!("'{s}' is not a number"))?,
    };
    if !(0.0..=1.0).contains(&value) {
        return Err(format!("F = {s} outside [0, 1]"));
    }
    Ok(value)
}

enum Failure {
    Usage(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(msg) => Failure::Io(msg),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) if p.as_os_str() != "-" => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?,
        )),
        _ => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn compute(args: &ComputeArgs) -> Result<u8, Failure> {
    let s = SpinLabel::coupled(args.two_j)?;
    let report = correlation_report(s, args.f)?;
    let mut doc = serde_json::to_value(&report).expect("report serializes");
    if let Some(cfg) = args.oracle.config() {
        let r = run_oracle(&build_state(s, args.f)?, &cfg)?;
        let obj = doc.as_object_mut().expect("report is an object");
        obj.insert("deficit_numeric".into(), json!(r.deficit_numeric));
        obj.insert("discord_numeric".into(), json!(r.discord_numeric));
        obj.insert("entropy_spread".into(), json!(r.entropy_spread));
        obj.insert("frames_evaluated".into(), json!(r.frames_evaluated));
        obj.insert("argmin_bloch_direction".into(), json!(r.argmin_frame.z));
    }
    write_json(&args.out, &doc)?;
    Ok(0)
}

fn write_json(path: &Option<PathBuf>, doc: &Value) -> Result<(), Failure> {
    let mut out = open_output(path)?;
    serde_json::to_writer_pretty(&mut out, doc).map_err(|e| Failure::Io(e.to_string()))?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn sweep(args: &SweepArgs) -> Result<u8, Failure> {
    let measures = args
        .measures
        .iter()
        .map(|m| m.parse::<Measure>())
        .collect::<Result<Vec<_>, _>>()?;
    let spec = SweepSpec {
        two_j_list: args.two_j.clone(),
        f_start: args.f_start,
        f_end: args.f_end,
        f_steps: args.f_steps,
        measures,
        oracle: args.oracle.config(),
    };
    spec.validate()?;
    let table = run_sweep(&spec)?;
    table.write_csv(open_output(&args.out)?)?;
    Ok(0)
}

fn verify(args: &VerifyArgs) -> Result<u8, Failure> {
    let cfg = VerifyConfig {
        two_j_max: args.two_j_max,
        f_steps: args.f_steps,
        seed: args.seed,
        n_random_frames: args.frames,
        oracle_tol: args.oracle_tol,
        constancy_tol: args.constancy_tol,
        identity_tol: args.identity_tol,
        invariance_tol: args.invariance_tol,
        ..VerifyConfig::default()
    };
    let report = run_verify(&cfg)?;
    let json_to_stdout = args.json.as_ref().is_some_and(|p| p.as_os_str() == "-");
    if !json_to_stdout {
        let mut out = io::stdout().lock();
        out.write_all(report.render_text().as_bytes())?;
        out.flush()?;
    }
    if args.json.is_some() {
        write_json(
            &args.json,
            &serde_json::to_value(&report).expect("report serializes"),
        )?;
    }
    Ok(if report.passed() {
        0
    } else {
        EXIT_VERIFY_FAILED
    })
}

fn figure(args: &FigureArgs) -> Result<u8, Failure> {
    let fig: Figure = args.name.parse()?;
    let table = run_sweep(&fig.preset())?;
    table.write_csv(open_output(&args.out)?)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Compute(a) => compute(a),
        Command::Sweep(a) => sweep(a),
        Command::Verify(a) => verify(a),
        Command::Figure(a) => figure(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("su2-deficit: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("su2-deficit: i/o error: {msg}");
            ExitCode::from(EXIT_IO)
        }
    }
}

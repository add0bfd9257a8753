mod commands;
mod io;
mod report;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use goppa_core::{Error, PointConfig};
use serde_json::json;

use commands::{GenKind, Outcome};
use io::FieldJson;
use report::{Failure, Report};

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Parse(String),
    FieldMismatch { flag: String, file: String },
    Usage(String),
    Math(Error),
    Verify(Failure),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(m) => write!(f, "I/O error: {m}"),
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::FieldMismatch { flag, file } => write!(f, "field mismatch: --field is {flag} but the file declares {file}"),
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Math(e) => write!(f, "{}: {e}", commands::error_kind(e)),
            CliError::Verify(fail) => write!(f, "verification failed: {fail}"),
        }
    }
}

/// 1 for mathematical failures, 2 for violated preconditions.
fn math_exit_code(e: &Error) -> u8 {
    use Error::*;
    match e {
        NotGaleDual { .. }
        | CertificateSearchExhausted { .. }
        | CertificateNotFound(_)
        | NoTransport
        | TransportNotUnique(_)
        | NonReducedIntersection
        | NonRationalExcess
        | DegenerateAfterRetries(_)
        | RetryBudgetExhausted(_)
        | NoSolution
        | PartialTorsion(_)
        | SystemDimWrong { .. }
        | InvariantViolation(_)
        | LineOnCurve
        | DivisionByZero => 1,
        Parse { .. } | FieldMismatch { .. } => 3,
        _ => 2,
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) | CliError::Parse(_) | CliError::FieldMismatch { .. } | CliError::Usage(_) => 3,
            CliError::Math(e) => math_exit_code(e),
            CliError::Verify(_) => 1,
        }
    }
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (i, j) = s.split_once(',').ok_or("expected I,J")?;
    let parse = |x: &str| x.trim().parse::<usize>().map_err(|_| format!("bad index {x:?}"));
    Ok((parse(i)?, parse(j)?))
}

#[derive(Parser)]
#[command(name = "goppa", version, about = "Gale transforms and certified Goppa-duality factorizations")]
struct Cli {
    /// Record wall-clock timings in the report.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// rational | prime:P; must agree with the file.
    #[arg(long, value_parser = FieldJson::parse_flag)]
    field: Option<FieldJson>,
}

#[derive(Subcommand)]
enum Command {
    /// Gale transform of a configuration.
    Gale(InputArgs),
    /// Rational normal curve through s+3 points of P^s.
    Rnc(InputArgs),
    /// Conic through five plane points.
    Conic5(InputArgs),
    /// Ninth base point of the pencil of cubics through eight points.
    Pencil9(InputArgs),
    /// Eight points of P^4 through a plane blown up at one point.
    Eightp4(InputArgs),
    /// Seven points of P^3 through a plane blown up at two points.
    Sevenp3 {
        #[command(flatten)]
        io: InputArgs,
        #[arg(long, value_parser = parse_pair)]
        pair: Option<(usize, usize)>,
    },
    /// Nine points cut out by two cubics against their Veronese images.
    Ci33 {
        #[arg(long, conflicts_with = "gen", required_unless_present = "gen")]
        input: Option<PathBuf>,
        #[arg(long, requires_all = ["field", "seed"])]
        gen: bool,
        #[arg(long, value_parser = FieldJson::parse_flag)]
        field: Option<FieldJson>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The four Veronese surfaces through nine general points of P^5.
    Coble9 {
        #[arg(long, conflicts_with = "gen", required_unless_present = "gen")]
        input: Option<PathBuf>,
        #[arg(long, requires = "field")]
        gen: bool,
        #[arg(long, value_parser = FieldJson::parse_flag)]
        field: Option<FieldJson>,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 40)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check every certificate of a report.
    Verify { report: PathBuf },
    /// Seeded instance generation.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 0)]
        gamma: usize,
        #[arg(long, default_value_t = 0)]
        dim: usize,
        #[arg(long, value_parser = FieldJson::parse_flag)]
        field: FieldJson,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn write_out(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit(outcome: Outcome, out: Option<&Path>, start: Option<Instant>) -> Result<(), CliError> {
    let (mut report, err) = outcome;
    if let Some(t) = start {
        report.timings_ms = Some(BTreeMap::from([("total".to_string(), t.elapsed().as_millis() as u64)]));
    }
    write_out(out, &report.to_json())?;
    match err {
        Some(e) => Err(CliError::Math(e)),
        None => Ok(()),
    }
}

fn input_or_gen(
    input: Option<&Path>,
    field: Option<&FieldJson>,
    seed: Option<u64>,
    generate: impl FnOnce(goppa_core::FieldSpec, u64) -> Result<PointConfig, Error>,
) -> Result<(PointConfig, bool), CliError> {
    match input {
        Some(p) => Ok((commands::load(p, field)?, false)),
        None => {
            let field = field.ok_or_else(|| CliError::Usage("--gen needs --field".into()))?;
            let seed = seed.ok_or_else(|| CliError::Usage("--gen needs --seed".into()))?;
            Ok((generate(field.spec()?, seed)?, true))
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let start = cli.timings.then(Instant::now);
    match cli.command {
        Command::Gale(a) => emit(commands::gale(&commands::load(&a.input, a.field.as_ref())?), a.out.as_deref(), start),
        Command::Rnc(a) => emit(commands::rnc(&commands::load(&a.input, a.field.as_ref())?), a.out.as_deref(), start),
        Command::Conic5(a) => emit(commands::conic5(&commands::load(&a.input, a.field.as_ref())?), a.out.as_deref(), start),
        Command::Pencil9(a) => emit(commands::pencil9(&commands::load(&a.input, a.field.as_ref())?), a.out.as_deref(), start),
        Command::Eightp4(a) => emit(commands::eightp4(&commands::load(&a.input, a.field.as_ref())?), a.out.as_deref(), start),
        Command::Sevenp3 { io, pair } => emit(
            commands::sevenp3(&commands::load(&io.input, io.field.as_ref())?, pair),
            io.out.as_deref(),
            start,
        ),
        Command::Ci33 {
            input,
            field,
            seed,
            out,
            ..
        } => {
            let (points, generated) = input_or_gen(input.as_deref(), field.as_ref(), seed, commands::ci33_generated)?;
            let params = if generated { json!({"gen": true, "seed": seed}) } else { json!({}) };
            emit(commands::ci33(&points, params), out.as_deref(), start)
        }
        Command::Coble9 {
            input,
            field,
            seed,
            samples,
            out,
            ..
        } => {
            let (points, generated) = input_or_gen(input.as_deref(), field.as_ref(), Some(seed), commands::coble_generated)?;
            let params = json!({"gen": generated, "seed": seed, "samples": samples});
            emit(commands::coble9(&points, params, samples, seed), out.as_deref(), start)
        }
        Command::Verify { report } => {
            let r: Report = io::read_json(&report)?;
            let n = report::verify(&r).map_err(CliError::Verify)?;
            println!("ok: {} report (status {}), {n} certificates verified", r.command, r.status);
            Ok(())
        }
        Command::Gen {
            kind,
            gamma,
            dim,
            field,
            seed,
            out,
        } => {
            let cfg = commands::gen(kind, field.spec()?, gamma, dim, seed)?;
            let mut text = serde_json::to_string_pretty(&cfg).expect("config serializes");
            text.push('\n');
            write_out(out.as_deref(), &text)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("goppa: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

//! Command-line driver. Exit codes: 0 success, 2 certificate falsified,
//! 3 budget exhausted, 64 usage error, 65 failed precondition or bad input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::certificate::{build_noncommutator, validate_certificate, Certificate, CertificateError};
use crate::field::FieldSpec;
use crate::matrix::Matrix;
use crate::oracle::{exhaustive_noncommutator_check, OracleError, OracleOptions, OracleOutcome, DEFAULT_PAIR_BUDGET};
use crate::packing::{
    best_separated_set, candidate_count, matrix_size_from_set, quadratic_construction, upper_bounds, LatticePoint,
    PackResult, SeparatedSet,
};
use crate::poly::RingCtx;
use crate::witness::{hollow_witness, nilpotent_witness, triangular_witness, verify_clique, WitnessPair};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSIFIED: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;

#[derive(Parser, Debug)]
#[command(name = "tracezero", version, about = "Trace-zero non-commutators and separated lattice point sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Largest separated set in the simplex for (m, d)
    Pack {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=64))]
        m: u32,
        #[arg(long)]
        d: u32,
        /// Time limit for the exact search, in seconds
        #[arg(long)]
        budget: Option<f64>,
        #[arg(long, value_enum, default_value_t = Construction::Mis)]
        construction: Construction,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute the set-size and matrix-size tables
    Tables {
        #[arg(long, default_value_t = 3)]
        m_min: u32,
        #[arg(long, default_value_t = 8)]
        m_max: u32,
        #[arg(long, default_value_t = 1)]
        d_min: u32,
        #[arg(long, default_value_t = 12)]
        d_max: u32,
        /// Seconds per cell
        #[arg(long, default_value_t = 10.0)]
        budget: f64,
        /// Skip cells whose graph has more vertices than this
        #[arg(long, default_value_t = 3000)]
        max_vertices: u128,
        /// Plain-text tables instead of JSON
        #[arg(long)]
        text: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decompose a matrix as a commutator [X, B]
    Witness {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, value_enum)]
        mode: WitnessMode,
        /// Comma-separated clique elements, for hollow mode
        #[arg(long, value_delimiter = ',')]
        clique: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recheck a serialized witness pair
    VerifyWitness { file: PathBuf },
    /// Build a non-commutator certificate
    Certify {
        #[arg(long, value_parser = clap::value_parser!(u32).range(3..=64))]
        m: u32,
        #[arg(long)]
        d: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        n: u32,
        /// JSON list of points, or the output of `pack`
        #[arg(long, conflicts_with = "auto", required_unless_present = "auto")]
        set: Option<PathBuf>,
        #[arg(long)]
        auto: bool,
        /// "Q" or a prime
        #[arg(long, default_value = "2")]
        field: String,
        #[arg(long)]
        budget: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a certificate file
    VerifyCert { file: PathBuf },
    /// Exhaustive search for a commutator decomposition of a certificate matrix
    Oracle {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, default_value_t = DEFAULT_PAIR_BUDGET)]
        budget: u128,
        #[arg(long)]
        resume: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form upper bounds for m
    Bound {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=64))]
        m: u32,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    Mis,
    Quadratic,
    Auto,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessMode {
    Triangular,
    Hollow,
    Nilpotent,
}

/// Output of `pack`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct PackOutput {
    pub m: usize,
    pub d: u32,
    pub size: usize,
    pub optimal: bool,
    pub points: Vec<LatticePoint>,
}

/// A matrix given either in full wire form or as `{"ctx": .., "rows": [["x1", "0"], ..]}`.
#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixInput {
    Full(Matrix),
    Rows { ctx: RingCtx, rows: Vec<Vec<String>> },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn data(message: impl ToString) -> Self {
        Failure { code: EXIT_DATA, message: message.to_string() }
    }
}

type Outcome = Result<(i32, String), Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn execute<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    run(cli, out, err)
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let (target, result) = dispatch(cli.command);
    match result {
        Ok((code, text)) => {
            if let Some(path) = target {
                if let Err(e) = write_atomic(&path, &text) {
                    let _ = writeln!(err, "cannot write {}: {e}", path.display());
                    return EXIT_DATA;
                }
            } else {
                let _ = writeln!(out, "{text}");
            }
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.write_all(b"\n")?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn dispatch(command: Command) -> (Option<PathBuf>, Outcome) {
    match command {
        Command::Pack { m, d, budget, construction, workers, out } => {
            (out, cmd_pack(m as usize, d, budget, construction, workers))
        }
        Command::Tables { m_min, m_max, d_min, d_max, budget, max_vertices, text, out } => {
            (out, cmd_tables(m_min, m_max, d_min, d_max, budget, max_vertices, text))
        }
        Command::Witness { matrix, mode, clique, out } => (out, cmd_witness(&matrix, mode, &clique)),
        Command::VerifyWitness { file } => (None, cmd_verify_witness(&file)),
        Command::Certify { m, d, n, set, auto: _, field, budget, out } => {
            (out, cmd_certify(m as usize, d, n as usize, set.as_deref(), &field, budget))
        }
        Command::VerifyCert { file } => (None, cmd_verify_cert(&file)),
        Command::Oracle { cert, p, workers, budget, resume, out } => (out, cmd_oracle(&cert, p, workers, budget, resume)),
        Command::Bound { m } => (None, cmd_bound(m as usize)),
    }
}

fn seconds(budget: Option<f64>) -> Result<Option<Duration>, Failure> {
    match budget {
        None => Ok(None),
        Some(s) => Duration::try_from_secs_f64(s)
            .map(Some)
            .map_err(|_| Failure { code: EXIT_USAGE, message: format!("invalid budget {s}") }),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("output types serialize")
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::data(format!("cannot read {}: {e}", path.display())))
}

fn pack(m: usize, d: u32, budget: Option<Duration>, construction: Construction, workers: usize) -> Result<PackResult, Failure> {
    let quadratic = || quadratic_construction(m, d).map_err(Failure::data);
    match construction {
        Construction::Mis => best_separated_set(m, d, budget, workers).map_err(Failure::data),
        Construction::Quadratic => Ok(PackResult { set: quadratic()?, optimal: false }),
        Construction::Auto => {
            let best = best_separated_set(m, d, budget, workers).map_err(Failure::data)?;
            if !best.optimal && d as usize + 1 >= m {
                let q = quadratic()?;
                if q.len() > best.set.len() {
                    return Ok(PackResult { set: q, optimal: false });
                }
            }
            Ok(best)
        }
    }
}

fn cmd_pack(m: usize, d: u32, budget: Option<f64>, construction: Construction, workers: usize) -> Outcome {
    let r = pack(m, d, seconds(budget)?, construction, workers)?;
    let output = PackOutput { m, d, size: r.set.len(), optimal: r.optimal, points: r.set.into_points() };
    Ok((EXIT_OK, to_json(&output)))
}

#[derive(Serialize)]
struct Cell {
    m: u32,
    d: u32,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
}

fn cmd_tables(m_min: u32, m_max: u32, d_min: u32, d_max: u32, budget: f64, max_vertices: u128, text: bool) -> Outcome {
    if m_min < 3 || m_min > m_max || d_min > d_max {
        return Err(Failure { code: EXIT_USAGE, message: "need 3 <= m-min <= m-max and d-min <= d-max".into() });
    }
    let budget = seconds(Some(budget))?;
    let mut cells = Vec::new();
    for m in m_min..=m_max {
        for d in d_min..=d_max {
            if candidate_count(m as usize, d) > max_vertices {
                cells.push(Cell { m, d, status: "skipped", size: None, n: None });
                continue;
            }
            let r = best_separated_set(m as usize, d, budget, 1).map_err(Failure::data)?;
            let size = r.set.len();
            let status = if r.optimal { "optimal" } else { "best-found" };
            cells.push(Cell { m, d, status, size: Some(size), n: matrix_size_from_set(size).ok() });
        }
    }
    if !text {
        return Ok((EXIT_OK, to_json(&json!({ "cells": cells }))));
    }
    let mut s = String::new();
    for (title, pick) in [("largest separated set", 0), ("largest non-commutator size n", 1)] {
        s.push_str(&format!("{title} (* = not proven optimal)\n m\\d"));
        for d in d_min..=d_max {
            s.push_str(&format!("{d:>5}"));
        }
        s.push('\n');
        for m in m_min..=m_max {
            s.push_str(&format!("{m:>4}"));
            for c in cells.iter().filter(|c| c.m == m) {
                let v = if pick == 0 { c.size } else { c.n };
                let mark = if c.status == "best-found" { "*" } else { " " };
                match v {
                    Some(v) => s.push_str(&format!("{v:>4}{mark}")),
                    None => s.push_str("    -"),
                }
            }
            s.push('\n');
        }
        s.push('\n');
    }
    Ok((EXIT_OK, s.trim_end().to_string()))
}

fn read_matrix(path: &Path) -> Result<Matrix, Failure> {
    let input: MatrixInput = serde_json::from_str(&read(path)?).map_err(|e| Failure::data(format!("bad matrix: {e}")))?;
    match input {
        MatrixInput::Full(m) => Ok(m),
        MatrixInput::Rows { ctx, rows } => {
            let refs: Vec<Vec<&str>> = rows.iter().map(|r| r.iter().map(String::as_str).collect()).collect();
            let slices: Vec<&[&str]> = refs.iter().map(Vec::as_slice).collect();
            Matrix::parse(ctx, &slices).map_err(|e| Failure::data(format!("bad matrix: {e}")))
        }
    }
}

fn cmd_witness(path: &Path, mode: WitnessMode, clique: &[String]) -> Outcome {
    let a = read_matrix(path)?;
    let pair = match mode {
        WitnessMode::Triangular => triangular_witness(&a),
        WitnessMode::Nilpotent => nilpotent_witness(&a),
        WitnessMode::Hollow => {
            let ctx = *a.ctx();
            let elements = clique
                .iter()
                .map(|s| ctx.parse(s.trim()))
                .collect::<Result<Vec<_>, _>>()
                .map_err(Failure::data)?;
            verify_clique(elements, &ctx).and_then(|c| hollow_witness(&a, &c))
        }
    }
    .map_err(Failure::data)?;
    Ok((EXIT_OK, to_json(&pair)))
}

fn cmd_verify_witness(path: &Path) -> Outcome {
    let pair: WitnessPair = serde_json::from_str(&read(path)?).map_err(Failure::data)?;
    Ok((EXIT_OK, to_json(&json!({ "verified": true, "n": pair.target().size() }))))
}

fn parse_field(s: &str) -> Result<FieldSpec, Failure> {
    if s.eq_ignore_ascii_case("q") {
        return Ok(FieldSpec::Rationals);
    }
    let p: u64 = s.parse().map_err(|_| Failure { code: EXIT_USAGE, message: format!("field must be Q or a prime, got {s}") })?;
    FieldSpec::prime(p).map_err(Failure::data)
}

fn read_points(path: &Path) -> Result<Vec<LatticePoint>, Failure> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum PointsInput {
        Pack(PackOutput),
        List(Vec<LatticePoint>),
    }
    match serde_json::from_str(&read(path)?).map_err(|e| Failure::data(format!("bad point set: {e}")))? {
        PointsInput::Pack(p) => Ok(p.points),
        PointsInput::List(l) => Ok(l),
    }
}

fn cmd_certify(m: usize, d: u32, n: usize, set: Option<&Path>, field: &str, budget: Option<f64>) -> Outcome {
    let field = parse_field(field)?;
    let points = match set {
        Some(path) => read_points(path)?,
        None => {
            let quick = (d as usize + 1 >= m).then(|| quadratic_construction(m, d).ok()).flatten();
            let set: SeparatedSet = match quick {
                Some(q) if q.len() >= 2 * n - 1 => q,
                _ => pack(m, d, seconds(budget)?, Construction::Mis, 1)?.set,
            };
            set.into_points()
        }
    };
    let cert = build_noncommutator(m, d, &points, n, field).map_err(Failure::data)?;
    Ok((EXIT_OK, cert.to_json()))
}

fn cmd_verify_cert(path: &Path) -> Outcome {
    let text = read(path)?;
    let cert: Certificate = serde_json::from_str(&text)
        .map_err(|e| Failure::data(CertificateError::MalformedInput(e.to_string())))?;
    let report = validate_certificate(&cert);
    let code = if report.passed() { EXIT_OK } else { EXIT_DATA };
    Ok((code, to_json(&json!({ "valid": report.passed(), "checks": report.checks }))))
}

fn cmd_oracle(path: &Path, p: Option<u64>, workers: usize, budget: u128, resume: Option<PathBuf>) -> Outcome {
    let cert = Certificate::from_json(read(path)?.trim()).map_err(Failure::data)?;
    let p = match (p, cert.field) {
        (Some(p), FieldSpec::PrimeField(q)) if p != q as u64 => {
            return Err(Failure::data(format!("certificate is over F_{q}, not F_{p}")));
        }
        (Some(p), _) => p,
        (None, FieldSpec::PrimeField(q)) => q as u64,
        (None, FieldSpec::Rationals) => {
            return Err(Failure { code: EXIT_USAGE, message: "certificate is over Q; pass --p".into() });
        }
    };
    let opts = OracleOptions { budget, workers: workers.max(1), checkpoint: resume, normalize: true };
    match exhaustive_noncommutator_check(&cert, p, &opts) {
        Ok(OracleOutcome::NoWitness { pairs }) => {
            Ok((EXIT_OK, to_json(&json!({ "result": "NoWitness", "p": p, "pairs": pairs.to_string() }))))
        }
        Ok(OracleOutcome::FoundWitness { b, c }) => {
            Ok((EXIT_FALSIFIED, to_json(&json!({ "result": "FoundWitness", "p": p, "B": b, "C": c }))))
        }
        Err(OracleError::BudgetExceeded { required, budget }) => Err(Failure {
            code: EXIT_BUDGET,
            message: format!("search needs {required} pairs, budget is {budget}"),
        }),
        Err(e) => Err(Failure::data(e)),
    }
}

fn cmd_bound(m: usize) -> Outcome {
    let (set, matrix) = upper_bounds(m);
    let body = json!({
        "m": m,
        "set_bound": set.to_string(),
        "matrix_bound": matrix.map(|b| b.to_string()),
    });
    Ok((EXIT_OK, to_json(&body)))
}

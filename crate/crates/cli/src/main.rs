//! `spingen`: JSON front end for the spingen library.
//!
//! Every command prints one `CommandResult` object. Exit status is 0 iff
//! `status` is `"ok"`.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use spingen::binaryforms::{quadratic_report_with, DEFAULT_DISC_LIMIT};
use spingen::density::{scan, Method, ScanConfig, Sign, DEFAULT_CHUNK};
use spingen::lattice::{jordan_decompose, GramMatrix};
use spingen::poly::{parse_poly, Poly};
use spingen::serial::int_to_json;
use spingen::spinor::one_spinor_genus;
use spingen::tracefields::{disc_bound, parse_field_json, tame_local_shape, trace_gram, verify_quartic_table, RamificationData};
use spingen::{Error, Result};

#[derive(Parser)]
#[command(name = "spingen", version, about = "Spinor genera of integral trace forms")]
struct Cli {
    /// Compact single-line JSON.
    #[arg(long, global = true, conflicts_with = "pretty")]
    json: bool,
    /// Indented JSON (the default).
    #[arg(long, global = true)]
    pretty: bool,
    /// Largest |discriminant| for class-group computations.
    #[arg(long, global = true, default_value_t = DEFAULT_DISC_LIMIT)]
    limit_disc: i64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Jordan decomposition of a Gram matrix at a prime.
    Jordan {
        /// Gram matrix as CSV rows or {"rows": [[...], ...]}.
        #[arg(long)]
        gram: PathBuf,
        #[arg(long)]
        prime: u64,
    },
    /// One-proper-spinor-genus verdict for a lattice or a number field.
    SpinorCheck {
        #[arg(long, conflicts_with = "poly", required_unless_present = "poly")]
        gram: Option<PathBuf>,
        /// "-1,-1,0,1" (lowest degree first) or "x^3-x-1".
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
        /// JSON array of basis rows with "num/den" entries.
        #[arg(long, requires = "poly")]
        basis: Option<PathBuf>,
    },
    /// Trace form, class group and verdict for Q(√d).
    Quadratic {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
    },
    /// Density scan over squarefree d with |d| < xmax.
    Density {
        #[arg(long)]
        xmax: u64,
        #[arg(long, default_value = "both")]
        sign: Sign,
        #[arg(long, default_value = "oracle")]
        method: Method,
        /// Worker threads; 0 uses all cores.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, default_value_t = DEFAULT_CHUNK)]
        chunk: u64,
        /// Checkpoint log, created or resumed.
        #[arg(long)]
        resume: Option<PathBuf>,
    },
    /// Check the 36 wild quartic fields at 2.
    VerifyTable,
    /// Predicted local shape and discriminant bound from ramification data.
    Tame {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        prime: u64,
        /// "e1,f1;e2,f2;..."
        #[arg(long)]
        ram: String,
    },
}

fn parse_ram(s: &str) -> Result<Vec<(u64, u64)>> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let (e, f) = t.split_once(',').ok_or_else(|| Error::Parse(format!("expected \"e,f\", got {t:?}")))?;
            let num = |x: &str| x.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad integer {x:?}")));
            Ok((num(e)?, num(f)?))
        })
        .collect()
}

fn run(cmd: &Command, limit_disc: i64) -> Result<Value> {
    match cmd {
        Command::Jordan { gram, prime } => {
            let g = GramMatrix::load(gram)?;
            let j = jordan_decompose(&g, *prime)?;
            Ok(json!({ "display": j.to_string(), "decomposition": j.to_json() }))
        }
        Command::SpinorCheck { gram: Some(path), .. } => {
            let g = GramMatrix::load(path)?;
            let definite = g.is_definite();
            Ok(serde_json::to_value(one_spinor_genus(&g, definite)?)?)
        }
        Command::SpinorCheck { poly, basis, .. } => {
            let coeffs = parse_poly(poly.as_deref().unwrap_or_default())?;
            let mut field = json!({ "poly": coeffs.iter().map(int_to_json).collect::<Vec<_>>() });
            if let Some(path) = basis {
                field["basis"] = serde_json::from_str(&std::fs::read_to_string(path)?)?;
            }
            let (input, _) = parse_field_json(&field)?;
            let g = trace_gram(&input)?;
            let definite = Poly::from_ints(input.poly()).count_real_roots() == input.degree();
            Ok(serde_json::to_value(one_spinor_genus(&g, definite)?)?)
        }
        Command::Quadratic { d } => Ok(serde_json::to_value(quadratic_report_with(*d, limit_disc)?)?),
        Command::Density { xmax, sign, method, jobs, chunk, resume } => {
            let mut cfg = ScanConfig::new(*xmax, *sign, *method);
            cfg.jobs = *jobs;
            cfg.chunk = *chunk;
            cfg.limit_disc = limit_disc;
            cfg.checkpoint = resume.clone();
            Ok(serde_json::to_value(scan(&cfg)?)?)
        }
        Command::VerifyTable => {
            let report = verify_quartic_table();
            if report.passed != report.total {
                return Err(Error::TableFailed { failed: report.total - report.passed, total: report.total });
            }
            Ok(serde_json::to_value(report)?)
        }
        Command::Tame { n, prime, ram } => {
            let r = RamificationData::new(*prime, parse_ram(ram)?)?;
            let bound = disc_bound(*n, &r)?;
            let mut out = json!({ "n": n, "prime": prime, "tame": r.is_tame(), "bound": bound });
            if r.is_tame() {
                out["shape"] = serde_json::to_value(tame_local_shape(*n, &r)?)?;
            }
            Ok(out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let echo: Vec<String> = std::env::args().skip(1).collect();
    let start = Instant::now();
    let outcome = run(&cli.command, cli.limit_disc);
    let elapsed_ms = start.elapsed().as_millis() as u64;
    let (result, code) = match outcome {
        Ok(payload) => (json!({ "command": echo, "status": "ok", "payload": payload, "elapsed_ms": elapsed_ms }), ExitCode::SUCCESS),
        Err(e) => (
            json!({
                "command": echo,
                "status": "error",
                "error": { "code": e.code(), "message": e.to_string() },
                "elapsed_ms": elapsed_ms,
            }),
            ExitCode::FAILURE,
        ),
    };
    let text = if cli.json { serde_json::to_string(&result) } else { serde_json::to_string_pretty(&result) };
    println!("{}", text.expect("result serializes"));
    code
}

//! `fsupport` — batch front door for the support pipeline.
//!
//! `fsupport compute` runs the per-degree support computation described in a
//! JSON problem file; `fsupport oracle` cross-checks the total-complex
//! annihilator against the row-filtration answer at a fixed Frobenius level.
//! The env var `FSUPPORT_BUDGET` overrides the S-pair budget.

mod io;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use fsupport_core::cech::oracle_total_vs_row;
use fsupport_core::error::Error;
use fsupport_core::groebner::{Engine, DEFAULT_BUDGET};
use fsupport_core::support::supp_lc_ci;

use crate::io::{degree_row, env_block, render_text, LoadedProblem, ProblemFile, ResultFile};

#[derive(Parser)]
#[command(
    name = "fsupport",
    version,
    about = "Supports of torsion cohomology of complete-intersection quotients over F_p"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute per-degree supports from a JSON problem file.
    Compute {
        /// Problem file path.
        #[arg(long)]
        input: PathBuf,
        /// Output path (default: stdout).
        #[arg(long)]
        output: Option<PathBuf>,
        /// Output format.
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Directory for Groebner-basis transcripts (one file per run).
        #[arg(long)]
        dump_gb: Option<PathBuf>,
    },
    /// Cross-check the total-complex annihilator against the row answer.
    Oracle {
        /// Problem file path.
        #[arg(long)]
        input: PathBuf,
        /// Frobenius level for the comparison.
        #[arg(long)]
        e: u32,
    },
}

#[derive(ValueEnum, Clone, Copy)]
enum Format {
    Json,
    Text,
}

/// A terminal failure with its process exit code.
struct Failure {
    code: i32,
    kind: String,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e.kind() {
            "parse" | "validation" => 2,
            "unstabilized" => 3,
            "budget_exceeded" | "exponent_overflow" => 4,
            _ => 1,
        };
        Failure {
            code,
            kind: e.kind().to_string(),
            message: e.to_string(),
        }
    }
}

fn emit_failure(f: &Failure) {
    let payload = serde_json::json!({ "error": { "kind": f.kind, "message": f.message } });
    eprintln!("{payload}");
}

fn make_engine(dump_gb: Option<PathBuf>) -> Result<Engine, Failure> {
    let budget = match std::env::var("FSUPPORT_BUDGET") {
        Ok(v) => v.trim().parse::<u64>().map_err(|_| {
            Failure::from(Error::Validation(format!(
                "FSUPPORT_BUDGET must be an integer, got '{v}'"
            )))
        })?,
        Err(_) => DEFAULT_BUDGET,
    };
    let engine = Engine::new(budget);
    match dump_gb {
        Some(dir) => {
            std::fs::create_dir_all(&dir).map_err(|e| {
                Failure::from(Error::Validation(format!(
                    "cannot create dump directory {}: {e}",
                    dir.display()
                )))
            })?;
            Ok(engine.with_dump_dir(dir))
        }
        None => Ok(engine),
    }
}

fn load(input: &Path) -> Result<LoadedProblem, Failure> {
    Ok(ProblemFile::read(input)?.load()?)
}

fn run_compute(
    input: PathBuf,
    output: Option<PathBuf>,
    format: Format,
    dump_gb: Option<PathBuf>,
) -> Result<(), Failure> {
    let engine = make_engine(dump_gb)?;
    let problem = load(&input)?;
    let ring = problem.spec.ring.clone();
    let mut rows = Vec::new();
    for &k in &problem.degrees {
        let started = Instant::now();
        let d = supp_lc_ci(&engine, &problem.spec, k)?;
        let wall_ms = started.elapsed().as_millis() as u64;
        rows.push(degree_row(&ring, &d, wall_ms));
    }
    let result = ResultFile {
        environment: env_block(&engine, &problem.limits, ring.order()),
        degrees: rows,
    };
    let rendered = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&result).expect("result serializes");
            s.push('\n');
            s
        }
        Format::Text => render_text(&problem, &result),
    };
    match output {
        Some(path) => std::fs::write(&path, rendered).map_err(|e| {
            Failure::from(Error::Validation(format!(
                "cannot write {}: {e}",
                path.display()
            )))
        })?,
        None => print!("{rendered}"),
    }
    Ok(())
}

fn run_oracle(input: PathBuf, e: u32) -> Result<(), Failure> {
    let engine = make_engine(None)?;
    let problem = load(&input)?;
    let ring = &problem.spec.ring;
    let g = &problem.spec.torsion_gens;
    let (f1, f2) = &problem.spec.pair;
    let t = problem.spec.t();
    let mut mismatches = Vec::new();
    for k in 0..=(t + 2) {
        let report = oracle_total_vs_row(&engine, ring, g, f1, f2, e, k)?;
        let total = report
            .total_ann
            .gens()
            .iter()
            .map(|p| ring.format(p))
            .collect::<Vec<_>>()
            .join(", ");
        let row = report
            .row_ann
            .gens()
            .iter()
            .map(|p| ring.format(p))
            .collect::<Vec<_>>()
            .join(", ");
        let verdict = if report.matches { "match" } else { "MISMATCH" };
        println!("k = {k}, e = {e}: {verdict}  total = ({total})  row = ({row})");
        if !report.matches {
            mismatches.push(k);
        }
    }
    if mismatches.is_empty() {
        println!("all degrees match at level {e}");
        Ok(())
    } else {
        let list = mismatches
            .iter()
            .map(|k| format!("(k={k}, e={e})"))
            .collect::<Vec<_>>();
        Err(Failure {
            code: 5,
            kind: "oracle_mismatch".into(),
            message: format!("oracle disagreement at {}", list.join(", ")),
        })
    }
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Compute {
            input,
            output,
            format,
            dump_gb,
        } => run_compute(input, output, format, dump_gb),
        Cmd::Oracle { input, e } => run_oracle(input, e),
    };
    if let Err(f) = outcome {
        emit_failure(&f);
        std::process::exit(f.code);
    }
}

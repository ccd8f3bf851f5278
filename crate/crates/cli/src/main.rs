use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, ValueEnum};
use fk3_core::report::{run, Command, RunOptions};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    Hodge,
    Chi,
    Euler,
    Bbw,
    Enumerate,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Command {
        match c {
            Cmd::Hodge => Command::Hodge,
            Cmd::Chi => Command::Chi,
            Cmd::Euler => Command::Euler,
            Cmd::Bbw => Command::Bbw,
            Cmd::Enumerate => Command::Enumerate,
        }
    }
}

/// Hodge numbers, Euler characteristics and cohomology of zero loci in
/// products of Grassmannians.
#[derive(Debug, Parser)]
#[command(name = "fk3", version)]
struct Args {
    command: Cmd,
    /// Specification, e.g. "Gr(2,9): dual(Q1)(1)".
    spec: Option<String>,
    /// Read the specification from a file instead.
    #[arg(long, conflicts_with = "spec")]
    file: Option<PathBuf>,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
    /// Do not assume generic maximal rank of differentials.
    #[arg(long)]
    raw_intervals: bool,
    /// Bundle whose Euler characteristic `chi` computes.
    #[arg(long)]
    twist: Option<String>,
    /// Make `chi` compute the Euler characteristic of Omega^P.
    #[arg(long, value_name = "P", conflicts_with = "twist")]
    omega: Option<usize>,
    /// Family for `enumerate`: Gr, SGr, Ml, OGr, Zq1, products or all.
    #[arg(long)]
    family: Option<String>,
    #[arg(long, default_value_t = 12)]
    max_k: i64,
    #[arg(long, default_value_t = 12)]
    max_l: i64,
    /// Largest number of factors for product candidates.
    #[arg(long, default_value_t = 6)]
    max_factors: usize,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match go(&args) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn go(args: &Args) -> anyhow::Result<String> {
    if let Ok(n) = std::env::var("FK3_THREADS") {
        let n: usize = n.trim().parse().context("FK3_THREADS must be a positive integer")?;
        if n == 0 {
            bail!("FK3_THREADS must be a positive integer");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let text = match &args.file {
        Some(path) => Some(std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?),
        None => args.spec.clone(),
    };
    let opts = RunOptions {
        raw_intervals: args.raw_intervals,
        twist: args.twist.clone(),
        omega: args.omega,
        family: args.family.clone(),
        max_k: args.max_k,
        max_l: args.max_l,
        max_factors: args.max_factors,
    };
    let report = run(args.command.into(), text.as_deref().map(str::trim), &opts)?;
    Ok(if args.json { report.to_json() + "\n" } else { report.to_text() })
}

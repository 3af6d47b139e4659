//! Command-line front end of the `bsq` binary.
//!
//! Exit codes: 0 success (a blow-up verdict is a result, not a failure),
//! 1 i/o or numerical failure and failed acceptance criteria, 2 malformed
//! input, 3 well-formed input describing an impossible run.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::acceptance;
use crate::config::parse_list;
use crate::error::LabResult;
use crate::run::{execute, load_config, run_dir, status};
use crate::sweep::{sweep_cauchy, sweep_lifespan};

/// Environment variable naming the output root.
pub const OUTPUT_ROOT_ENV: &str = "BSQ_OUTPUT_ROOT";

#[derive(Debug, Parser)]
#[command(name = "bsq", version, about = "Pseudospectral Boussinesq-system runs, sweeps and checks")]
struct Cli {
    /// Directory under which run directories are created [env: BSQ_OUTPUT_ROOT, default: .]
    #[arg(long, global = true)]
    output_root: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one configuration (or re-run the configuration echoed in a manifest.json).
    Run { config: PathBuf },
    /// Lifespan sweep: one run per eps, each to sweep.t_budget / eps.
    SweepLifespan {
        config: PathBuf,
        /// Comma-separated eps values; defaults to sweep.eps.
        #[arg(long)]
        eps: Option<String>,
    },
    /// Cauchy study of the mollified system over delta.
    SweepCauchy {
        config: PathBuf,
        /// Comma-separated deltas; defaults to sweep.deltas.
        #[arg(long)]
        deltas: Option<String>,
    },
    /// Run an acceptance suite and print one JSON verdict per criterion.
    Acceptance { suite: String },
}

fn output_root(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os(OUTPUT_ROOT_ENV).map(PathBuf::from)).unwrap_or_else(|| PathBuf::from("."))
}

fn list_or(cli: Option<String>, fallback: &[f64]) -> LabResult<Vec<f64>> {
    match cli {
        Some(s) => parse_list(&s),
        None => Ok(fallback.to_vec()),
    }
}

fn dispatch(command: Command, root: &Path) -> LabResult<i32> {
    match command {
        Command::Run { config } => {
            let cfg = load_config(&config)?;
            let sim = execute(&cfg, root)?;
            println!("{}: {} rows, {}", run_dir(&cfg, root).display(), sim.rows.len(), status(&sim.verdict));
            Ok(0)
        }
        Command::SweepLifespan { config, eps } => {
            let cfg = load_config(&config)?;
            let eps = list_or(eps, &cfg.sweep_eps)?;
            let s = sweep_lifespan(&cfg, &eps, root)?;
            for p in &s.points {
                println!("eps {:?}: {}", p.eps, status(&p.verdict));
            }
            if let Some((a, _)) = s.fit {
                println!("lifespan exponent {a:.4}");
            }
            Ok(0)
        }
        Command::SweepCauchy { config, deltas } => {
            let cfg = load_config(&config)?;
            let deltas = list_or(deltas, &cfg.sweep_deltas)?;
            let r = sweep_cauchy(&cfg, &deltas, root)?;
            match r.slope {
                Some(s) => println!("Cauchy slope {s:.4}"),
                None => println!("Cauchy slope unavailable (degenerate {}, partial {})", r.degenerate, r.partial),
            }
            Ok(0)
        }
        Command::Acceptance { suite } => {
            let checks = acceptance::run_suite(&suite)?;
            for c in &checks {
                println!("{}", c.to_json());
            }
            Ok(if checks.iter().all(|c| c.pass) { 0 } else { 1 })
        }
    }
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let root = output_root(cli.output_root);
    match dispatch(cli.command, &root) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("bsq: {e}");
            e.exit_code()
        }
    }
}

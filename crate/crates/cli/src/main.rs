//! `ncfree` — evaluate free expressions on matrix tuples, query domain
//! membership, compute free derivatives, run randomized property checks and
//! probes, and reproduce the two LMI case studies (`mobius`, `ellipse`).
//!
//! Exit codes: 0 pass, 1 property violation, 2 parse error, 3 evaluation
//! error, 4 I/O error.
//!
//! All randomness is drawn from the SplitMix64 generator pinned in the
//! library docs, so a seed fully determines every sample; identical
//! invocations produce byte-identical JSON reports.

mod basic;
mod checks;
mod ellipse;
mod io;
mod mobius;
mod probes;

use clap::{Parser, Subcommand, ValueEnum};

use crate::io::{CliError, CommandOutput};

#[derive(Parser)]
#[command(name = "ncfree", version, about = "Free function theory toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Print the machine-readable JSON report to stdout instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Also write the JSON report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<std::path::PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a free expression at a matrix tuple.
    Eval {
        /// Expression source, e.g. "x1*x2 - x2*x1".
        expr: String,
        /// Path to the tuple JSON (array of matrices).
        #[arg(long, value_name = "FILE")]
        tuple: std::path::PathBuf,
        /// Number of variables; defaults to the tuple's arity.
        #[arg(long)]
        arity: Option<usize>,
    },
    /// Three-valued membership (inside/boundary/outside) with spectral gap.
    Member {
        #[arg(long, value_name = "FILE")]
        domain: std::path::PathBuf,
        #[arg(long, value_name = "FILE")]
        tuple: std::path::PathBuf,
    },
    /// Directional derivative or full derivative matrix at a point.
    Deriv {
        expr: String,
        #[arg(long, value_name = "FILE")]
        tuple: std::path::PathBuf,
        /// Direction tuple; omit to assemble the full derivative matrix.
        #[arg(long, value_name = "FILE")]
        dir: Option<std::path::PathBuf>,
        #[arg(long)]
        arity: Option<usize>,
    },
    /// Randomized free-map property suites; nonzero exit on violation.
    Check {
        #[arg(value_enum)]
        suite: CheckSuite,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Override the suite's pinned relative tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Boundary-to-boundary properness probe along random rays.
    ProbeProper {
        expr: String,
        #[arg(long, value_name = "FILE")]
        domain: std::path::PathBuf,
        #[arg(long, value_name = "FILE")]
        codomain: std::path::PathBuf,
        #[arg(long, default_value_t = 8)]
        rays: usize,
        #[arg(long, default_value_t = 20)]
        steps: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Fail (exit 1) if any terminal codomain gap exceeds this.
        #[arg(long)]
        gap_tol: Option<f64>,
        #[arg(long)]
        arity: Option<usize>,
    },
    /// Randomized injectivity probe (intertwining-based).
    ProbeInjective {
        expr: String,
        #[arg(long, value_name = "FILE")]
        domain: std::path::PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        arity: Option<usize>,
    },
    /// Reproduce the Möbius self-map checks on the disk ‖X−1‖ < √2.
    Mobius {
        #[arg(long)]
        theta: f64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Reproduce the non-commutative ellipse nonexistence witness.
    Ellipse,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum CheckSuite {
    Blocks,
    Sums,
    Similarity,
    Derivative,
    Ampliation,
}

fn main() {
    let cli = Cli::parse();
    let result = run(&cli.command);
    std::process::exit(finish(result, cli.json, cli.out.as_deref()));
}

fn run(command: &Command) -> Result<CommandOutput, CliError> {
    match command {
        Command::Eval { expr, tuple, arity } => basic::cmd_eval(expr, tuple, *arity),
        Command::Member { domain, tuple } => basic::cmd_member(domain, tuple),
        Command::Deriv {
            expr,
            tuple,
            dir,
            arity,
        } => basic::cmd_deriv(expr, tuple, dir.as_deref(), *arity),
        Command::Check {
            suite,
            trials,
            seed,
            tol,
        } => checks::cmd_check(*suite, *trials, *seed, *tol),
        Command::ProbeProper {
            expr,
            domain,
            codomain,
            rays,
            steps,
            seed,
            gap_tol,
            arity,
        } => probes::cmd_probe_proper(
            expr, domain, codomain, *rays, *steps, *seed, *gap_tol, *arity,
        ),
        Command::ProbeInjective {
            expr,
            domain,
            trials,
            seed,
            tol,
            arity,
        } => probes::cmd_probe_injective(expr, domain, *trials, *seed, *tol, *arity),
        Command::Mobius {
            theta,
            trials,
            seed,
        } => mobius::cmd_mobius(*theta, *trials, *seed),
        Command::Ellipse => ellipse::cmd_ellipse(),
    }
}

fn finish(
    result: Result<CommandOutput, CliError>,
    json: bool,
    out: Option<&std::path::Path>,
) -> i32 {
    match result {
        Ok(output) => {
            let rendered = ncfree::report::to_json_string_pretty(&output.report);
            if let Some(path) = out {
                if let Err(e) = std::fs::write(path, &rendered) {
                    eprintln!("I/O error writing {}: {e}", path.display());
                    return 4;
                }
            }
            if json {
                println!("{rendered}");
            } else {
                print!("{}", output.text);
            }
            if output.ok {
                0
            } else {
                1
            }
        }
        Err(err) => {
            eprintln!("{err}");
            err.exit_code()
        }
    }
}

//! `polord`: batch front end for the prover, checker, model finder and the
//! order constructions.
//!
//! Exit status: 0 established, 1 refuted or rejected, 2 unknown within the
//! bounds, 3 input error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Debug, Parser)]
#[command(name = "polord", version, about = "Inequational reasoning over polarized signatures")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

/// Flags shared by all subcommands; each reads the ones it needs.
#[derive(Debug, Clone, Args)]
struct Opts {
    /// Rule set: `eq`, or a comma list of base, wc, pos, identity, polarity.
    #[arg(long, global = true, default_value = "base")]
    calculus: String,
    /// Term universe for proof search: `subterms` or `apps:N`.
    #[arg(long, global = true, default_value = "apps:1")]
    universe: String,
    /// Saturation rounds before giving up.
    #[arg(long, global = true, default_value_t = 64)]
    max_depth: usize,
    /// Cap on the number of terms in the universe.
    #[arg(long, global = true, default_value_t = 2000)]
    max_universe: usize,
    /// Largest base carrier tried by the model search (default 3; 2 for `suite`).
    #[arg(long, global = true)]
    max_base: Option<usize>,
    /// Highest type order the model search covers exhaustively.
    #[arg(long, global = true, default_value_t = 2)]
    max_order: usize,
    /// Arrow spaces with more table cells are skipped.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    cell_budget: u64,
    /// Only weakly complete base preorders.
    #[arg(long, global = true)]
    require_wc: bool,
    /// Only antisymmetric base preorders.
    #[arg(long, global = true)]
    require_poset: bool,
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Search for proofs of the goals of a problem file.
    Prove {
        problem: PathBuf,
        /// Only this goal (0-based); all goals when omitted.
        #[arg(long)]
        goal: Option<usize>,
    },
    /// Check a proof file against a problem file.
    Check { problem: PathBuf, proof: PathBuf },
    /// Search for finite models of the axioms falsifying each goal.
    Countermodel {
        problem: PathBuf,
        #[arg(long)]
        goal: Option<usize>,
    },
    /// Complete a finite preorder and verify the embedding.
    Complete { preorder: PathBuf },
    /// Run the extension construction on an instance file.
    Extend { instance: PathBuf },
    /// Report which polarity tags each constant's interpretation satisfies.
    Classify { problem: PathBuf, model: PathBuf },
    /// Run the seeded property suites and print their transcripts.
    Suite {
        /// fixtures, soundness, completion, extension, conservativity,
        /// equational, roundtrip; all when omitted.
        names: Vec<String>,
        /// Cases per suite (suite default when omitted).
        #[arg(long)]
        cases: Option<usize>,
    },
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { commands::INPUT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut out = String::new();
    let code = match commands::run(&cli.cmd, &cli.opts, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("polord: {e:#}");
            commands::INPUT_ERROR
        }
    };
    print!("{out}");
    ExitCode::from(code)
}

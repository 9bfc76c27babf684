//! `goedel`: encode, enumerate, diagonalize, check proofs, audit
//! derivation scripts and query the modal oracles.

mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use goedel_core::Logic;

#[derive(Parser, Debug)]
#[command(
    name = "goedel",
    version,
    about = "Goedel numbering, diagonalization and assumption audits"
)]
pub struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,

    /// Directory for the persisted enumeration table.
    #[arg(long, global = true, env = "GOEDEL_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Goedel number of a formula.
    Encode { formula: String },
    /// Formula with the given Goedel number.
    Decode { number: String },
    /// Unary formulas with index below N.
    Enumerate {
        #[arg(long, value_name = "N")]
        up_to: u64,
    },
    /// Code of the n-th unary formula with x0 replaced by the numeral m.
    Subnum { n: String, m: String },
    /// Code of the formula coded by g with x0 replaced by the numeral g.
    Diagnum { g: String },
    /// Diagonal certificate (the Goedel sentence by default) as JSON.
    Diagonalize {
        /// Unary template; x0 is replaced by sub(x0,x0).
        #[arg(long)]
        template: Option<String>,
    },
    /// Proof objects.
    #[command(subcommand)]
    Prove(ProveCommand),
    /// Derivation-script audits.
    #[command(subcommand)]
    Audit(AuditCommand),
    /// Modal logic oracles.
    #[command(subcommand)]
    Model(ModelCommand),
}

#[derive(Subcommand, Debug)]
pub enum ProveCommand {
    /// Check a proof file.
    Check { file: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum AuditCommand {
    /// Audit a script file.
    Run { file: PathBuf },
    /// The shipped reconstruction of the contested derivation.
    Canonical,
    /// The shipped Goedel-style replay.
    Goedel,
    /// Assumptions consumed by each of the two shipped scripts.
    Compare,
    /// Minimal inconsistent assumption sets of a script file.
    Cores { file: PathBuf },
}

#[derive(Args, Debug)]
pub struct ModalArgs {
    /// Modal formula, `[]` for box and atoms p0, p1, ...
    pub formula: String,
    #[arg(long, default_value = "GL")]
    pub logic: Logic,
}

#[derive(Subcommand, Debug)]
pub enum ModelCommand {
    /// Evaluate a formula at world 0 of a model given as JSON.
    Check {
        #[command(flatten)]
        modal: ModalArgs,
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
    },
    /// Smallest model of the formula within the bound.
    Find {
        #[command(flatten)]
        modal: ModalArgs,
        #[arg(long, default_value_t = goedel_core::modal::MAX_SEARCH_WORLDS)]
        max_worlds: usize,
    },
    /// Validity by tableau, with a countermodel when invalid.
    Valid {
        #[command(flatten)]
        modal: ModalArgs,
    },
    /// Verdicts for the self-reference schemas in every logic.
    Schemas,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run::dispatch(&cli);
    if let Some(out) = &outcome.stdout {
        print!("{out}");
        if !out.ends_with('\n') {
            println!();
        }
    }
    if let Some(err) = &outcome.error {
        eprintln!("error: {err}");
    }
    ExitCode::from(outcome.exit_code())
}

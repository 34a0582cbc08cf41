//! `setpref`: single consistency checks, witnesses, DIMACS export, MSLSP
//! tooling and full impossibility searches.
//!
//! Exit codes: 0 satisfiable (or success), 20 unsatisfiable, 30 unknown or
//! partial, 64 usage error, 65 malformed input, 1 other failures.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use setpref::search::report::Format;
use setpref::{AxiomSet, DomainSize};

pub const EXIT_SAT: u8 = 0;
pub const EXIT_UNSAT: u8 = 20;
pub const EXIT_UNKNOWN: u8 = 30;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_DATA: u8 = 65;
pub const EXIT_FAILURE: u8 = 1;

#[derive(Parser, Debug)]
#[command(name = "setpref", version, about = "Impossibility search for rankings of sets of objects")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide one axiom set at one domain size.
    Check(CheckArgs),
    /// Print a satisfying pair of relations.
    Witness(WitnessArgs),
    /// Write the instance CNF in DIMACS format.
    Dimacs(DimacsArgs),
    /// Classify MSLSP sentences as existentially set-guarded or not.
    EsgCheck(EsgArgs),
    /// Ground an MSLSP sentence to DIMACS.
    Ground(GroundArgs),
    /// Run the lattice search.
    Search(SearchArgs),
    /// Print the results stored in a checkpoint.
    Report(ReportArgs),
    /// Solve a DIMACS file, printing competition-style output.
    Solve(SolveArgs),
}

fn parse_axioms(s: &str) -> Result<AxiomSet, String> {
    let set = AxiomSet::parse_list(s).map_err(|e| e.to_string())?;
    if set.is_empty() {
        return Err("empty axiom list".into());
    }
    Ok(set)
}

fn parse_size(s: &str) -> Result<DomainSize, String> {
    let n: u32 = s.parse().map_err(|_| format!("`{s}` is not a domain size"))?;
    DomainSize::new(n).map_err(|e| e.to_string())
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

#[derive(Args, Debug, Clone)]
pub struct Instance {
    /// Comma-separated axiom names, or `all`.
    #[arg(long, value_parser = parse_axioms)]
    pub axioms: AxiomSet,
    /// Number of objects.
    #[arg(long, value_parser = parse_size)]
    pub size: DomainSize,
}

#[derive(Args, Debug, Clone)]
pub struct Budget {
    /// Conflict limit per solver call.
    #[arg(long)]
    pub conflicts: Option<u64>,
    /// Wall-clock limit per solver call, in seconds.
    #[arg(long)]
    pub timeout: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    Builtin,
    External,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[command(flatten)]
    pub instance: Instance,
    #[arg(long, value_enum, default_value_t = SolverKind::Builtin)]
    pub solver: SolverKind,
    /// External solver binary; defaults to $SETPREF_EXTERNAL_SOLVER.
    #[arg(long)]
    pub solver_path: Option<PathBuf>,
    /// Write a DRAT refutation here when the instance is unsatisfiable.
    #[arg(long)]
    pub proof: Option<PathBuf>,
    /// Check the refutation with the built-in DRAT checker.
    #[arg(long, requires = "proof")]
    pub verify_proof: bool,
    #[command(flatten)]
    pub budget: Budget,
}

#[derive(Args, Debug)]
pub struct WitnessArgs {
    #[command(flatten)]
    pub instance: Instance,
    /// Use `>` and `~` instead of `≻` and `∼`.
    #[arg(long)]
    pub ascii: bool,
    #[command(flatten)]
    pub budget: Budget,
}

#[derive(Args, Debug)]
pub struct DimacsArgs {
    #[command(flatten)]
    pub instance: Instance,
    /// Output file; stdout when absent.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EsgArgs {
    /// MSLSP files.
    pub files: Vec<PathBuf>,
    /// Also classify every shipped catalog source.
    #[arg(long)]
    pub catalog: bool,
}

#[derive(Args, Debug)]
pub struct GroundArgs {
    pub file: PathBuf,
    #[arg(long, value_parser = parse_size)]
    pub size: DomainSize,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Largest conjunct, in literals, distributed without auxiliary variables.
    #[arg(long)]
    pub literal_budget: Option<u64>,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(long, value_parser = parse_axioms, default_value = "all")]
    pub axioms: AxiomSet,
    #[arg(long, default_value_t = 2)]
    pub min_size: u32,
    #[arg(long)]
    pub max_size: u32,
    /// Structured results file (JSON).
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// CSV table of the minimal impossibilities.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Append-only record of verdicts; an existing file is resumed.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Conflict limit per cell.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Wall-clock limit per cell, in seconds.
    #[arg(long)]
    pub time_budget: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 32)]
    pub batch_size: usize,
    /// Solved cells between direction switches; one full sweep by default.
    #[arg(long)]
    pub switch_interval: Option<u64>,
    /// Solve every cell directly.
    #[arg(long)]
    pub no_pruning: bool,
    #[arg(long)]
    pub no_witness_lifting: bool,
    /// Reuse one solver per size through selector assumptions.
    #[arg(long)]
    pub incremental: bool,
    /// Leave the element order free in cells containing LIN_E.
    #[arg(long)]
    pub no_order_fixing: bool,
    /// Report written to stdout.
    #[arg(long, value_parser = parse_format, default_value = "text")]
    pub format: Format,
    /// No progress lines on stderr.
    #[arg(long, short)]
    pub quiet: bool,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    #[arg(long)]
    pub checkpoint: PathBuf,
    #[arg(long, value_parser = parse_format, default_value = "text")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub proof: Option<PathBuf>,
    #[command(flatten)]
    pub budget: Budget,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Check(a) => commands::check(&a),
        Command::Witness(a) => commands::witness(&a),
        Command::Dimacs(a) => commands::dimacs(&a),
        Command::EsgCheck(a) => commands::esg_check(&a),
        Command::Ground(a) => commands::ground(&a),
        Command::Search(a) => commands::search(&a),
        Command::Report(a) => commands::report(&a),
        Command::Solve(a) => commands::solve_file(&a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("setpref: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

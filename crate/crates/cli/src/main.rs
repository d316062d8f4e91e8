//! `dtda`: run, decide, convert and refute tree automata given as text files.
//!
//! Exit status is 0 for ACCEPT / YES, 1 for REJECT / NO and 2 for errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "dtda",
    version,
    about = "Deterministic top-down tree automata toolkit"
)]
struct Cli {
    /// Print key: value lines instead of the human-readable report.
    #[arg(long, global = true)]
    structured: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an automaton on a tree (or a path automaton on a path word).
    Run {
        file: PathBuf,
        /// Term such as "f(a,b)", or a path word such as "f 1 a".
        input: String,
    },
    /// Decide a property; exit 0 means YES, 1 means NO.
    Decide {
        #[command(subcommand)]
        question: Question,
    },
    /// Convert between automaton kinds, optionally combining with others.
    Convert(ConvertArgs),
    /// Build two combs the set automaton cannot tell apart although exactly
    /// one lies in the target language.
    Refute {
        file: PathBuf,
        #[arg(long, value_enum)]
        target: Target,
    },
    /// List trees up to a size, optionally only those a file accepts.
    Enumerate(EnumerateArgs),
}

#[derive(Subcommand)]
enum Question {
    /// Is the tree language recognized by a deterministic top-down automaton?
    DtdaRecognizable { file: PathBuf },
    /// Do two automata recognize the same language?
    Equiv { left: PathBuf, right: PathBuf },
    /// Is the language empty?
    Empty { file: PathBuf },
    /// Is the language a union of cells of tfp(P_1), ..., tfp(P_k)?
    Boolcomb {
        file: PathBuf,
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Largest number of path languages accepted.
        #[arg(long, default_value_t = dtda::bridge::DEFAULT_MAX_ATOMS)]
        max_atoms: usize,
    },
}

#[derive(Args)]
struct ConvertArgs {
    file: PathBuf,
    /// Output kind.
    #[arg(long, value_enum)]
    to: OutKind,
    /// Output file (standard output when absent); a directory for
    /// `--to decomposition`.
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Complement before writing.
    #[arg(long)]
    complement: bool,
    /// Union with another automaton of the same kind.
    #[arg(long, value_name = "FILE")]
    union: Option<PathBuf>,
    /// Intersection with another automaton of the same kind.
    #[arg(long, value_name = "FILE")]
    intersect: Option<PathBuf>,
    /// Minimize deterministic results.
    #[arg(long)]
    minimize: bool,
}

#[derive(Args)]
struct EnumerateArgs {
    /// Alphabet as "f:2 a:0 b:0".
    #[arg(long, conflicts_with_all = ["alphabet_file", "accepted_by"])]
    alphabet: Option<String>,
    /// Alphabet file.
    #[arg(long, value_name = "FILE", conflicts_with = "accepted_by")]
    alphabet_file: Option<PathBuf>,
    /// Keep only trees accepted by this automaton (its alphabet is used).
    #[arg(long, value_name = "FILE")]
    accepted_by: Option<PathBuf>,
    #[arg(long, default_value_t = 5)]
    max_nodes: usize,
    /// Print this many random trees instead of all of them.
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    T1,
    T2,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutKind {
    Buta,
    Dtda,
    Dtdaset,
    Pathnfa,
    Pathdfa,
    Decomposition,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(&cli) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

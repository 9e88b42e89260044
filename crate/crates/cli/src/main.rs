use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thompson_core::cosetgraph::{CACHE_DIR_ENV, DEFAULT_BUDGET};
use thompson_core::elements::GroupClass;
use thompson_core::Error;

mod run;

/// Exact computations with Thompson's groups F, T and V: elements, coset
/// graphs of (G, G_[0,1/2]), ends diagnostics, property FA certificates.
#[derive(Debug, Parser)]
#[command(name = "thompson", version)]
pub struct Cli {
    /// Cap on worker threads (results do not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Vertex budget for ball exploration.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    /// Directory for cached coset balls.
    #[arg(long, global = true, env = CACHE_DIR_ENV)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed recorded in the run configuration.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Element algebra.
    #[command(subcommand)]
    Element(ElementCmd),
    /// Coset ball exploration and export.
    #[command(subcommand)]
    Ball(BallCmd),
    /// Finite-radius ends diagnostics.
    #[command(subcommand)]
    Ends(EndsCmd),
    /// The almost invariant set A.
    #[command(subcommand)]
    Ai(AiCmd),
    /// Property FA certificates.
    #[command(subcommand)]
    Fa(FaCmd),
    /// The modular group tree testbed.
    #[command(subcommand)]
    Tree(TreeCmd),
}

/// One element, given by a generator name, a word or a cell map.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct ElementArg {
    /// Standard generator: x0, x1, pi0, pi1.
    #[arg(long)]
    pub name: Option<String>,
    /// Product of generators, e.g. "x0^-1 pi1 x0 pi1".
    #[arg(long)]
    pub word: Option<String>,
    /// Cell map, e.g. "0/2^1 -> 0/2^2; 2/2^2 -> 1/2^2; 3/2^2 -> 1/2^1".
    #[arg(long)]
    pub map: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum ElementCmd {
    /// Evaluate at a dyadic point of [0,1).
    Eval {
        #[command(flatten)]
        element: ElementArg,
        /// "p/2^n", "p/q" with q a power of two, or an exact decimal.
        #[arg(long)]
        at: String,
    },
    /// Product of words, left factor applied last.
    Compose {
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// Order, searched up to a bound.
    Order {
        #[command(flatten)]
        element: ElementArg,
        #[arg(long, default_value_t = 200)]
        bound: u32,
    },
    /// A standard interval on which the element is the identity.
    Small {
        #[command(flatten)]
        element: ElementArg,
    },
    /// Standard cells off which the element is the identity.
    Support {
        #[command(flatten)]
        element: ElementArg,
    },
}

#[derive(Debug, Args)]
pub struct BallArgs {
    #[arg(long, value_parser = parse_group)]
    pub group: GroupClass,
    #[arg(long)]
    pub radius: u32,
}

#[derive(Debug, Subcommand)]
pub enum BallCmd {
    /// Explore (or load from the cache) and print shell sizes.
    Explore {
        #[command(flatten)]
        ball: BallArgs,
    },
    /// Generators, shells, frontier and A counts.
    Info {
        #[command(flatten)]
        ball: BallArgs,
    },
    /// Graphviz rendering; A-states are filled, the cut's A side is bold.
    ExportDot {
        #[command(flatten)]
        ball: BallArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct ScheduleArgs {
    #[arg(long, value_parser = parse_group)]
    pub group: GroupClass,
    /// Increasing radii, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub schedule: Vec<u32>,
    /// Translations tried per greedy round.
    #[arg(long, default_value_t = 24)]
    pub max_translations: usize,
    #[arg(long, default_value_t = 3)]
    pub rounds: usize,
}

#[derive(Debug, Subcommand)]
pub enum EndsCmd {
    /// Candidate lower bounds per scheduled radius.
    Report {
        #[command(flatten)]
        args: ScheduleArgs,
    },
    /// Amplify the best compact set by a disjoint covering translate.
    Amplify {
        #[command(flatten)]
        args: ScheduleArgs,
    },
    /// End traces of the first radius' best compact set.
    Traces {
        #[command(flatten)]
        args: ScheduleArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum AiCmd {
    /// |vA Δ A| from the breakpoint formula.
    Exact {
        /// Generator or word.
        #[arg(long)]
        gen: String,
        #[arg(long, value_parser = parse_group, default_value = "V")]
        group: GroupClass,
    },
    /// Flip states of v in a ball, compared with the exact count.
    Ball {
        #[arg(long)]
        gen: String,
        #[command(flatten)]
        ball: BallArgs,
    },
    /// The cut between A and its complement.
    Cut {
        #[command(flatten)]
        ball: BallArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum FaCmd {
    /// Build and verify the certificate for T.
    TCert {
        /// Also write the certificate document here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build and verify the certificate for V.
    VCert {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-verify a stored certificate document.
    Verify { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum TreeCmd {
    /// Exhaustive fixed-set and axis checks over short elements.
    Suite {
        #[arg(long, default_value_t = 18)]
        radius: usize,
        #[arg(long, default_value_t = 4)]
        max_syllables: usize,
    },
    /// Elliptic or hyperbolic, with fixed vertex or axis.
    Classify {
        /// Word over a, b, b2.
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 10)]
        radius: usize,
    },
}

fn parse_group(s: &str) -> Result<GroupClass, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Process exit status for a failure.
pub enum Failure {
    /// A certificate or checked property failed; the report is still printed.
    Property { report: String, message: String },
    Core(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

const EXIT_PROPERTY: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_USAGE: u8 = 64;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run::dispatch(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Property { report, message }) => {
            print!("{report}");
            eprintln!("{message}");
            ExitCode::from(EXIT_PROPERTY)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::ResourceLimit { .. } => EXIT_RESOURCE,
                Error::CertificateFailure(_) => EXIT_PROPERTY,
                Error::Parse(_) | Error::OutOfDomain(_) | Error::ClassMismatch { .. } => EXIT_USAGE,
                _ => 1,
            })
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod input;

use input::Source;

/// Pushdown intersections: crossing analysis, block-counting verdicts,
/// product constructions and pumping checks.
#[derive(Parser, Debug)]
#[command(name = "isl", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Machine-readable output on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    /// Length bound for language enumeration and oracle comparison.
    #[arg(long, global = true, value_name = "N")]
    pub max_len: Option<usize>,
    /// Hard cap on every enumeration length, whatever --max-len says.
    #[arg(
        long,
        global = true,
        env = "ISL_ORACLE_MAX_LEN",
        value_name = "N",
        hide_env_values = true
    )]
    pub oracle_max_len: Option<usize>,
    /// Accepting runs enumerated per machine and word.
    #[arg(long, global = true, value_name = "N")]
    pub runs_cap: Option<usize>,
    /// Configurations one search may hold before giving up.
    #[arg(long, global = true, value_name = "N", default_value_t = 2_000_000)]
    pub max_configs: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide membership of a word, with the accepting run.
    Simulate {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        word: String,
        /// Print every step of the accepting run.
        #[arg(long)]
        trace: bool,
    },
    /// Enumerate accepting runs and their push-pop matchings.
    Runs {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        word: String,
    },
    /// Crossing pairs between the two machines' matchings on one word.
    Crossings {
        #[command(flatten)]
        source: Source,
        /// Use the family word of this size.
        #[arg(long, conflicts_with = "word")]
        n: Option<usize>,
        #[arg(long)]
        word: Option<String>,
        /// Write an arc diagram here.
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
    },
    /// Classify a word family by how its crossings grow.
    Classify {
        #[command(flatten)]
        source: Source,
        /// Family sizes, comma separated.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
    },
    /// Context-freeness verdict for a block-counting spec.
    Characterize {
        #[command(flatten)]
        source: Source,
    },
    /// Build a construction and emit it as a pda-v1 document.
    Construct {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        product: ProductArgs,
        /// Cap on explored product configurations.
        #[arg(long, default_value_t = 200_000)]
        max_expand: usize,
        /// Write the document here instead of stdout.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Compare a construction's language with an independent oracle.
    Verify {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        product: ProductArgs,
    },
    /// Exhaustive pump-sensitive linkage check on a crossing witness.
    Linkage {
        #[command(flatten)]
        source: Source,
        /// Witness or family size.
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, value_enum, default_value_t = OracleChoice::Intersection)]
        oracle: OracleChoice,
        /// Only consider factorizations shorter than every segment.
        #[arg(long)]
        short_pumps: bool,
        /// Size hypothesis to report; defaults to four-large for block specs
        /// and inner-growing for machine pairs.
        #[arg(long, value_enum)]
        mode: Option<ModeChoice>,
        /// Threshold for the size hypothesis; defaults to --n.
        #[arg(long)]
        threshold: Option<usize>,
        /// Tabulate all factorizations by where vxy falls.
        #[arg(long)]
        cases: bool,
    },
    /// List, show, replay or export the bundled examples.
    Corpus {
        name: Option<String>,
        /// Check every recorded expectation.
        #[arg(long)]
        replay: bool,
        /// Write the example's artifacts to this directory.
        #[arg(long, value_name = "DIR")]
        export: Option<PathBuf>,
    },
    /// Classification table row for a corpus family, with arc diagrams.
    Report {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct ProductArgs {
    /// Product construction for machine pairs.
    #[arg(long = "construct", value_enum)]
    pub kind: Option<ProductChoice>,
    /// Gap bound for the displacement product.
    #[arg(long)]
    pub k: Option<usize>,
    /// Inner bound for the buffered product.
    #[arg(long)]
    pub d: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductChoice {
    Displacement,
    Buffered,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleChoice {
    Intersection,
    First,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeChoice {
    FourLarge,
    InnerGrowing,
}

/// What a successful command found. `Negative` answers (a rejected word, a
/// failed linkage, a language mismatch) exit with 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Positive,
    Negative,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(Status::Positive) => ExitCode::SUCCESS,
        Ok(Status::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hanoi_core::acceptance::DEFAULT_SEED;

#[derive(Parser, Debug)]
#[command(name = "hanoi", version, about = "Hanoi, Sierpinski, pegset and Kneser graph workbench")]
pub struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Write a run manifest with output digests to this path.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a graph family and write it as an edge list or JSON.
    Generate(GenerateArgs),
    /// Check a witness file against a graph.
    Verify(VerifyArgs),
    /// Run an analysis and print CSV.
    #[command(subcommand)]
    Analyze(AnalyzeCommand),
    /// Run the acceptance battery.
    Acceptance(AcceptanceArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Hanoi,
    Sierpinski,
    Ipn,
    G4,
    Kneser,
    Ds,
    Tensor,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Edgelist,
    Json,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    pub family: Family,
    #[arg(long)]
    pub pegs: Option<usize>,
    #[arg(long)]
    pub disks: Option<usize>,
    /// Sierpinski level.
    #[arg(long)]
    pub level: Option<usize>,
    /// Ground set size for kneser and ds.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Largest subset size for ds (default (n-1)/2).
    #[arg(long)]
    pub r: Option<usize>,
    /// Tensor factor: K<m>, C<m>, P<m> or an edge-list file.
    #[arg(long)]
    pub left: Option<String>,
    #[arg(long)]
    pub right: Option<String>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Output path; labels go to `<out>.labels.csv`. Defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write a width-4 tree decomposition (sierpinski, or hanoi with 3 pegs).
    #[arg(long)]
    pub decomposition: Option<PathBuf>,
    /// Also write the level separator (hanoi).
    #[arg(long)]
    pub separator: Option<PathBuf>,
    /// Also write the shipped octahedron subdivision witness (sierpinski level 5).
    #[arg(long)]
    pub witness: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyKind {
    Decomposition,
    Separator,
    Minor,
    Subdivision,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub kind: VerifyKind,
    /// Host graph in edge-list format.
    pub graph: PathBuf,
    /// Witness file: decomposition JSON or PACE text, separator JSON, minor JSON
    /// or subdivision JSON.
    pub witness: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    TwoState,
    ThreeState,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Draw {
    #[default]
    WithReplacement,
    WithoutReplacement,
}

#[derive(Subcommand, Debug)]
pub enum AnalyzeCommand {
    /// Connection probability after an endgame removal on H_3^n.
    Fairness {
        #[arg(long, default_value_t = 3)]
        pegs: usize,
        /// Disk counts: `5`, `3,5,7` or `3..9`.
        #[arg(long)]
        disks: String,
        #[arg(long, value_enum)]
        strategy: Strategy,
        #[arg(long, value_enum, default_value_t)]
        draw: Draw,
    },
    /// Recursive separator level sizes against their bounds.
    Separators {
        #[arg(long)]
        pegs: usize,
        #[arg(long)]
        disks: String,
    },
    /// BFS diameters of a family.
    Diameter {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        pegs: Option<usize>,
        /// Disk counts, Sierpinski levels or Ds ground sizes.
        #[arg(long)]
        disks: Option<String>,
        /// Kneser ground sizes.
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Exact vertex expansion of small family members.
    Expansion {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        pegs: Option<usize>,
        #[arg(long)]
        disks: Option<String>,
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Shadow bound checks on seeded random families.
    Kk {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Largest ground set size (at most 12).
        #[arg(long, default_value_t = 12)]
        n: usize,
    },
    /// Central binomial mass for `beta` (decimal or num/den).
    Mass {
        #[arg(long)]
        beta: String,
        /// Odd ground sizes up to 63.
        #[arg(long)]
        n: String,
    },
    /// Disk-swap automorphisms and orbit of pegset graphs.
    Transitivity {
        #[arg(long)]
        pegs: usize,
        #[arg(long)]
        disks: String,
    },
    /// Cross-edge search between dense slices of the cube.
    Slice {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Suite {
    #[default]
    Primary,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Text,
    Json,
}

#[derive(Args, Debug)]
pub struct AcceptanceArgs {
    #[arg(long, value_enum, default_value_t)]
    pub suite: Suite,
    /// Reduced caps and a subset of criteria.
    #[arg(long)]
    pub quick: bool,
    /// Octahedron witness to use instead of the shipped one.
    #[arg(long)]
    pub witness: Option<PathBuf>,
    /// Run only these criteria, e.g. `1,4,7`.
    #[arg(long, value_delimiter = ',')]
    pub criteria: Vec<u8>,
    #[arg(long, value_enum, default_value_t)]
    pub format: ReportFormat,
}

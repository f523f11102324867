use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use smyth::engine::DEFAULT_BUDGET;

#[derive(Debug, Parser)]
#[command(name = "smyth", version, about = "Linear relations among conjugates: criteria, enumeration and certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Output format; JSON is the stable one.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Candidate budget for exhaustive searches.
    #[arg(long, env = "SMYTH_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

/// A tuple over F_q[t], coefficients separated by ';'.
#[derive(Debug, Clone, Args)]
pub struct Tuple {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub coeffs: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test the absolute value criteria.
    Check {
        /// Field size; omit with --integer.
        #[arg(long, required_unless_present = "integer")]
        q: Option<u64>,
        #[arg(long)]
        coeffs: String,
        /// Treat the coefficients as integers.
        #[arg(long)]
        integer: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Count solutions in V_N^n and compare fibers with q^(N(n-2)-d).
    Enumerate {
        #[command(flatten)]
        tuple: Tuple,
        #[arg(long = "N")]
        n_box: usize,
        /// Count a single fiber at this coordinate (1-based).
        #[arg(long, requires = "x")]
        j: Option<usize>,
        /// Value of the fiber coordinate.
        #[arg(long, requires = "j")]
        x: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Emit a balanced multiset and its permutation certificate.
    Certify {
        #[command(flatten)]
        tuple: Tuple,
        #[arg(long = "N")]
        n_box: usize,
        /// Write the certificate here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Smallest balanced sub-multiset of the solutions in a box.
    Minimal {
        /// Field size; omit with --integer.
        #[arg(long, required_unless_present = "integer")]
        q: Option<u64>,
        #[arg(long)]
        coeffs: String,
        /// Box V_N for F_q[t] tuples.
        #[arg(long = "N", required_unless_present = "integer")]
        n_box: Option<usize>,
        /// Integer coefficients; solutions are drawn from [-bound, bound].
        #[arg(long)]
        integer: bool,
        #[arg(long, default_value_t = 3)]
        bound: i64,
        #[arg(long, default_value_t = 6)]
        max_size: usize,
        /// Allow each solution twice.
        #[arg(long)]
        repeat: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Triples attaining the order bound at a given height.
    Extremal {
        /// Field size; omit with --integer.
        #[arg(long, required_unless_present = "integer")]
        q: Option<u64>,
        #[arg(long = "D")]
        degree: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also attach a permutation certificate from the box V_N.
        #[arg(long = "N")]
        n_box: Option<usize>,
        #[arg(long)]
        integer: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Random permutation model.
    Heuristic {
        #[command(subcommand)]
        command: HeuristicCommand,
    },
    /// Quadratic number fields.
    Numfield {
        #[command(subcommand)]
        command: NumfieldCommand,
    },
    /// Re-check a certificate file.
    Verify {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Fiber counts for every row of a grid file (`q N coeffs` per line).
    Batch {
        grid: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Auto,
    Sample,
    Exhaustive,
}

#[derive(Debug, Subcommand)]
pub enum HeuristicCommand {
    /// Sample permutations from a group family and count kernel hits.
    Mc {
        #[command(flatten)]
        tuple: Tuple,
        #[arg(long = "N")]
        n_box: usize,
        #[arg(long, default_value = "symmetric")]
        family: String,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
        #[command(flatten)]
        common: Common,
    },
    /// Closed-form failure probability p_N.
    Pn {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long = "N")]
        n_box: usize,
        /// |G|; use --log-group-size for huge groups.
        #[arg(long, conflicts_with = "log_group_size", required_unless_present = "log_group_size")]
        group_order: Option<f64>,
        #[arg(long)]
        log_group_size: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// log p_N along a growth c_N (linear, constant:<c>, inverse, power:<k>).
    Scan {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "linear")]
        growth: String,
        #[arg(long, default_value_t = 1)]
        from: usize,
        #[arg(long, default_value_t = 6)]
        to: usize,
        #[command(flatten)]
        common: Common,
    },
}

/// A tuple over the ring of integers of Q(sqrt m), e.g. `1;1;w`.
#[derive(Debug, Clone, Args)]
pub struct QuadTuple {
    /// Squarefree m; 1 means Q.
    #[arg(long, allow_hyphen_values = true)]
    pub m: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: String,
}

#[derive(Debug, Subcommand)]
pub enum NumfieldCommand {
    /// Strong absolute value criteria.
    Criteria {
        #[command(flatten)]
        tuple: QuadTuple,
        #[command(flatten)]
        common: Common,
    },
    /// Search for a relation sum a_i zeta_i = 0 among roots of unity.
    Rou {
        #[command(flatten)]
        tuple: QuadTuple,
        #[arg(long, default_value_t = smyth::numfield::DEFAULT_MAX_ORDER)]
        max_order: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Certificate that (1, ..., 1, -alpha) is a Smyth tuple.
    Construct {
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Multiply one coefficient of an integer tuple by a root of unity.
    Twist {
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        /// A balanced tuple; repeat for each member.
        #[arg(long = "tuple", allow_hyphen_values = true, required = true)]
        tuples: Vec<String>,
        /// Coordinate to twist (1-based).
        #[arg(long, default_value_t = 1)]
        j: usize,
        /// Order of the root of unity.
        #[arg(long)]
        order: u64,
        #[command(flatten)]
        common: Common,
    },
}

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exact computations on resource orders: graphs, channels, majorization,
/// reactions, numerical semigroups and rational cones.
///
/// Exit codes: 0 computed, 1 refuted or false, 2 unknown (budget or guard),
/// 64 usage error, 65 malformed input. Size guards can be raised through
/// REMONO_GUARD_OVERRIDE; results beyond the default guards are unsupported.
#[derive(Debug, Parser)]
#[command(name = "remono", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Machine,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Search nodes allowed per decision.
    #[arg(long, global = true, default_value_t = 20_000_000)]
    pub budget_nodes: u64,
    /// Depth limit for sequence searches.
    #[arg(long, global = true, default_value_t = 64)]
    pub budget_depth: u32,
    /// Tolerance for floating-point results (Lovász number, Rényi bounds).
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tol: f64,
    /// Worker threads for independent subqueries.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Graphs under the disjunctive product.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Rational polyhedral cones and unions of cells.
    #[command(subcommand)]
    Cone(ConeCmd),
    /// Reaction systems.
    #[command(subcommand)]
    Rxn(RxnCmd),
    /// Stochastic channels.
    #[command(subcommand)]
    Channel(ChannelCmd),
    /// Majorization of finite distributions.
    #[command(subcommand)]
    Major(MajorCmd),
    /// Submonoids of the natural numbers.
    #[command(subcommand)]
    Numsg(NumsgCmd),
    /// Conversion rates in any supported instance.
    #[command(subcommand)]
    Rate(RateCmd),
}

#[derive(Debug, Subcommand)]
pub enum GraphCmd {
    /// Clique number, chromatic number, fractional chromatic number and Lovász number.
    Invariants { file: PathBuf },
    /// Searches for a homomorphism SOURCE → TARGET.
    Hom { source: PathBuf, target: PathBuf },
    /// Disjunctive product of two graphs, or their join.
    Product {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        join: bool,
    },
    /// Bounds on the Shannon capacity from clique numbers of powers and the Lovász number.
    Capacity {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_power: u32,
    },
    /// Turns a witness of n·x ≥ n·y into a catalyst z with x + z ≥ y + z.
    Catalyst {
        #[arg(long)]
        x: PathBuf,
        /// Use the product power x^k instead of x.
        #[arg(long, default_value_t = 1)]
        x_power: u32,
        #[arg(long)]
        y: PathBuf,
        #[arg(long, default_value_t = 1)]
        y_power: u32,
        /// Largest number of copies n to try.
        #[arg(long, default_value_t = 2)]
        copies: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum ConeCmd {
    /// Membership of a vector in the cone.
    Contains {
        cone: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
    /// The topological closure, as a cone document.
    Close { cone: PathBuf },
    /// Extreme rays and lineality of the dual of the closure.
    Dual { cone: PathBuf },
    /// Either a certificate that v is in the closure, or a separating functional.
    Separate {
        cone: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
    /// Maximal rate from x to y, by the primal program and by the dual rays.
    Rate {
        #[arg(long)]
        cone: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Whether a single functional embeds the order into the rationals.
    Numerical { cone: PathBuf },
    /// Extends a dominated functional from a subspace to the whole space.
    Extend {
        /// JSON document with "forms", "basis" and "values".
        file: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum RxnCmd {
    /// Searches for a reaction sequence turning x into exactly y.
    Reach {
        system: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Conservation laws, optionally as weighted atom counts.
    Laws {
        system: PathBuf,
        /// Read species names as chemical formulas.
        #[arg(long)]
        atoms: bool,
    },
    /// Extreme rays of the cone of additive monotones.
    Monotones { system: PathBuf },
    /// Whether every additive monotone decreases from x to y.
    Forder {
        system: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum ChannelCmd {
    /// Distinguishability graph, as a graph document.
    Graph { channel: PathBuf },
    /// Checks that Q = dec ∘ P ∘ enc exactly.
    Verify {
        p: PathBuf,
        q: PathBuf,
        #[arg(long)]
        enc: PathBuf,
        #[arg(long)]
        dec: PathBuf,
    },
    /// Searches for an encoder and decoder simulating Q with P.
    Search {
        p: PathBuf,
        q: PathBuf,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long, default_value_t = 6)]
        iterations: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Parallel use of two channels, as a channel document.
    Tensor { p: PathBuf, q: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Orientation {
    /// x ≥ y when x majorizes y.
    Majorizes,
    /// x ≥ y when y majorizes x.
    MajorizedBy,
}

#[derive(Debug, Subcommand)]
pub enum MajorCmd {
    /// Whether P majorizes Q. Distributions are files or inline lists like 4/5,1/5.
    Leq { p: String, q: String },
    /// Rényi entropy of order t (a rational, "one" or "inf").
    Renyi {
        p: String,
        #[arg(long)]
        t: String,
    },
    /// Rate bounds from P to Q with the uniform distribution on top.
    Rate {
        p: String,
        q: String,
        #[arg(long, default_value_t = 256)]
        resolution: usize,
        /// Largest copy count for witnessed lower bounds.
        #[arg(long, default_value_t = 10)]
        max_copies: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum NumsgCmd {
    /// Common divisor and normalized generators.
    Normalize {
        #[arg(long)]
        gen: String,
    },
    /// Gaps and Frobenius number of the normalized semigroup.
    Gaps {
        #[arg(long)]
        gen: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Instance {
    Graph,
    Channel,
    Major,
    Rxn,
}

#[derive(Debug, Args)]
pub struct Pair {
    #[arg(long, value_enum)]
    pub instance: Instance,
    /// Graph or channel file, distribution, or multiset such as "2 H2 + O2".
    #[arg(long)]
    pub x: String,
    #[arg(long)]
    pub y: String,
    /// Reaction system file, required for the rxn instance.
    #[arg(long)]
    pub system: Option<PathBuf>,
    /// Orientation for the major instance.
    #[arg(long, value_enum, default_value_t = Orientation::MajorizedBy)]
    pub order: Orientation,
}

#[derive(Debug, Subcommand)]
pub enum RateCmd {
    /// All witnessed (n, m) with n·x ≥ m·y in a box.
    Slice {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 4)]
        n_max: u32,
        #[arg(long, default_value_t = 4)]
        m_max: u32,
    },
    /// Lower bound from witnessed slopes, upper bound from monotones.
    Bounds {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 4)]
        n_max: u32,
        #[arg(long)]
        m_max: Option<u32>,
    },
}

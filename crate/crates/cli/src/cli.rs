use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::input::StreamOrder;

#[derive(Debug, Parser)]
#[command(name = "streamscope", version, about = "Random-order graph stream estimators")]
pub struct Cli {
    /// Worker threads for trial-level parallelism (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate the number of connected components.
    RunCc(RunArgs),
    /// Estimate the minimum spanning tree weight of a weighted graph.
    RunMst(RunArgs),
    /// Estimate bounded-degree disc type frequencies.
    RunDisc(RunArgs),
    /// Estimate the maximum independent set size from disc frequencies.
    RunMis(RunArgs),
    /// Run the invariant suite.
    Verify(VerifyArgs),
    /// Print the theoretical parameter settings (log10).
    Params(ParamsArgs),
    /// Write a corpus edge list.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Edge list: `u v` or `u v w` per line, optional `n=<int>` header.
    #[arg(long)]
    pub input: PathBuf,
    /// Vertex count; required unless the input has an `n=` header.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0.1)]
    pub tau: f64,
    /// Sampled roots `s`.
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    #[arg(long, default_value_t = 8)]
    pub kmax: usize,
    /// Disc radius.
    #[arg(long)]
    pub k: Option<usize>,
    /// Degree bound.
    #[arg(long)]
    pub d: Option<usize>,
    /// Largest admissible edge weight; inferred from the input when shuffling.
    #[arg(long = "W")]
    pub w: Option<u32>,
    #[arg(long, env = "STREAMSCOPE_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = StreamOrder::Shuffle)]
    pub stream_order: StreamOrder,
    /// Report the exact value instead of streaming.
    #[arg(long)]
    pub exact: bool,
    /// Largest component the exact MIS oracle will solve.
    #[arg(long, default_value_t = 64)]
    pub mis_component_cap: usize,
    /// Sampled vertices for the MIS estimate.
    #[arg(long, default_value_t = 500)]
    pub mis_samples: usize,
    /// Accuracy targets, recorded in the report only.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Report path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckName {
    ClosedForms,
    McAgreement,
    CanonicalReplay,
    DiscReplay,
    Projection,
    MstIdentity,
}

impl CheckName {
    pub const ALL: [CheckName; 6] = [
        CheckName::ClosedForms,
        CheckName::McAgreement,
        CheckName::CanonicalReplay,
        CheckName::DiscReplay,
        CheckName::Projection,
        CheckName::MstIdentity,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CheckName::ClosedForms => "closed-forms",
            CheckName::McAgreement => "mc-agreement",
            CheckName::CanonicalReplay => "canonical-replay",
            CheckName::DiscReplay => "disc-replay",
            CheckName::Projection => "projection",
            CheckName::MstIdentity => "mst-identity",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mutation {
    /// Require a depth gap of 3 instead of 2 for a violating edge.
    DepthOffByOne,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run only these checks (repeatable).
    #[arg(long, value_enum)]
    pub only: Vec<CheckName>,
    /// Inject a known defect into the detectors.
    #[arg(long, value_enum)]
    pub mutate: Option<Mutation>,
    #[arg(long, env = "STREAMSCOPE_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Monte-Carlo trials per cell.
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
}

#[derive(Debug, Args)]
pub struct ParamsArgs {
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub rho: f64,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Number of disc types `J`.
    #[arg(long)]
    pub types: Option<f64>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub d: Option<u32>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(subcommand)]
    pub kind: GenKind,
    #[arg(long, global = true, env = "STREAMSCOPE_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// Triangles, single edges and isolated vertices.
    Cc {
        #[arg(long, default_value_t = 50)]
        triangles: usize,
        #[arg(long, default_value_t = 30)]
        edges: usize,
        #[arg(long, default_value_t = 20)]
        singletons: usize,
    },
    /// Weighted path with weights 1 and 2.
    MstPath {
        #[arg(long, default_value_t = 200)]
        n: usize,
    },
    /// Triangles followed by three-vertex paths.
    TrianglesPaths {
        #[arg(long, default_value_t = 40)]
        triangles: usize,
        #[arg(long, default_value_t = 40)]
        paths: usize,
    },
    /// Disjoint random connected pieces.
    SmallComponents {
        #[arg(long, default_value_t = 300)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        max_size: usize,
        #[arg(long, default_value_t = 0.3)]
        p: f64,
    },
    /// Uniform graph with `m` edges.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// Connected graph with uniform weights in `1..=w`.
    ConnectedWeighted {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.1)]
        p: f64,
        #[arg(long, default_value_t = 5)]
        w: u32,
    },
}

//! Random-order graph-stream estimators for the number of connected
//! components, minimum spanning tree weight, and bounded-disc frequencies,
//! together with the exact oracles used to check them.

pub mod canonical;
pub mod detectors;
pub mod estimators;
pub mod graph;
pub mod scalar;
pub mod stream;
pub mod unionfind;
pub mod verify;

pub use canonical::{DiscType, RootedDisc, RootedTree};
pub use detectors::{BadReason, DiscDetector, Outcome, TreeDetector};
pub use graph::{Edge, Graph, GraphError, LoadOptions, VertexId};
pub use stream::{EdgeStream, PhaseThreshold, TimedEdge};

/// Report types at the default double precision.
pub type EstimateReport = estimators::CcReport<f64>;
pub type DiscReport = estimators::DiscReport<f64>;
pub type MstReport = estimators::MstReport<f64>;
pub type MisReport = estimators::MisReport<f64>;
/// Exact rational probabilities.
pub type Rational = num_rational::BigRational;

//! Exact oracles, brute-force enumeration, corpus generators and the
//! invariant checks built on them.

pub mod checks;
pub mod corpus;
mod enumerate;
mod oracles;

use thiserror::Error;

use crate::canonical::CanonicalError;
use crate::detectors::DetectorError;

pub use enumerate::{
    enumerate_outcomes, enumerate_outcomes_with, montecarlo_grid, montecarlo_outcomes, Empirical,
    OutcomeDistribution, MAX_ENUM_EDGES,
};
pub use oracles::{
    ball_code, bounded_disc_code, component_count, exact_cc_histogram, exact_disc_freq, exact_mis,
    exact_projected_disc_freq, kruskal_mst, mis_contains, mst_identity, threshold_component_counts,
    MisSolution, MIS_HARD_CAP,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("graph is not weighted")]
    Unweighted,
    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("component with {size} vertices exceeds the cap of {cap}")]
    ComponentTooLarge { size: usize, cap: usize },
    #[error("{m} edges is more than the enumerator's limit of {max}")]
    TooManyEdges { m: usize, max: usize },
    #[error(transparent)]
    Canonical(#[from] CanonicalError),
    #[error(transparent)]
    Detector(#[from] DetectorError),
}

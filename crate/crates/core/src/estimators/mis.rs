use std::collections::BTreeMap;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use serde::Serialize;
use thiserror::Error;

use crate::canonical::{project_extended_disc, DiscType, RootedDisc};
use crate::graph::{Edge, Graph, VertexId};
use crate::scalar::Real;
use crate::stream::{derive_seed, rng_from};
use crate::verify::{mis_contains, VerifyError};

use super::{DiscReport, EstimatorError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("component of {size} vertices exceeds the cap of {cap}")]
    ComponentTooLarge { size: usize, cap: usize },
    #[error("oracle failed: {0}")]
    Failed(String),
}

/// Answers whether `root` belongs to the independent set the oracle picks
/// for `part`. Must be deterministic for a given labelled `part`.
pub trait RootMembershipOracle {
    /// Short description recorded in reports.
    fn describe(&self) -> String;
    fn contains_root(&self, part: &Graph, root: VertexId) -> Result<bool, OracleError>;
}

/// Exact maximum independent set of the root's component, ties broken
/// towards the lexicographically smallest set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactMisOracle {
    pub component_cap: usize,
}

impl RootMembershipOracle for ExactMisOracle {
    fn describe(&self) -> String {
        format!("exact-mis(cap={})", self.component_cap)
    }

    fn contains_root(&self, part: &Graph, root: VertexId) -> Result<bool, OracleError> {
        mis_contains(part, root, self.component_cap).map_err(|e| match e {
            VerifyError::ComponentTooLarge { size, cap } => OracleError::ComponentTooLarge { size, cap },
            other => OracleError::Failed(other.to_string()),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MisReport<R> {
    pub algorithm: &'static str,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub samples: usize,
    pub seed: u64,
    pub oracle: String,
    pub accepted: usize,
    pub estimate: R,
    /// How often each projected `k`-disc type was drawn.
    pub projected_draws: BTreeMap<DiscType, u64>,
}

/// Representative of `gamma` projected to its `d`-bounded `k`-disc.
fn project(gamma: &DiscType, k: usize, d: usize) -> Result<DiscType, EstimatorError> {
    let (n, edges) = gamma.decode();
    let labels: Vec<VertexId> = (1..=n as u32).map(VertexId).collect();
    let disc = RootedDisc::from_local(n, &edges, 0, &labels);
    Ok(project_extended_disc(&disc, k, d)?)
}

/// Estimates the maximum independent set size from disc-type frequencies
/// gathered at radius `k + 1`: draws types in proportion to their positive
/// estimates, asks the oracle whether the root of a randomly labelled copy of
/// the projected disc is in its set, and scales the acceptance rate by `n`.
pub fn mis_estimate<R: Real>(
    report: &DiscReport<R>,
    n: usize,
    d: usize,
    k: usize,
    samples: usize,
    oracle: &dyn RootMembershipOracle,
    seed: u64,
) -> Result<MisReport<R>, EstimatorError> {
    if samples == 0 {
        return Err(EstimatorError::InvalidParams("samples must be at least 1".into()));
    }
    if report.k != k + 1 || report.d != d {
        return Err(EstimatorError::InvalidParams(format!(
            "disc report has k={} d={}, expected k={} d={d}",
            report.k,
            report.d,
            k + 1
        )));
    }
    let types: Vec<&DiscType> = report.per_type.keys().collect();
    let weights: Vec<f64> = report
        .per_type
        .values()
        .map(|c| c.to_f64().unwrap_or(0.0).max(0.0))
        .collect();
    if !weights.iter().any(|&w| w > 0.0) {
        return Err(EstimatorError::AllEstimatesNonpositive);
    }
    let pick = WeightedIndex::new(&weights).map_err(|e| EstimatorError::InvalidParams(e.to_string()))?;
    let mut rng = rng_from(derive_seed(seed, "mis"));
    let mut projected: BTreeMap<&DiscType, DiscType> = BTreeMap::new();
    let mut draws: BTreeMap<DiscType, u64> = BTreeMap::new();
    let mut accepted = 0;
    for _ in 0..samples {
        let gamma = types[pick.sample(&mut rng)];
        let delta = match projected.get(gamma) {
            Some(x) => x.clone(),
            None => {
                let x = project(gamma, k, d)?;
                projected.insert(gamma, x.clone());
                x
            }
        };
        *draws.entry(delta.clone()).or_insert(0) += 1;
        let (m, edges) = delta.decode();
        let mut labels: Vec<u32> = (1..=m as u32).collect();
        labels.shuffle(&mut rng);
        let part = Graph::new(m, edges.iter().map(|&(a, b)| Edge::new(labels[a], labels[b])))
            .expect("decoded disc is a simple graph");
        if oracle.contains_root(&part, VertexId(labels[0]))? {
            accepted += 1;
        }
    }
    let estimate = R::count(accepted) / R::count(samples) * R::count(n);
    Ok(MisReport {
        algorithm: "mis_estimate",
        n,
        k,
        d,
        samples,
        seed,
        oracle: oracle.describe(),
        accepted,
        estimate,
        projected_draws: draws,
    })
}

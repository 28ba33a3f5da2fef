//! End-to-end streaming estimators: component counts, MST weight, bounded
//! disc frequencies and the independent-set pipeline built on top of them.

mod cc;
mod disc;
mod grid;
mod mis;
mod params;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canonical::CanonicalError;
use crate::detectors::DetectorError;
use crate::scalar::Real;
use crate::stream::StreamError;

pub use cc::{mst_weight, num_cc, CcReport, MstReport, ThresholdSummary};
pub use disc::{num_disc, DiscReport};
pub use mis::{mis_estimate, ExactMisOracle, MisReport, OracleError, RootMembershipOracle};
pub use params::{disc_theory_params, theory_params, TheoryParams};

#[derive(Debug, Error)]
pub enum EstimatorError {
    #[error("vertex set is empty")]
    EmptyVertexSet,
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
    #[error("stream carries no weights")]
    UnweightedStream,
    #[error("W must be at least 1")]
    BadW,
    #[error("edge weight {weight} outside 1..={max}")]
    BadWeight { weight: u32, max: u32 },
    #[error("no disc type has a positive estimate")]
    AllEstimatesNonpositive,
    #[error("stream pass violated: {0}")]
    Pass(StreamError),
    #[error("detector memory {used} exceeded the bound {bound}")]
    SpaceBound { used: usize, bound: usize },
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Detector(#[from] DetectorError),
    #[error(transparent)]
    Canonical(#[from] CanonicalError),
    #[error(transparent)]
    Stream(#[from] StreamError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleMode {
    WithoutReplacement,
    WithReplacement,
}

impl SampleMode {
    /// Distinct vertices when there are enough of them.
    pub fn for_sizes(s: usize, n: usize) -> Self {
        if s <= n {
            SampleMode::WithoutReplacement
        } else {
            SampleMode::WithReplacement
        }
    }
}

/// Run parameters shared by the estimators. `tau`, `samples` and `k_max`
/// drive the run; the accuracy targets are only recorded.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimatorParams {
    pub tau: f64,
    #[serde(rename = "s")]
    pub samples: usize,
    pub k_max: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rho: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub delta: Option<f64>,
}

impl EstimatorParams {
    pub fn new(tau: f64, samples: usize, k_max: usize, seed: u64) -> Result<Self, EstimatorError> {
        let p = EstimatorParams {
            tau,
            samples,
            k_max,
            seed,
            epsilon: None,
            rho: None,
            delta: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), EstimatorError> {
        if !(self.tau > 0.0 && self.tau < 1.0) {
            return Err(EstimatorError::InvalidParams(format!("tau = {} not in (0, 1)", self.tau)));
        }
        if self.samples == 0 {
            return Err(EstimatorError::InvalidParams("s must be at least 1".into()));
        }
        if self.k_max == 0 {
            return Err(EstimatorError::InvalidParams("k_max must be at least 1".into()));
        }
        for (name, v) in [("epsilon", self.epsilon), ("rho", self.rho), ("delta", self.delta)] {
            if let Some(x) = v {
                if !(x > 0.0 && x < 1.0) {
                    return Err(EstimatorError::InvalidParams(format!("{name} = {x} not in (0, 1)")));
                }
            }
        }
        Ok(())
    }
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

/// `τ^t / t!`, through logarithms once the direct form could underflow.
fn tau_power_over_factorial<R: Real>(t: usize, tau: R) -> R {
    if t <= 20 {
        let mut g = R::one();
        for i in 1..=t {
            g = g * tau / R::count(i);
        }
        g
    } else {
        let log = t as f64 * tau.to_f64().expect("finite tau").ln() - ln_factorial(t);
        R::lit(log.exp())
    }
}

/// Probability that the `k − 1` tree edges of a size-`k` component arrive in
/// the first phase in one fixed order: `τ^(k−1) / (k−1)!`.
pub fn gamma_k<R: Real>(k: usize, tau: R) -> R {
    assert!(k >= 1, "gamma_k needs k >= 1");
    tau_power_over_factorial(k - 1, tau)
}

/// `τ^t / t!` for a disc type with `t` edges.
pub fn gamma_disc<R: Real>(t_edges: usize, tau: R) -> R {
    tau_power_over_factorial(t_edges, tau)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * b.abs().max(1e-300)
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma_k(1, 0.2f64), 1.0);
        assert_eq!(gamma_k(3, 0.5f64), 0.125);
        assert!(close(gamma_k(4, 0.1f64), 0.001 / 6.0));
        assert_eq!(gamma_disc(0, 0.5f64), 1.0);
        assert_eq!(gamma_disc(2, 0.5f64), 0.125);
        assert!(close(gamma_disc(3, 0.1f64), 1e-3 / 6.0));
        assert!((gamma_k(3, 0.5f32) - 0.125).abs() < 1e-7);
    }

    #[test]
    fn log_form_continues_direct_form() {
        // 25 steps of the direct product, compared with the log branch.
        let mut direct = 1.0f64;
        for i in 1..=25 {
            direct *= 0.3 / i as f64;
        }
        assert!((gamma_disc(25, 0.3f64) / direct - 1.0).abs() < 1e-10);
        assert!(gamma_k(400, 0.5f64) >= 0.0);
    }

    #[test]
    fn params_validation() {
        assert!(EstimatorParams::new(0.3, 10, 4, 1).is_ok());
        assert!(EstimatorParams::new(0.0, 10, 4, 1).is_err());
        assert!(EstimatorParams::new(1.0, 10, 4, 1).is_err());
        assert!(EstimatorParams::new(0.3, 0, 4, 1).is_err());
        assert!(EstimatorParams::new(0.3, 10, 0, 1).is_err());
        let mut p = EstimatorParams::new(0.3, 10, 4, 1).unwrap();
        p.rho = Some(2.0);
        assert!(p.validate().is_err());
    }

    #[test]
    fn sample_mode_switches_at_n() {
        assert_eq!(SampleMode::for_sizes(5, 5), SampleMode::WithoutReplacement);
        assert_eq!(SampleMode::for_sizes(6, 5), SampleMode::WithReplacement);
    }
}

//! Exact outcome probabilities by enumerating every edge order and every
//! phase threshold, and their Monte-Carlo counterparts.

use std::collections::BTreeMap;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::canonical::ViolationRule;
use crate::detectors::{BadReason, Detector, Outcome};
use crate::graph::{Edge, Graph, VertexId};
use crate::scalar::{binomial_pmf, Probability};
use crate::stream::{derive_seed, rng_from};

use super::VerifyError;

/// Largest edge count the enumerator accepts.
pub const MAX_ENUM_EDGES: usize = 8;

/// Probability of every detector outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeDistribution<P> {
    probs: BTreeMap<Outcome, P>,
}

impl<P: Probability> OutcomeDistribution<P> {
    pub fn get(&self, o: &Outcome) -> P {
        self.probs.get(o).cloned().unwrap_or_else(P::zero)
    }

    /// Probability that the detector reports anything other than `Bad`.
    pub fn good(&self) -> P {
        self.probs
            .iter()
            .filter(|(o, _)| o.is_good())
            .fold(P::zero(), |acc, (_, p)| acc.plus(p))
    }

    pub fn total(&self) -> P {
        self.probs.values().fold(P::zero(), |acc, p| acc.plus(p))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Outcome, &P)> {
        self.probs.iter()
    }

    pub fn to_f64(&self) -> BTreeMap<Outcome, f64> {
        self.probs.iter().map(|(o, p)| (o.clone(), p.to_f64())).collect()
    }
}

/// Runs one detector over `order` and returns its verdict before the phase
/// test, together with `t_last`.
fn replay(
    root: VertexId,
    k: usize,
    d: Option<usize>,
    rule: ViolationRule,
    order: impl IntoIterator<Item = Edge>,
) -> Result<(Outcome, u64), VerifyError> {
    let mut det = Detector::new(root, k, d, rule)?;
    for (i, e) in order.into_iter().enumerate() {
        det.update(&e, i as u64 + 1)?;
    }
    Ok((det.finalize(u64::MAX)?, det.t_last()))
}

/// Orders counted per (pre-phase outcome, `t_last`).
type OrderCounts = BTreeMap<(Outcome, u64), u64>;

/// Exact distribution of the detector outcome over a uniform edge order and
/// an independent `Λ ~ Bi(m, τ)`.
pub fn enumerate_outcomes<P: Probability + Send>(
    g: &Graph,
    root: VertexId,
    k: usize,
    d: Option<usize>,
    tau: &P,
) -> Result<OutcomeDistribution<P>, VerifyError> {
    enumerate_outcomes_with(g, root, k, d, tau, ViolationRule::Standard)
}

pub fn enumerate_outcomes_with<P: Probability + Send>(
    g: &Graph,
    root: VertexId,
    k: usize,
    d: Option<usize>,
    tau: &P,
    rule: ViolationRule,
) -> Result<OutcomeDistribution<P>, VerifyError> {
    let m = g.m();
    if m > MAX_ENUM_EDGES {
        return Err(VerifyError::TooManyEdges { m, max: MAX_ENUM_EDGES });
    }
    let edges = g.edges();
    // Count orders per (pre-phase outcome, t_last); the split by first edge
    // lets workers run independently, and integer counts merge exactly.
    let firsts: Vec<usize> = if m == 0 { vec![usize::MAX] } else { (0..m).collect() };
    let partial: Vec<Result<OrderCounts, VerifyError>> = firsts
        .par_iter()
        .map(|&first| {
            let mut counts = BTreeMap::new();
            if first == usize::MAX {
                let key = replay(root, k, d, rule, [])?;
                counts.insert(key, 1);
                return Ok(counts);
            }
            let rest: Vec<usize> = (0..m).filter(|&i| i != first).collect();
            for perm in rest.iter().copied().permutations(rest.len()) {
                let order = std::iter::once(edges[first]).chain(perm.iter().map(|&i| edges[i]));
                let key = replay(root, k, d, rule, order)?;
                *counts.entry(key).or_insert(0u64) += 1;
            }
            Ok(counts)
        })
        .collect();
    let mut counts: BTreeMap<(Outcome, u64), u64> = BTreeMap::new();
    for part in partial {
        for (key, c) in part? {
            *counts.entry(key).or_insert(0) += c;
        }
    }

    let orders: u64 = (1..=m as u64).product();
    let pmf = binomial_pmf(m, tau);
    // tail[t] = Pr[Λ ≥ t]
    let mut tail = vec![P::zero(); m + 2];
    for t in (0..=m).rev() {
        tail[t] = tail[t + 1].plus(&pmf[t]);
    }
    let denom = P::from_count(orders);
    let mut probs: BTreeMap<Outcome, P> = BTreeMap::new();
    let mut add = |o: Outcome, p: P| {
        let slot = probs.entry(o).or_insert_with(P::zero);
        *slot = slot.plus(&p);
    };
    for ((outcome, t_last), c) in counts {
        let share = P::from_count(c).over(&denom);
        if outcome.is_good() {
            let on_time = tail[t_last as usize].clone();
            let late = P::one().minus(&on_time);
            add(outcome, share.times(&on_time));
            if late > P::zero() {
                add(Outcome::Bad(BadReason::LateCompletion), share.times(&late));
            }
        } else {
            add(outcome, share);
        }
    }
    Ok(OutcomeDistribution { probs })
}

/// Empirical outcome counts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Empirical {
    pub counts: BTreeMap<Outcome, u64>,
    pub trials: u64,
}

impl Empirical {
    pub fn good(&self) -> u64 {
        self.counts.iter().filter(|(o, _)| o.is_good()).map(|(_, c)| c).sum()
    }

    pub fn frequency(&self, o: &Outcome) -> f64 {
        self.counts.get(o).copied().unwrap_or(0) as f64 / self.trials as f64
    }

    pub fn good_frequency(&self) -> f64 {
        self.good() as f64 / self.trials as f64
    }

    fn merge(mut self, other: Empirical) -> Empirical {
        for (o, c) in other.counts {
            *self.counts.entry(o).or_insert(0) += c;
        }
        self.trials += other.trials;
        self
    }
}

/// One random order and an independent threshold drawn edge by edge.
fn trial_stream(edges: &[Edge], tau: f64, seed: u64, trial: u64) -> (Vec<Edge>, u64) {
    let ts = derive_seed(seed, &format!("trial/{trial}"));
    let mut order = edges.to_vec();
    order.shuffle(&mut rng_from(derive_seed(ts, "permutation")));
    let mut coins = rng_from(derive_seed(ts, "coins"));
    let lambda = order.iter().filter(|_| coins.gen_bool(tau)).count() as u64;
    (order, lambda)
}

/// Seeded Monte-Carlo estimate of the outcome distribution.
#[allow(clippy::too_many_arguments)]
pub fn montecarlo_outcomes(
    g: &Graph,
    root: VertexId,
    k: usize,
    d: Option<usize>,
    tau: f64,
    trials: u64,
    seed: u64,
) -> Result<Empirical, VerifyError> {
    montecarlo_grid(g, &[(root, k)], d, tau, trials, seed, ViolationRule::Standard).map(|mut v| v.remove(0))
}

/// Monte-Carlo for many `(root, k)` cells at once; every trial feeds one
/// shared stream to all cells. Results do not depend on the thread count.
pub fn montecarlo_grid(
    g: &Graph,
    cells: &[(VertexId, usize)],
    d: Option<usize>,
    tau: f64,
    trials: u64,
    seed: u64,
    rule: ViolationRule,
) -> Result<Vec<Empirical>, VerifyError> {
    const CHUNK: u64 = 4096;
    let edges = g.edges();
    let chunks: Vec<u64> = (0..trials.div_ceil(CHUNK)).collect();
    let parts: Vec<Result<Vec<Empirical>, VerifyError>> = chunks
        .par_iter()
        .map(|&c| {
            let mut acc = vec![Empirical::default(); cells.len()];
            for trial in c * CHUNK..((c + 1) * CHUNK).min(trials) {
                let (order, lambda) = trial_stream(edges, tau, seed, trial);
                for (slot, &(root, k)) in acc.iter_mut().zip(cells) {
                    let mut det = Detector::new(root, k, d, rule)?;
                    for (i, e) in order.iter().enumerate() {
                        det.update(e, i as u64 + 1)?;
                    }
                    *slot.counts.entry(det.finalize(lambda)?).or_insert(0) += 1;
                    slot.trials += 1;
                }
            }
            Ok(acc)
        })
        .collect();
    let mut out = vec![Empirical::default(); cells.len()];
    for part in parts {
        out = out.into_iter().zip(part?).map(|(a, b)| a.merge(b)).collect();
    }
    Ok(out)
}

//! Random-order edge streams, the online phase-threshold coin, and
//! per-threshold filtered views.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, Graph};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StreamError {
    #[error("threshold view needs a weighted stream")]
    UnweightedStream,
    #[error("tau must lie strictly between 0 and 1, got {0}")]
    InvalidTau(f64),
    #[error("time step {got} delivered after {last}")]
    OutOfOrderTimeStep { last: u64, got: u64 },
    #[error("stream item {0} read more than once")]
    Reread(u64),
}

/// One stream item. Time steps start at 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TimedEdge {
    pub edge: Edge,
    pub time: u64,
}

/// A materialized edge order; item `i` has time step `i + 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgeStream {
    edges: Vec<Edge>,
}

impl EdgeStream {
    pub fn from_edges(edges: Vec<Edge>) -> Self {
        EdgeStream { edges }
    }

    /// The graph's edges in canonical (sorted) order.
    pub fn given_order(g: &Graph) -> Self {
        Self::from_edges(g.edges().to_vec())
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = TimedEdge> + '_ {
        self.edges.iter().enumerate().map(|(i, &edge)| TimedEdge {
            edge,
            time: i as u64 + 1,
        })
    }
}

/// Seeded Fisher–Yates permutation of the edge set.
pub fn shuffle_stream(g: &Graph, seed: u64) -> EdgeStream {
    let mut edges = g.edges().to_vec();
    edges.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    EdgeStream { edges }
}

/// Derives an independent child seed from a master seed and a label.
///
/// FNV-1a over the label, mixed with the master seed through splitmix64.
pub fn derive_seed(master: u64, label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    splitmix64(master ^ splitmix64(h))
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub(crate) fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Realized phase threshold `Λ` for a stream of length `m`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseThreshold {
    pub lambda: u64,
    pub tau: f64,
    pub m: u64,
}

/// Online `Bi(m, τ)` counter: one biased coin per stream edge.
#[derive(Clone, Debug)]
pub struct PhaseCoin {
    rng: ChaCha8Rng,
    tau: f64,
    heads: u64,
    flips: u64,
}

impl PhaseCoin {
    pub fn new(tau: f64, seed: u64) -> Result<Self, StreamError> {
        if !(tau > 0.0 && tau < 1.0) {
            return Err(StreamError::InvalidTau(tau));
        }
        Ok(PhaseCoin {
            rng: rng_from(seed),
            tau,
            heads: 0,
            flips: 0,
        })
    }

    pub fn flip(&mut self) {
        self.flips += 1;
        if self.rng.gen_bool(self.tau) {
            self.heads += 1;
        }
    }

    pub fn flips(&self) -> u64 {
        self.flips
    }

    pub fn threshold(&self) -> PhaseThreshold {
        PhaseThreshold {
            lambda: self.heads,
            tau: self.tau,
            m: self.flips,
        }
    }
}

/// Draws `Λ ~ Bi(m, τ)` by flipping `m` coins.
pub fn sample_lambda_online(m: u64, tau: f64, seed: u64) -> Result<PhaseThreshold, StreamError> {
    let mut coin = PhaseCoin::new(tau, seed)?;
    for _ in 0..m {
        coin.flip();
    }
    Ok(coin.threshold())
}

/// Sub-stream of edges with weight at most `t`, re-timestamped from 1.
pub fn threshold_view(stream: &EdgeStream, t: u32) -> Result<EdgeStream, StreamError> {
    let mut out = Vec::new();
    for e in stream.edges() {
        match e.weight {
            None => return Err(StreamError::UnweightedStream),
            Some(w) if w <= t => out.push(*e),
            Some(_) => {}
        }
    }
    Ok(EdgeStream { edges: out })
}

/// Pass-discipline guard: forwards items while checking that time steps run
/// 1, 2, 3, … and counting reads.
#[derive(Debug)]
pub struct Instrumented<I> {
    inner: I,
    reads: u64,
    violation: Option<StreamError>,
}

impl<I: Iterator<Item = TimedEdge>> Instrumented<I> {
    pub fn new(inner: I) -> Self {
        Instrumented {
            inner,
            reads: 0,
            violation: None,
        }
    }

    pub fn reads(&self) -> u64 {
        self.reads
    }

    /// First ordering problem observed, if any.
    pub fn violation(&self) -> Option<&StreamError> {
        self.violation.as_ref()
    }
}

impl<I: Iterator<Item = TimedEdge>> Iterator for Instrumented<I> {
    type Item = TimedEdge;

    fn next(&mut self) -> Option<TimedEdge> {
        let item = self.inner.next()?;
        let expected = self.reads + 1;
        if self.violation.is_none() && item.time != expected {
            self.violation = Some(if item.time < expected {
                StreamError::Reread(item.time)
            } else {
                StreamError::OutOfOrderTimeStep {
                    last: self.reads,
                    got: item.time,
                }
            });
        }
        self.reads += 1;
        Some(item)
    }
}

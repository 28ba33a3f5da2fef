//! A bank of detectors fed from one stream, with a vertex index so that each
//! edge only touches detectors holding one of its endpoints.

use std::collections::HashMap;

use rand::seq::index;
use rand::Rng;

use crate::detectors::{DetectorError, DiscDetector, TreeDetector, Update};
use crate::graph::{Edge, VertexId};
use crate::stream::rng_from;

use super::{EstimatorError, SampleMode};

pub(crate) trait GridMember {
    fn root(&self) -> VertexId;
    fn update(&mut self, e: &Edge, t: u64) -> Result<Update, DetectorError>;
    fn footprint(&self) -> usize;
    fn take_released(&mut self) -> Vec<VertexId>;
}

impl GridMember for TreeDetector {
    fn root(&self) -> VertexId {
        TreeDetector::root(self)
    }
    fn update(&mut self, e: &Edge, t: u64) -> Result<Update, DetectorError> {
        TreeDetector::update(self, e, t)
    }
    fn footprint(&self) -> usize {
        TreeDetector::footprint(self)
    }
    fn take_released(&mut self) -> Vec<VertexId> {
        TreeDetector::take_released(self)
    }
}

impl GridMember for DiscDetector {
    fn root(&self) -> VertexId {
        DiscDetector::root(self)
    }
    fn update(&mut self, e: &Edge, t: u64) -> Result<Update, DetectorError> {
        DiscDetector::update(self, e, t)
    }
    fn footprint(&self) -> usize {
        DiscDetector::footprint(self)
    }
    fn take_released(&mut self) -> Vec<VertexId> {
        DiscDetector::take_released(self)
    }
}

/// Detectors plus the accounting that backs the space bound: `live` is the
/// number of vertices held by active detectors, `peak` its running maximum
/// including the transient vertex a tree holds at the moment it overflows.
pub(crate) struct Grid<D> {
    pub dets: Vec<D>,
    index: HashMap<VertexId, Vec<u32>>,
    scratch: Vec<u32>,
    live: usize,
    peak: usize,
    bound: usize,
}

impl<D: GridMember> Grid<D> {
    pub fn new(dets: Vec<D>, bound: usize) -> Self {
        let mut index: HashMap<VertexId, Vec<u32>> = HashMap::new();
        let mut live = 0;
        for (i, d) in dets.iter().enumerate() {
            if d.footprint() > 0 {
                index.entry(d.root()).or_default().push(i as u32);
                live += d.footprint();
            }
        }
        Grid {
            dets,
            index,
            scratch: Vec::new(),
            live,
            peak: live,
            bound,
        }
    }

    pub fn peak(&self) -> usize {
        self.peak
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn feed(&mut self, e: &Edge, t: u64) -> Result<(), EstimatorError> {
        self.scratch.clear();
        for v in [e.u, e.v] {
            if let Some(ids) = self.index.get(&v) {
                self.scratch.extend_from_slice(ids);
            }
        }
        self.scratch.sort_unstable();
        self.scratch.dedup();
        for &id in &self.scratch {
            let det = &mut self.dets[id as usize];
            let before = det.footprint();
            let outcome = det.update(e, t)?;
            let mut transient = det.footprint();
            match outcome {
                Update::Accepted { new_vertex: Some(w) } => {
                    self.index.entry(w).or_default().push(id);
                }
                Update::WentBad => {
                    let released = det.take_released();
                    transient = transient.max(released.len());
                    for v in released {
                        if let Some(ids) = self.index.get_mut(&v) {
                            ids.retain(|&x| x != id);
                            if ids.is_empty() {
                                self.index.remove(&v);
                            }
                        }
                    }
                }
                _ => {}
            }
            self.peak = self.peak.max(self.live - before + transient);
            self.live = self.live - before + det.footprint();
        }
        if self.peak > self.bound {
            return Err(EstimatorError::SpaceBound {
                used: self.peak,
                bound: self.bound,
            });
        }
        Ok(())
    }
}

/// `s` roots from `1..=n`, distinct whenever `s ≤ n`.
pub(crate) fn sample_roots(n: usize, s: usize, seed: u64) -> (Vec<VertexId>, SampleMode) {
    let mut rng = rng_from(seed);
    let mode = SampleMode::for_sizes(s, n);
    let roots = match mode {
        SampleMode::WithoutReplacement => index::sample(&mut rng, n, s)
            .into_iter()
            .map(|i| VertexId(i as u32 + 1))
            .collect(),
        SampleMode::WithReplacement => (0..s).map(|_| VertexId(rng.gen_range(1..=n as u32))).collect(),
    };
    (roots, mode)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_are_distinct_when_possible() {
        let (r, mode) = sample_roots(50, 50, 3);
        assert_eq!(mode, SampleMode::WithoutReplacement);
        let mut sorted = r.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 50);
        let (r, mode) = sample_roots(5, 40, 3);
        assert_eq!(mode, SampleMode::WithReplacement);
        assert!(r.iter().all(|v| (1..=5).contains(&v.0)));
    }

    #[test]
    fn index_tracks_overflow() {
        let dets = vec![TreeDetector::new(VertexId(1), 1).unwrap(), TreeDetector::new(VertexId(1), 2).unwrap()];
        let mut g = Grid::new(dets, 100);
        g.feed(&Edge::new(1, 2), 1).unwrap();
        // k=1 overflowed (two vertices for an instant), k=2 holds {1, 2}.
        assert_eq!(g.live, 2);
        assert_eq!(g.peak(), 3);
        assert_eq!(g.index[&VertexId(1)], vec![1]);
        g.feed(&Edge::new(2, 3), 2).unwrap();
        assert!(g.index.is_empty());
        assert_eq!(g.live, 0);
    }
}

//! Per-root single-pass state machines: one collects a canonical BFS tree,
//! the other an extended bounded disc. Both read edges in time order and are
//! judged against the phase threshold only at the end of the stream.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canonical::{
    disc_code, violates, CanonicalError, DiscType, RootedDisc, RootedTree, RootedView,
    ViolationRule,
};
use crate::graph::{Edge, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DetectorError {
    #[error("k must be at least {min}, got {k}")]
    InvalidK { k: usize, min: usize },
    #[error("time step {got} is not after {last}")]
    OutOfOrderTimeStep { last: u64, got: u64 },
    #[error(transparent)]
    Canonical(#[from] CanonicalError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BadReason {
    ViolatingEdge,
    LargeCC,
    SmallCC,
    LateCompletion,
}

/// Final verdict of a detector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Outcome {
    Good,
    Disc(DiscType),
    Bad(BadReason),
}

impl Outcome {
    pub fn is_good(&self) -> bool {
        !matches!(self, Outcome::Bad(_))
    }
}

/// Effect of one update, reported so that callers can maintain a
/// vertex-to-detector index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Update {
    Ignored,
    Accepted { new_vertex: Option<VertexId> },
    WentBad,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum State<F> {
    Active(F),
    Bad(BadReason),
}

fn check_time(last: &mut u64, t: u64) -> Result<(), DetectorError> {
    if t <= *last {
        return Err(DetectorError::OutOfOrderTimeStep { last: *last, got: t });
    }
    *last = t;
    Ok(())
}

/// Collects `CT_k(root)` from a stream.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDetector {
    root: VertexId,
    k: usize,
    rule: ViolationRule,
    state: State<RootedTree>,
    released: Vec<VertexId>,
    last_seen: u64,
    t_last: u64,
}

impl TreeDetector {
    pub fn new(root: VertexId, k: usize) -> Result<Self, DetectorError> {
        Self::with_rule(root, k, ViolationRule::Standard)
    }

    pub fn with_rule(root: VertexId, k: usize, rule: ViolationRule) -> Result<Self, DetectorError> {
        if k == 0 {
            return Err(DetectorError::InvalidK { k, min: 1 });
        }
        Ok(TreeDetector {
            root,
            k,
            rule,
            state: State::Active(RootedTree::singleton(root)),
            released: Vec::new(),
            last_seen: 0,
            t_last: 0,
        })
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Time step of the last accepted edge; 0 if none.
    pub fn t_last(&self) -> u64 {
        self.t_last
    }

    pub fn tree(&self) -> Option<&RootedTree> {
        match &self.state {
            State::Active(t) => Some(t),
            State::Bad(_) => None,
        }
    }

    pub fn bad_reason(&self) -> Option<BadReason> {
        match self.state {
            State::Bad(r) => Some(r),
            State::Active(_) => None,
        }
    }

    /// Vertices currently held in memory.
    pub fn footprint(&self) -> usize {
        self.tree().map_or(0, RootedTree::len)
    }

    pub fn update(&mut self, e: &Edge, t: u64) -> Result<Update, DetectorError> {
        check_time(&mut self.last_seen, t)?;
        let State::Active(tree) = &mut self.state else {
            return Ok(Update::Ignored);
        };
        if tree.has_edge(e) {
            return Ok(Update::Ignored);
        }
        if violates(tree, e, self.rule) {
            self.go_bad(BadReason::ViolatingEdge);
            return Ok(Update::WentBad);
        }
        let (a, b) = (tree.position(e.u), tree.position(e.v));
        let (at, new) = match (a, b) {
            (Some(at), None) => (at, e.v),
            (None, Some(at)) => (at, e.u),
            _ => return Ok(Update::Ignored),
        };
        tree.attach(at, new, e.weight);
        self.t_last = t;
        if tree.len() > self.k {
            self.go_bad(BadReason::LargeCC);
            return Ok(Update::WentBad);
        }
        Ok(Update::Accepted {
            new_vertex: Some(new),
        })
    }

    fn go_bad(&mut self, reason: BadReason) {
        if let State::Active(t) = std::mem::replace(&mut self.state, State::Bad(reason)) {
            self.released = t.vertices().to_vec();
        }
    }

    /// Vertices held just before the detector went bad; drained by the
    /// caller so that any index over them can be cleaned up.
    pub fn take_released(&mut self) -> Vec<VertexId> {
        std::mem::take(&mut self.released)
    }

    pub fn finalize(&self, lambda: u64) -> Outcome {
        match &self.state {
            State::Bad(r) => Outcome::Bad(*r),
            State::Active(t) if t.len() < self.k => Outcome::Bad(BadReason::SmallCC),
            State::Active(_) if self.t_last > lambda => Outcome::Bad(BadReason::LateCompletion),
            State::Active(_) => Outcome::Good,
        }
    }

    /// Outcome before the phase test; `Good` here still needs `t_last ≤ Λ`.
    pub fn pre_outcome(&self) -> Outcome {
        self.finalize(u64::MAX)
    }
}

/// Collects the canonical extended `(d+1)`-bounded `k`-disc of `root`.
///
/// Every collected edge is charged to one of its endpoints that was already
/// in the disc, earliest discovered first; no vertex is charged more than
/// `d + 1` times, and an edge nobody can pay for is ignored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscDetector {
    root: VertexId,
    k: usize,
    d: usize,
    rule: ViolationRule,
    state: State<RootedDisc>,
    owned: Vec<u32>,
    released: Vec<VertexId>,
    last_seen: u64,
    t_last: u64,
}

impl DiscDetector {
    pub fn new(root: VertexId, k: usize, d: usize) -> Result<Self, DetectorError> {
        Self::with_rule(root, k, d, ViolationRule::Standard)
    }

    pub fn with_rule(root: VertexId, k: usize, d: usize, rule: ViolationRule) -> Result<Self, DetectorError> {
        if d == 0 {
            return Err(DetectorError::InvalidK { k: d, min: 1 });
        }
        Ok(DiscDetector {
            root,
            k,
            d,
            rule,
            state: State::Active(RootedDisc::singleton(root)),
            owned: vec![0],
            released: Vec::new(),
            last_seen: 0,
            t_last: 0,
        })
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn t_last(&self) -> u64 {
        self.t_last
    }

    pub fn disc(&self) -> Option<&RootedDisc> {
        match &self.state {
            State::Active(f) => Some(f),
            State::Bad(_) => None,
        }
    }

    pub fn footprint(&self) -> usize {
        self.disc().map_or(0, RootedDisc::len)
    }

    pub fn update(&mut self, e: &Edge, t: u64) -> Result<Update, DetectorError> {
        check_time(&mut self.last_seen, t)?;
        if self.k == 0 {
            return Ok(Update::Ignored);
        }
        let State::Active(f) = &mut self.state else {
            return Ok(Update::Ignored);
        };
        if f.has_edge(e) {
            return Ok(Update::Ignored);
        }
        if violates(f, e, self.rule) {
            if let State::Active(f) = std::mem::replace(&mut self.state, State::Bad(BadReason::ViolatingEdge)) {
                self.released = f.vertices().to_vec();
            }
            self.owned = Vec::new();
            return Ok(Update::WentBad);
        }
        let cap = self.d as u32 + 1;
        match (f.index_of(e.u), f.index_of(e.v)) {
            (None, None) => Ok(Update::Ignored),
            (Some(a), None) | (None, Some(a)) => {
                let new = if f.index_of(e.u).is_some() { e.v } else { e.u };
                if f.depth_of(a) as usize + 1 > self.k || self.owned[a] >= cap {
                    return Ok(Update::Ignored);
                }
                self.owned[a] += 1;
                f.attach(a, new);
                self.owned.push(0);
                self.t_last = t;
                Ok(Update::Accepted {
                    new_vertex: Some(new),
                })
            }
            (Some(a), Some(b)) => {
                // Only reachable with a mutated rule; a real disc never links
                // vertices two levels apart.
                if f.depth_of(a).abs_diff(f.depth_of(b)) > 1 {
                    return Ok(Update::Ignored);
                }
                let payer = [a.min(b), a.max(b)].into_iter().find(|&x| self.owned[x] < cap);
                let Some(p) = payer else {
                    return Ok(Update::Ignored);
                };
                self.owned[p] += 1;
                f.link(a, b);
                self.t_last = t;
                Ok(Update::Accepted { new_vertex: None })
            }
        }
    }

    pub fn take_released(&mut self) -> Vec<VertexId> {
        std::mem::take(&mut self.released)
    }

    pub fn finalize(&self, lambda: u64) -> Result<Outcome, DetectorError> {
        if self.k == 0 {
            return Ok(Outcome::Disc(DiscType::singleton()));
        }
        match &self.state {
            State::Bad(r) => Ok(Outcome::Bad(*r)),
            State::Active(_) if self.t_last > lambda => Ok(Outcome::Bad(BadReason::LateCompletion)),
            State::Active(f) => Ok(Outcome::Disc(disc_code(f)?)),
        }
    }

    pub fn pre_outcome(&self) -> Result<Outcome, DetectorError> {
        self.finalize(u64::MAX)
    }
}

/// Either detector kind behind one interface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Detector {
    Tree(TreeDetector),
    Disc(DiscDetector),
}

impl Detector {
    /// A tree detector when `d` is `None`, otherwise a disc detector.
    pub fn new(root: VertexId, k: usize, d: Option<usize>, rule: ViolationRule) -> Result<Self, DetectorError> {
        Ok(match d {
            None => Detector::Tree(TreeDetector::with_rule(root, k, rule)?),
            Some(d) => Detector::Disc(DiscDetector::with_rule(root, k, d, rule)?),
        })
    }

    pub fn update(&mut self, e: &Edge, t: u64) -> Result<Update, DetectorError> {
        match self {
            Detector::Tree(x) => x.update(e, t),
            Detector::Disc(x) => x.update(e, t),
        }
    }

    pub fn finalize(&self, lambda: u64) -> Result<Outcome, DetectorError> {
        match self {
            Detector::Tree(x) => Ok(x.finalize(lambda)),
            Detector::Disc(x) => x.finalize(lambda),
        }
    }

    pub fn t_last(&self) -> u64 {
        match self {
            Detector::Tree(x) => x.t_last(),
            Detector::Disc(x) => x.t_last(),
        }
    }

    pub fn footprint(&self) -> usize {
        match self {
            Detector::Tree(x) => x.footprint(),
            Detector::Disc(x) => x.footprint(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::{cano_disc, rooted_code};
    use crate::graph::Graph;

    fn v(x: u32) -> VertexId {
        VertexId(x)
    }

    #[test]
    fn new_tree_detector() {
        let d = TreeDetector::new(v(3), 2).unwrap();
        assert_eq!((d.footprint(), d.t_last()), (1, 0));
        assert!(TreeDetector::new(v(1), 1).is_ok());
        assert!(matches!(TreeDetector::new(v(1), 0), Err(DetectorError::InvalidK { .. })));
    }

    #[test]
    fn tree_update_examples() {
        let mut d = TreeDetector::new(v(1), 3).unwrap();
        d.update(&Edge::new(1, 2), 1).unwrap();
        assert_eq!(
            d.update(&Edge::new(2, 3), 5).unwrap(),
            Update::Accepted {
                new_vertex: Some(v(3))
            }
        );
        assert_eq!(d.tree().unwrap().depth(v(3)), Some(2));
        assert_eq!(d.t_last(), 5);

        let mut d = TreeDetector::new(v(1), 3).unwrap();
        d.update(&Edge::new(1, 3), 1).unwrap();
        assert_eq!(d.update(&Edge::new(1, 2), 2).unwrap(), Update::WentBad);
        assert_eq!(d.bad_reason(), Some(BadReason::ViolatingEdge));
        assert_eq!(d.update(&Edge::new(3, 4), 3).unwrap(), Update::Ignored);

        let mut d = TreeDetector::new(v(1), 3).unwrap();
        d.update(&Edge::new(1, 2), 1).unwrap();
        d.update(&Edge::new(1, 3), 2).unwrap();
        assert_eq!(d.update(&Edge::new(2, 3), 3).unwrap(), Update::Ignored);
        assert_eq!(
            d.update(&Edge::new(2, 3), 3),
            Err(DetectorError::OutOfOrderTimeStep { last: 3, got: 3 })
        );
    }

    #[test]
    fn tree_finalize_examples() {
        let d = TreeDetector::new(v(4), 1).unwrap();
        assert_eq!(d.finalize(0), Outcome::Good);

        let mut d = TreeDetector::new(v(1), 3).unwrap();
        for (t, (a, b)) in [(1, 2), (1, 3), (2, 3)].into_iter().enumerate() {
            d.update(&Edge::new(a, b), t as u64 + 1).unwrap();
        }
        assert_eq!(d.finalize(3), Outcome::Good);
        assert_eq!(d.finalize(1), Outcome::Bad(BadReason::LateCompletion));

        let mut d = TreeDetector::new(v(1), 1).unwrap();
        d.update(&Edge::new(1, 2), 1).unwrap();
        assert_eq!(d.finalize(5), Outcome::Bad(BadReason::LargeCC));

        let d = TreeDetector::new(v(1), 2).unwrap();
        assert_eq!(d.finalize(5), Outcome::Bad(BadReason::SmallCC));
    }

    #[test]
    fn disc_k_zero_is_singleton() {
        let mut d = DiscDetector::new(v(1), 0, 2).unwrap();
        d.update(&Edge::new(1, 2), 1).unwrap();
        assert_eq!(d.finalize(0).unwrap(), Outcome::Disc(DiscType::singleton()));
    }

    #[test]
    fn disc_star_replay() {
        let star = Graph::from_pairs(5, &[(1, 2), (1, 3), (1, 4), (1, 5)]).unwrap();
        let f = cano_disc(&star, v(2), 2, 2).unwrap();
        let mut d = DiscDetector::new(v(2), 2, 2).unwrap();
        for (t, e) in f.edges().iter().enumerate() {
            d.update(e, t as u64 + 1).unwrap();
        }
        assert_eq!(d.finalize(3).unwrap(), Outcome::Disc(disc_code(&f).unwrap()));
    }

    #[test]
    fn disc_triangle_late_edge_gives_path() {
        let mut d = DiscDetector::new(v(1), 1, 2).unwrap();
        for (t, (a, b)) in [(2, 3), (1, 2), (1, 3)].into_iter().enumerate() {
            d.update(&Edge::new(a, b), t as u64 + 1).unwrap();
        }
        let cherry = rooted_code(3, &[(0, 1), (0, 2)], 0).unwrap();
        assert_eq!(d.finalize(3).unwrap(), Outcome::Disc(cherry));
    }
}

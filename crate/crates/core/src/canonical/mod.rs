//! Full-knowledge constructions that the stream detectors reproduce:
//! canonical BFS trees, canonical extended discs, violating-edge predicates,
//! and canonical codes for rooted graphs.

mod code;
mod disc;
mod tree;

use thiserror::Error;

use crate::graph::{Edge, VertexId};

pub use code::{graph_code, rooted_code, DiscType, MAX_CODE_VERTICES};
pub use disc::{cano_disc, disc_code, is_violating_disc, is_violating_disc_with, project_extended_disc, RootedDisc};
pub use tree::{cbfs_edge_order, cbfs_tree, is_violating_tree, is_violating_tree_with, RootedTree};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CanonicalError {
    #[error("k must be at least 1, got {0}")]
    InvalidK(usize),
    #[error("vertex {0} is not in the graph")]
    VertexOutOfRange(VertexId),
    #[error("edge {0} is already collected")]
    EdgeAlreadyPresent(Edge),
    #[error("disc has {size} vertices, above the coding cap {cap}")]
    DiscTooLarge { size: usize, cap: usize },
    #[error("extended disc has radius {radius}, expected at most {expected}")]
    RadiusMismatch { radius: u32, expected: usize },
    #[error("malformed disc code: {0}")]
    BadCode(String),
}

/// Which depth gap makes an edge violating. `DepthOffByOne` is a deliberate
/// defect used to check that the verification suite notices it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ViolationRule {
    #[default]
    Standard,
    DepthOffByOne,
}

impl ViolationRule {
    fn depth_gap(self) -> u32 {
        match self {
            ViolationRule::Standard => 2,
            ViolationRule::DepthOffByOne => 3,
        }
    }
}

/// Read access shared by trees and discs for the violating-edge test.
pub(crate) trait RootedView {
    fn position(&self, v: VertexId) -> Option<usize>;
    fn depth_at(&self, i: usize) -> u32;
    fn max_depth(&self) -> u32;
    /// Whether the vertex at `at` discovered a child with label above `label`.
    fn has_child_above(&self, at: usize, label: VertexId) -> bool;
}

pub(crate) fn violates<T: RootedView>(t: &T, e: &Edge, rule: ViolationRule) -> bool {
    let gap = rule.depth_gap();
    match (t.position(e.u), t.position(e.v)) {
        (None, None) => false,
        (Some(a), None) => t.max_depth() - t.depth_at(a) >= gap || t.has_child_above(a, e.v),
        (None, Some(b)) => t.max_depth() - t.depth_at(b) >= gap || t.has_child_above(b, e.u),
        (Some(a), Some(b)) => {
            let (da, db) = (t.depth_at(a), t.depth_at(b));
            if da == db {
                return false;
            }
            let (shallow, deep_label, diff) = if da < db {
                (a, e.v, db - da)
            } else {
                (b, e.u, da - db)
            };
            diff >= gap || t.has_child_above(shallow, deep_label)
        }
    }
}

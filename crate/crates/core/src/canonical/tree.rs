//! Canonical BFS trees.

use std::collections::VecDeque;

use crate::graph::{Edge, Graph, VertexId};

use super::{violates, CanonicalError, RootedView, ViolationRule};

/// A rooted tree grown by attaching one new vertex per edge.
///
/// Vertices are kept in discovery order; index 0 is the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    vertices: Vec<VertexId>,
    parent: Vec<Option<usize>>,
    dep: Vec<u32>,
    edges: Vec<Edge>,
    max_dep: u32,
}

impl RootedTree {
    pub fn singleton(root: VertexId) -> Self {
        RootedTree {
            vertices: vec![root],
            parent: vec![None],
            dep: vec![0],
            edges: Vec::new(),
            max_dep: 0,
        }
    }

    pub fn root(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    /// Edges in insertion order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.position(v).is_some()
    }

    pub fn depth(&self, v: VertexId) -> Option<u32> {
        self.position(v).map(|i| self.dep[i])
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.position(v)
            .and_then(|i| self.parent[i])
            .map(|p| self.vertices[p])
    }

    pub fn max_depth(&self) -> u32 {
        self.max_dep
    }

    pub fn has_edge(&self, e: &Edge) -> bool {
        self.edges.iter().any(|x| x.same_pair(e))
    }

    /// Attaches `child` below the vertex at index `at`.
    pub(crate) fn attach(&mut self, at: usize, child: VertexId, weight: Option<u32>) {
        let d = self.dep[at] + 1;
        let mut e = Edge::new(self.vertices[at], child);
        e.weight = weight;
        self.edges.push(e);
        self.vertices.push(child);
        self.parent.push(Some(at));
        self.dep.push(d);
        self.max_dep = self.max_dep.max(d);
    }
}

impl RootedView for RootedTree {
    fn position(&self, v: VertexId) -> Option<usize> {
        self.vertices.iter().position(|&x| x == v)
    }
    fn depth_at(&self, i: usize) -> u32 {
        self.dep[i]
    }
    fn max_depth(&self) -> u32 {
        self.max_dep
    }
    fn has_child_above(&self, at: usize, label: VertexId) -> bool {
        self.parent
            .iter()
            .zip(&self.vertices)
            .any(|(p, &x)| *p == Some(at) && x > label)
    }
}

/// `CT_k(v)`: BFS from `v` with neighbors in ascending label order, stopping
/// once `k` vertices are reached.
pub fn cbfs_tree(g: &Graph, v: VertexId, k: usize) -> Result<RootedTree, CanonicalError> {
    if k == 0 {
        return Err(CanonicalError::InvalidK(k));
    }
    if !g.contains(v) {
        return Err(CanonicalError::VertexOutOfRange(v));
    }
    let mut t = RootedTree::singleton(v);
    let mut queue = VecDeque::from([0usize]);
    while let Some(at) = queue.pop_front() {
        if t.len() == k {
            break;
        }
        for &w in g.nbrs(t.vertices[at]) {
            if t.len() == k {
                break;
            }
            if !t.contains(w) {
                t.attach(at, w, None);
                queue.push_back(t.len() - 1);
            }
        }
    }
    Ok(t)
}

/// The CBFS edge ordering: the insertion order of [`cbfs_tree`].
pub fn cbfs_edge_order(t: &RootedTree) -> Vec<Edge> {
    t.edges.clone()
}

/// Violating-edge test for trees.
pub fn is_violating_tree(t: &RootedTree, e: &Edge) -> Result<bool, CanonicalError> {
    is_violating_tree_with(t, e, ViolationRule::Standard)
}

pub fn is_violating_tree_with(t: &RootedTree, e: &Edge, rule: ViolationRule) -> Result<bool, CanonicalError> {
    if t.has_edge(e) {
        return Err(CanonicalError::EdgeAlreadyPresent(*e));
    }
    Ok(violates(t, e, rule))
}

//! Canonical extended bounded discs and their projection to bounded discs.

use std::collections::VecDeque;

use crate::graph::{Edge, Graph, VertexId};

use super::code::{rooted_code, DiscType};
use super::{violates, CanonicalError, RootedView, ViolationRule};

/// A rooted graph grown one edge at a time, possibly with non-tree edges.
///
/// Vertices are kept in discovery order; index 0 is the root. Depths are
/// shortest-path distances to the root inside the disc and never change once
/// assigned, because only edges between depth-adjacent or equal-depth
/// vertices are ever added between existing vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedDisc {
    vertices: Vec<VertexId>,
    parent: Vec<Option<usize>>,
    dep: Vec<u32>,
    adj: Vec<Vec<usize>>,
    edges: Vec<Edge>,
    max_dep: u32,
}

impl RootedDisc {
    pub fn singleton(root: VertexId) -> Self {
        RootedDisc {
            vertices: vec![root],
            parent: vec![None],
            dep: vec![0],
            adj: vec![Vec::new()],
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

    /// Number of disc edges at `v`.
    pub fn degree(&self, v: VertexId) -> Option<usize> {
        self.position(v).map(|i| self.adj[i].len())
    }

    pub fn radius(&self) -> u32 {
        self.max_dep
    }

    pub fn has_edge(&self, e: &Edge) -> bool {
        match (self.position(e.u), self.position(e.v)) {
            (Some(a), Some(b)) => self.adj[a].contains(&b),
            _ => false,
        }
    }

    pub(crate) fn index_of(&self, v: VertexId) -> Option<usize> {
        self.position(v)
    }

    pub(crate) fn depth_of(&self, i: usize) -> u32 {
        self.dep[i]
    }

    /// Adds a new vertex `w` joined to the vertex at `at`.
    pub(crate) fn attach(&mut self, at: usize, w: VertexId) {
        let d = self.dep[at] + 1;
        let wi = self.vertices.len();
        self.vertices.push(w);
        self.parent.push(Some(at));
        self.dep.push(d);
        self.adj.push(vec![at]);
        self.adj[at].push(wi);
        self.edges.push(Edge::new(self.vertices[at], w));
        self.max_dep = self.max_dep.max(d);
    }

    /// Adds an edge between two present vertices whose depths differ by at
    /// most one.
    pub(crate) fn link(&mut self, a: usize, b: usize) {
        debug_assert!(self.dep[a].abs_diff(self.dep[b]) <= 1);
        self.adj[a].push(b);
        self.adj[b].push(a);
        self.edges.push(Edge::new(self.vertices[a], self.vertices[b]));
    }

    /// Builds a disc from a small rooted graph given over local indices
    /// (`root` among them), relabelling local index `i` to `labels[i]`.
    /// Vertices are inserted in BFS order from the root; vertices not
    /// reachable from the root are dropped.
    pub fn from_local(n: usize, edges: &[(usize, usize)], root: usize, labels: &[VertexId]) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for ns in &mut adj {
            ns.sort_unstable();
        }
        let mut f = RootedDisc::singleton(labels[root]);
        let mut slot = vec![usize::MAX; n];
        slot[root] = 0;
        let mut order = vec![root];
        let mut next = 0;
        while next < order.len() {
            let x = order[next];
            next += 1;
            for &y in &adj[x] {
                if slot[y] == usize::MAX {
                    f.attach(slot[x], labels[y]);
                    slot[y] = f.len() - 1;
                    order.push(y);
                } else if slot[y] < slot[x] && !f.adj[slot[x]].contains(&slot[y]) {
                    f.link(slot[x], slot[y]);
                }
            }
        }
        f
    }

    /// Shortest-path depths recomputed from scratch, in discovery order.
    pub fn bfs_depths(&self) -> Vec<u32> {
        bfs(&self.adj, 0, &vec![true; self.len()])
    }

    /// Depth of every vertex as maintained incrementally.
    pub fn depths(&self) -> &[u32] {
        &self.dep
    }

    /// Local edge list over discovery indices; the root is vertex 0.
    pub fn local_edges(&self) -> Vec<(usize, usize)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(a, ns)| ns.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
            .collect()
    }
}

impl RootedView for RootedDisc {
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

/// BFS distances from `src` over vertices with `alive[i]`; unreachable
/// vertices get `u32::MAX`.
fn bfs(adj: &[Vec<usize>], src: usize, alive: &[bool]) -> Vec<u32> {
    let mut dist = vec![u32::MAX; adj.len()];
    dist[src] = 0;
    let mut q = VecDeque::from([src]);
    while let Some(x) = q.pop_front() {
        for &y in &adj[x] {
            if alive[y] && dist[y] == u32::MAX {
                dist[y] = dist[x] + 1;
                q.push_back(y);
            }
        }
    }
    dist
}

/// Canonical extended `(d+1)`-bounded `k`-disc of `v`.
///
/// Vertices are processed in BFS order, each once. A popped vertex scans its
/// first `min(deg, d+1)` neighbors by label; an edge is added if it is new,
/// keeps the radius within `k`, and does not reach back to a vertex more than
/// one level shallower.
pub fn cano_disc(g: &Graph, v: VertexId, k: usize, d: usize) -> Result<RootedDisc, CanonicalError> {
    if !g.contains(v) {
        return Err(CanonicalError::VertexOutOfRange(v));
    }
    let mut f = RootedDisc::singleton(v);
    if k == 0 {
        return Ok(f);
    }
    let mut next = 0;
    while next < f.len() {
        let ui = next;
        next += 1;
        let u = f.vertices[ui];
        for &w in g.nbrs(u).iter().take(d + 1) {
            match f.position(w) {
                None => {
                    if (f.dep[ui] as usize) < k {
                        f.attach(ui, w);
                    }
                }
                Some(wi) => {
                    if f.adj[ui].contains(&wi) || f.dep[wi] + 1 < f.dep[ui] {
                        continue;
                    }
                    f.link(ui, wi);
                }
            }
            debug_assert_eq!(f.bfs_depths(), f.dep);
        }
    }
    Ok(f)
}

/// Canonical code of a disc, rooted at its root.
pub fn disc_code(f: &RootedDisc) -> Result<DiscType, CanonicalError> {
    rooted_code(f.len(), &f.local_edges(), 0)
}

/// Violating-edge test for discs.
pub fn is_violating_disc(f: &RootedDisc, e: &Edge) -> Result<bool, CanonicalError> {
    is_violating_disc_with(f, e, ViolationRule::Standard)
}

pub fn is_violating_disc_with(f: &RootedDisc, e: &Edge, rule: ViolationRule) -> Result<bool, CanonicalError> {
    if f.has_edge(e) {
        return Err(CanonicalError::EdgeAlreadyPresent(*e));
    }
    Ok(violates(f, e, rule))
}

/// Recovers the `d`-bounded `k`-disc type from an extended disc built with
/// radius `k + 1`: vertices of disc-degree at least `d + 1` lose all their
/// edges, and what stays within distance `k` of the root is coded.
pub fn project_extended_disc(gamma: &RootedDisc, k: usize, d: usize) -> Result<DiscType, CanonicalError> {
    if gamma.radius() as usize > k + 1 {
        return Err(CanonicalError::RadiusMismatch {
            radius: gamma.radius(),
            expected: k + 1,
        });
    }
    let high: Vec<bool> = gamma.adj.iter().map(|ns| ns.len() > d).collect();
    let pruned: Vec<Vec<usize>> = gamma
        .adj
        .iter()
        .enumerate()
        .map(|(a, ns)| {
            if high[a] {
                Vec::new()
            } else {
                ns.iter().copied().filter(|&b| !high[b]).collect()
            }
        })
        .collect();
    let dist = bfs(&pruned, 0, &vec![true; gamma.len()]);
    let keep: Vec<usize> = (0..gamma.len()).filter(|&i| dist[i] as usize <= k).collect();
    let mut local = vec![usize::MAX; gamma.len()];
    for (j, &i) in keep.iter().enumerate() {
        local[i] = j;
    }
    let mut edges = Vec::new();
    for &a in &keep {
        for &b in &pruned[a] {
            if a < b && local[b] != usize::MAX {
                edges.push((local[a], local[b]));
            }
        }
    }
    rooted_code(keep.len(), &edges, 0)
}

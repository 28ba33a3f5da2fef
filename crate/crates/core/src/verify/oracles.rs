//! Exact ground truth: component histograms, MST weight, maximum independent
//! sets and disc-type frequencies.

use std::collections::BTreeMap;

use crate::canonical::{cano_disc, disc_code, project_extended_disc, rooted_code, DiscType};
use crate::graph::{Graph, VertexId};
use crate::unionfind::UnionFind;

use super::VerifyError;

fn union_all(g: &Graph) -> UnionFind {
    let mut uf = UnionFind::new(g.n());
    for e in g.edges() {
        uf.union(e.u.index(), e.v.index());
    }
    uf
}

/// `k ↦ cc_k`, the number of components with exactly `k` vertices.
pub fn exact_cc_histogram(g: &Graph) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for s in union_all(g).component_sizes() {
        *hist.entry(s).or_insert(0) += 1;
    }
    hist
}

pub fn component_count(g: &Graph) -> usize {
    union_all(g).count()
}

/// Minimum spanning tree weight by Kruskal.
pub fn kruskal_mst(g: &Graph) -> Result<u64, VerifyError> {
    if !g.is_weighted() && g.m() > 0 {
        return Err(VerifyError::Unweighted);
    }
    let mut edges = g.edges().to_vec();
    edges.sort_by_key(|e| e.weight);
    let mut uf = UnionFind::new(g.n());
    let mut total = 0u64;
    for e in &edges {
        if uf.union(e.u.index(), e.v.index()) {
            total += e.weight.unwrap_or(0) as u64;
        }
    }
    if uf.count() > 1 {
        return Err(VerifyError::Disconnected { components: uf.count() });
    }
    Ok(total)
}

/// `c(t)` for every threshold `1..W`.
pub fn threshold_component_counts(g: &Graph, w: u32) -> BTreeMap<u32, usize> {
    (1..w).map(|t| (t, component_count(&g.threshold(t)))).collect()
}

/// `n − W + Σ_{t<W} c(t)` with exact component counts.
pub fn mst_identity(g: &Graph, w: u32) -> i64 {
    let sum: usize = threshold_component_counts(g, w).values().sum();
    g.n() as i64 - w as i64 + sum as i64
}

/// Maximum independent set with its lexicographically smallest witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MisSolution {
    pub size: usize,
    /// Ascending labels.
    pub witness: Vec<VertexId>,
}

/// Largest component `exact_mis` accepts; sets are `u128` bitmasks.
pub const MIS_HARD_CAP: usize = 128;

/// Exact maximum independent set, solved per component.
///
/// Each component must have at most `size_cap` vertices. The witness is the
/// lexicographically smallest optimal set (compared as ascending label lists).
pub fn exact_mis(g: &Graph, size_cap: usize) -> Result<MisSolution, VerifyError> {
    let cap = size_cap.min(MIS_HARD_CAP);
    let mut uf = union_all(g);
    let mut comps: BTreeMap<usize, Vec<VertexId>> = BTreeMap::new();
    for v in g.vertices() {
        comps.entry(uf.find(v.index())).or_default().push(v);
    }
    let mut size = 0;
    let mut witness = Vec::new();
    for verts in comps.values() {
        if verts.len() > cap {
            return Err(VerifyError::ComponentTooLarge {
                size: verts.len(),
                cap: size_cap,
            });
        }
        let (s, w) = component_mis(g, verts);
        size += s;
        witness.extend(w);
    }
    witness.sort();
    Ok(MisSolution { size, witness })
}

/// Whether `root` belongs to the lexicographically smallest maximum
/// independent set of its component.
pub fn mis_contains(g: &Graph, root: VertexId, size_cap: usize) -> Result<bool, VerifyError> {
    let mut uf = union_all(g);
    let r = uf.find(root.index());
    let verts: Vec<VertexId> = g.vertices().filter(|v| uf.find(v.index()) == r).collect();
    if verts.len() > size_cap.min(MIS_HARD_CAP) {
        return Err(VerifyError::ComponentTooLarge {
            size: verts.len(),
            cap: size_cap,
        });
    }
    Ok(component_mis(g, &verts).1.contains(&root))
}

/// `verts` must be sorted ascending.
fn component_mis(g: &Graph, verts: &[VertexId]) -> (usize, Vec<VertexId>) {
    let local = |x: VertexId| verts.binary_search(&x).ok();
    let adj: Vec<u128> = verts
        .iter()
        .map(|&v| {
            g.nbrs(v)
                .iter()
                .filter_map(|&w| local(w))
                .fold(0u128, |acc, j| acc | 1 << j)
        })
        .collect();
    let all = if verts.len() == 128 {
        u128::MAX
    } else {
        (1u128 << verts.len()) - 1
    };
    let target = alpha(&adj, all);
    let mut need = target;
    let mut open = all;
    let mut chosen = Vec::new();
    while open != 0 {
        let i = open.trailing_zeros() as usize;
        let rest = open & !(1u128 << i) & !adj[i];
        if need > 0 && 1 + alpha(&adj, rest) == need {
            chosen.push(verts[i]);
            need -= 1;
            open = rest;
        } else {
            open &= !(1u128 << i);
        }
    }
    (target, chosen)
}

/// Independence number of the subgraph induced by `p`, by branching on a
/// maximum-degree vertex.
fn alpha(adj: &[u128], p: u128) -> usize {
    if p == 0 {
        return 0;
    }
    let mut best_v = 0;
    let mut best_deg = 0;
    let mut rest = p;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let deg = (adj[v] & p).count_ones();
        if deg > best_deg {
            best_deg = deg;
            best_v = v;
        }
    }
    if best_deg == 0 {
        return p.count_ones() as usize;
    }
    if best_deg <= 2 {
        return paths_and_cycles(adj, p);
    }
    let v = best_v;
    let without = alpha(adj, p & !(1u128 << v));
    let with = 1 + alpha(adj, p & !(1u128 << v) & !adj[v]);
    without.max(with)
}

/// Independence number when every vertex of `p` has degree at most two:
/// a path on `l` vertices gives `⌈l/2⌉`, a cycle `⌊l/2⌋`.
fn paths_and_cycles(adj: &[u128], p: u128) -> usize {
    let mut left = p;
    let mut total = 0;
    while left != 0 {
        let s = left.trailing_zeros() as usize;
        let mut comp = 1u128 << s;
        let mut frontier = comp;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = adj[v] & p & !comp;
            comp |= new;
            frontier |= new;
        }
        left &= !comp;
        let l = comp.count_ones() as usize;
        let edges: u32 = {
            let mut c = comp;
            let mut twice = 0;
            while c != 0 {
                let v = c.trailing_zeros() as usize;
                c &= c - 1;
                twice += (adj[v] & comp).count_ones();
            }
            twice / 2
        };
        total += if edges as usize == l { l / 2 } else { l.div_ceil(2) };
    }
    total
}

/// Histogram of canonical extended `(d+1)`-bounded `k`-disc types.
pub fn exact_disc_freq(g: &Graph, k: usize, d: usize) -> Result<BTreeMap<DiscType, usize>, VerifyError> {
    let mut hist = BTreeMap::new();
    for v in g.vertices() {
        let code = disc_code(&cano_disc(g, v, k, d)?)?;
        *hist.entry(code).or_insert(0) += 1;
    }
    Ok(hist)
}

/// Histogram of `d`-bounded `k`-disc types recovered by projecting extended
/// discs of radius `k + 1`.
pub fn exact_projected_disc_freq(g: &Graph, k: usize, d: usize) -> Result<BTreeMap<DiscType, usize>, VerifyError> {
    let mut hist = BTreeMap::new();
    for v in g.vertices() {
        let code = project_extended_disc(&cano_disc(g, v, k + 1, d)?, k, d)?;
        *hist.entry(code).or_insert(0) += 1;
    }
    Ok(hist)
}

/// Type of the radius-`k` ball around `v` in `g`, computed directly.
pub fn ball_code(g: &Graph, v: VertexId, k: usize) -> Result<DiscType, VerifyError> {
    let mut dist = vec![usize::MAX; g.n()];
    dist[v.index()] = 0;
    let mut order = vec![v];
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        i += 1;
        if dist[x.index()] == k {
            continue;
        }
        for &y in g.nbrs(x) {
            if dist[y.index()] == usize::MAX {
                dist[y.index()] = dist[x.index()] + 1;
                order.push(y);
            }
        }
    }
    let local: BTreeMap<VertexId, usize> = order.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut edges = Vec::new();
    for &x in &order {
        for &y in g.nbrs(x) {
            if let Some(&j) = local.get(&y) {
                if local[&x] < j {
                    edges.push((local[&x], j));
                }
            }
        }
    }
    Ok(rooted_code(order.len(), &edges, 0)?)
}

/// `d`-bounded `k`-disc type of `v`, computed on `G_{|d}` directly.
pub fn bounded_disc_code(g: &Graph, v: VertexId, k: usize, d: usize) -> Result<DiscType, VerifyError> {
    ball_code(&g.truncate_high_degree(d), v, k)
}

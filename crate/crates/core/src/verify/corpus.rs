//! Deterministic test corpora.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::canonical::graph_code;
use crate::graph::{Edge, Graph};

/// Vertex-disjoint union; part `i` is shifted past the vertices of parts
/// `0..i`.
pub fn disjoint_union(parts: &[Graph]) -> Graph {
    let mut offset = 0u32;
    let mut edges = Vec::new();
    let mut max_w = None;
    for p in parts {
        for e in p.edges() {
            edges.push(Edge {
                u: (e.u.0 + offset).into(),
                v: (e.v.0 + offset).into(),
                weight: e.weight,
            });
        }
        max_w = max_w.max(p.max_weight());
        offset += p.n() as u32;
    }
    let n = offset as usize;
    match max_w {
        Some(w) if edges.iter().all(|e| e.weight.is_some()) => Graph::with_max_weight(n, edges, w),
        _ => Graph::new(n, edges),
    }
    .expect("parts are valid graphs")
}

pub fn path(n: usize) -> Graph {
    let pairs: Vec<(u32, u32)> = (1..n as u32).map(|i| (i, i + 1)).collect();
    Graph::from_pairs(n, &pairs).expect("path is simple")
}

pub fn cycle(n: usize) -> Graph {
    let mut pairs: Vec<(u32, u32)> = (1..n as u32).map(|i| (i, i + 1)).collect();
    pairs.push((n as u32, 1));
    Graph::from_pairs(n, &pairs).expect("cycle is simple for n ≥ 3")
}

pub fn complete(n: usize) -> Graph {
    let mut pairs = Vec::new();
    for a in 1..=n as u32 {
        for b in a + 1..=n as u32 {
            pairs.push((a, b));
        }
    }
    Graph::from_pairs(n, &pairs).expect("complete graph is simple")
}

fn copies(g: &Graph, count: usize) -> Vec<Graph> {
    vec![g.clone(); count]
}

/// `triangles` triangles, `edges` single edges and `singletons` isolated
/// vertices, in that label order.
pub fn cc_corpus(triangles: usize, edges: usize, singletons: usize) -> Graph {
    let mut parts = copies(&complete(3), triangles);
    parts.extend(copies(&path(2), edges));
    parts.extend(copies(&path(1), singletons));
    disjoint_union(&parts)
}

/// Path on `n` vertices where edge `(i, i+1)` weighs 2 when `i ≡ 1 (mod 4)`
/// and 1 otherwise.
pub fn mst_path_corpus(n: usize) -> Graph {
    let triples: Vec<(u32, u32, u32)> = (1..n as u32)
        .map(|i| (i, i + 1, if i % 4 == 1 { 2 } else { 1 }))
        .collect();
    Graph::with_max_weight(
        n,
        triples.iter().map(|&(a, b, w)| Edge::weighted(a, b, w)),
        2,
    )
    .expect("path corpus is valid")
}

/// Disjoint triangles followed by disjoint three-vertex paths.
pub fn triangles_and_paths(triangles: usize, paths: usize) -> Graph {
    let mut parts = copies(&complete(3), triangles);
    parts.extend(copies(&path(3), paths));
    disjoint_union(&parts)
}

/// Uniform graph with `n` vertices and `m` edges.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, m: usize) -> Graph {
    let mut pairs = Vec::new();
    for a in 1..=n as u32 {
        for b in a + 1..=n as u32 {
            pairs.push((a, b));
        }
    }
    pairs.shuffle(rng);
    pairs.truncate(m);
    Graph::from_pairs(n, &pairs).expect("distinct pairs")
}

/// Random connected graph on `n` vertices: a random recursive tree plus each
/// remaining pair with probability `p`.
pub fn random_connected<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut pairs = BTreeSet::new();
    let mut order: Vec<u32> = (1..=n as u32).collect();
    order.shuffle(rng);
    for i in 1..n {
        let j = rng.gen_range(0..i);
        let (a, b) = (order[i].min(order[j]), order[i].max(order[j]));
        pairs.insert((a, b));
    }
    for a in 1..=n as u32 {
        for b in a + 1..=n as u32 {
            if rng.gen_bool(p) {
                pairs.insert((a, b));
            }
        }
    }
    let pairs: Vec<_> = pairs.into_iter().collect();
    Graph::from_pairs(n, &pairs).expect("distinct pairs")
}

/// Random connected graph with weights drawn uniformly from `1..=w`.
pub fn random_connected_weighted<R: Rng>(rng: &mut R, n: usize, p: f64, w: u32) -> Graph {
    let g = random_connected(rng, n, p);
    let edges: Vec<Edge> = g
        .edges()
        .iter()
        .map(|e| Edge::weighted(e.u, e.v, rng.gen_range(1..=w)))
        .collect();
    Graph::with_max_weight(n, edges, w).expect("weights within bound")
}

/// Disjoint random connected pieces of `1..=max_size` vertices, `n` vertices
/// in total.
pub fn random_small_components<R: Rng>(rng: &mut R, n: usize, max_size: usize, p: f64) -> Graph {
    let mut parts = Vec::new();
    let mut left = n;
    while left > 0 {
        let size = rng.gen_range(1..=max_size.min(left));
        parts.push(random_connected(rng, size, p));
        left -= size;
    }
    disjoint_union(&parts)
}

/// One representative per isomorphism class of graphs with `1..=max_n`
/// vertices and at most `max_m` edges. Isolated vertices count.
pub fn small_graph_classes(max_n: usize, max_m: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let mut pairs = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                pairs.push((a, b));
            }
        }
        let mut seen = BTreeSet::new();
        for mask in 0u32..1 << pairs.len() {
            if mask.count_ones() as usize > max_m {
                continue;
            }
            let chosen: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            if seen.insert(graph_code(n, &chosen).expect("tiny graph")) {
                let labelled: Vec<(u32, u32)> =
                    chosen.iter().map(|&(a, b)| (a as u32 + 1, b as u32 + 1)).collect();
                out.push(Graph::from_pairs(n, &labelled).expect("simple"));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{exact_cc_histogram, kruskal_mst};

    #[test]
    fn class_counts() {
        // Graphs on 1..=4 vertices: 1 + 2 + 4 + 11.
        assert_eq!(small_graph_classes(4, 6).len(), 18);
        // Graphs on 5 vertices with at most 6 edges: 1+1+2+4+6+6+6.
        assert_eq!(small_graph_classes(5, 6).len(), 18 + 26);
    }

    #[test]
    fn fixed_corpora() {
        let g = cc_corpus(50, 30, 20);
        assert_eq!(g.n(), 230);
        assert_eq!(exact_cc_histogram(&g).values().sum::<usize>(), 100);
        let p = mst_path_corpus(200);
        assert_eq!(p.edges().iter().filter(|e| e.weight == Some(2)).count(), 50);
        assert_eq!(kruskal_mst(&p).unwrap(), 249);
        assert_eq!(triangles_and_paths(40, 40).n(), 240);
    }
}

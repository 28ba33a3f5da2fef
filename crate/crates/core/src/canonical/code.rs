//! Canonical codes for small graphs, optionally with a distinguished root.
//!
//! Individualization-refinement: equitable partition refinement, branching on
//! the first non-singleton cell, automorphism pruning from equal leaves. The
//! code is the lexicographically largest adjacency bit string over all leaves.

use std::fmt;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use super::CanonicalError;

/// Largest graph the coder accepts; adjacency rows are `u128` bitsets.
pub const MAX_CODE_VERTICES: usize = 128;

/// Isomorphism class of a rooted graph (root-preserving), or of an unrooted
/// graph when produced by [`graph_code`].
///
/// `code` is two big-endian bytes of vertex count followed by the packed
/// upper triangle of the canonical adjacency matrix. In the rooted case the
/// root sits at canonical position 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiscType {
    code: Vec<u8>,
    num_edges: u32,
}

impl DiscType {
    /// The one-vertex rooted graph.
    pub fn singleton() -> Self {
        DiscType {
            code: vec![0, 1],
            num_edges: 0,
        }
    }

    pub fn code(&self) -> &[u8] {
        &self.code
    }

    pub fn num_edges(&self) -> u32 {
        self.num_edges
    }

    pub fn num_vertices(&self) -> usize {
        u16::from_be_bytes([self.code[0], self.code[1]]) as usize
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.code)
    }

    pub fn from_hex(s: &str) -> Result<Self, CanonicalError> {
        let code = hex::decode(s).map_err(|e| CanonicalError::BadCode(e.to_string()))?;
        Self::from_bytes(code)
    }

    pub fn from_bytes(code: Vec<u8>) -> Result<Self, CanonicalError> {
        if code.len() < 2 {
            return Err(CanonicalError::BadCode("code shorter than header".into()));
        }
        let n = u16::from_be_bytes([code[0], code[1]]) as usize;
        let bits = n * n.saturating_sub(1) / 2;
        if code.len() != 2 + bits.div_ceil(8) {
            return Err(CanonicalError::BadCode(format!(
                "{} bytes for {n} vertices",
                code.len()
            )));
        }
        let num_edges = code[2..].iter().map(|b| b.count_ones()).sum();
        Ok(DiscType { code, num_edges })
    }

    /// Vertex count and edge list of the canonical representative; the root
    /// (if any) is vertex 0.
    pub fn decode(&self) -> (usize, Vec<(usize, usize)>) {
        let n = self.num_vertices();
        let mut edges = Vec::new();
        let mut bit = 0usize;
        for i in 0..n {
            for j in i + 1..n {
                if self.code[2 + bit / 8] & (0x80 >> (bit % 8)) != 0 {
                    edges.push((i, j));
                }
                bit += 1;
            }
        }
        (n, edges)
    }
}

/// Serialized as its hex string, so it can key JSON objects.
impl Serialize for DiscType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for DiscType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        DiscType::from_hex(&s).map_err(de::Error::custom)
    }
}

impl fmt::Display for DiscType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// Canonical code of `(n, edges)` with vertex `root` fixed.
pub fn rooted_code(n: usize, edges: &[(usize, usize)], root: usize) -> Result<DiscType, CanonicalError> {
    canonical(n, edges, Some(root))
}

/// Canonical code of `(n, edges)` up to arbitrary isomorphism.
pub fn graph_code(n: usize, edges: &[(usize, usize)]) -> Result<DiscType, CanonicalError> {
    canonical(n, edges, None)
}

fn canonical(n: usize, edges: &[(usize, usize)], root: Option<usize>) -> Result<DiscType, CanonicalError> {
    if n > MAX_CODE_VERTICES {
        return Err(CanonicalError::DiscTooLarge {
            size: n,
            cap: MAX_CODE_VERTICES,
        });
    }
    if n == 0 {
        return Ok(DiscType {
            code: vec![0, 0],
            num_edges: 0,
        });
    }
    let mut adj = vec![0u128; n];
    for &(a, b) in edges {
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    let all: u128 = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    let cells = match root {
        Some(r) if n > 1 => vec![1u128 << r, all & !(1u128 << r)],
        _ => vec![all],
    };
    let mut search = Search {
        n,
        adj: &adj,
        best: None,
        first: None,
        autos: Vec::new(),
    };
    search.descend(cells, &mut Vec::new());
    let (code, _) = search.best.expect("search visits at least one leaf");
    let mut out = Vec::with_capacity(2 + code.len());
    out.extend_from_slice(&(n as u16).to_be_bytes());
    out.extend_from_slice(&code);
    Ok(DiscType {
        code: out,
        num_edges: edges.len() as u32,
    })
}

struct Search<'a> {
    n: usize,
    adj: &'a [u128],
    best: Option<(Vec<u8>, Vec<usize>)>,
    first: Option<(Vec<u8>, Vec<usize>)>,
    autos: Vec<Vec<usize>>,
}

fn members(mut set: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if set == 0 {
            None
        } else {
            let v = set.trailing_zeros() as usize;
            set &= set - 1;
            Some(v)
        }
    })
}

impl Search<'_> {
    fn refine(&self, cells: &mut Vec<u128>) {
        loop {
            let mut changed = false;
            let mut si = 0;
            while si < cells.len() {
                let splitter = cells[si];
                let mut next = Vec::with_capacity(cells.len());
                for &c in cells.iter() {
                    if c.count_ones() == 1 {
                        next.push(c);
                        continue;
                    }
                    let mut groups: Vec<(u32, u128)> = Vec::new();
                    for v in members(c) {
                        let cnt = (self.adj[v] & splitter).count_ones();
                        match groups.iter_mut().find(|g| g.0 == cnt) {
                            Some(g) => g.1 |= 1 << v,
                            None => groups.push((cnt, 1 << v)),
                        }
                    }
                    if groups.len() > 1 {
                        changed = true;
                        groups.sort_unstable_by_key(|g| g.0);
                    }
                    next.extend(groups.into_iter().map(|g| g.1));
                }
                *cells = next;
                si += 1;
            }
            if !changed {
                break;
            }
        }
    }

    fn leaf_code(&self, order: &[usize]) -> Vec<u8> {
        let n = self.n;
        let mut out = vec![0u8; (n * (n - 1) / 2).div_ceil(8)];
        let mut bit = 0usize;
        for i in 0..n {
            for j in i + 1..n {
                if self.adj[order[i]] >> order[j] & 1 == 1 {
                    out[bit / 8] |= 0x80 >> (bit % 8);
                }
                bit += 1;
            }
        }
        out
    }

    fn leaf(&mut self, cells: &[u128]) {
        let order: Vec<usize> = cells.iter().map(|c| c.trailing_zeros() as usize).collect();
        let code = self.leaf_code(&order);
        for reference in [&self.first, &self.best].into_iter().flatten() {
            if reference.0 == code {
                let mut g = vec![0usize; self.n];
                for (pos, &v) in reference.1.iter().enumerate() {
                    g[v] = order[pos];
                }
                if g.iter().enumerate().any(|(i, &x)| i != x) {
                    self.autos.push(g);
                }
                break;
            }
        }
        if self.first.is_none() {
            self.first = Some((code.clone(), order.clone()));
        }
        if self.best.as_ref().is_none_or(|b| code > b.0) {
            self.best = Some((code, order));
        }
    }

    fn same_orbit(&self, prefix: &[usize], a: usize, b: usize) -> bool {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for g in &self.autos {
            if prefix.iter().all(|&x| g[x] == x) {
                for (x, &y) in g.iter().enumerate() {
                    let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                    parent[rx] = ry;
                }
            }
        }
        find(&mut parent, a) == find(&mut parent, b)
    }

    fn descend(&mut self, mut cells: Vec<u128>, prefix: &mut Vec<usize>) {
        self.refine(&mut cells);
        let Some(target) = cells.iter().position(|c| c.count_ones() > 1) else {
            self.leaf(&cells);
            return;
        };
        let cell = cells[target];
        let mut tried: Vec<usize> = Vec::new();
        for v in members(cell) {
            if tried.iter().any(|&t| self.same_orbit(prefix, t, v)) {
                continue;
            }
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..target]);
            child.push(1u128 << v);
            child.push(cell & !(1u128 << v));
            child.extend_from_slice(&cells[target + 1..]);
            prefix.push(v);
            self.descend(child, prefix);
            prefix.pop();
            tried.push(v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rooted_path_relabeling() {
        // a-b-c rooted at a vs 7-4-9 rooted at 7 (relabelled to 0..3)
        let a = rooted_code(3, &[(0, 1), (1, 2)], 0).unwrap();
        let b = rooted_code(3, &[(2, 1), (1, 0)], 2).unwrap();
        assert_eq!(a, b);
        let mid = rooted_code(3, &[(0, 1), (1, 2)], 1).unwrap();
        assert_ne!(a, mid);
        assert_eq!(graph_code(3, &[(0, 1), (1, 2)]).unwrap(), graph_code(3, &[(0, 2), (2, 1)]).unwrap());
    }

    #[test]
    fn decode_round_trip() {
        let t = rooted_code(4, &[(0, 1), (0, 2), (2, 3)], 3).unwrap();
        let (n, edges) = t.decode();
        assert_eq!(n, 4);
        assert_eq!(rooted_code(n, &edges, 0).unwrap(), t);
        assert_eq!(DiscType::from_hex(&t.to_hex()).unwrap(), t);
        assert_eq!(t.num_edges(), 3);
    }

    #[test]
    fn singleton_matches_search() {
        assert_eq!(rooted_code(1, &[], 0).unwrap(), DiscType::singleton());
    }

    #[test]
    fn too_large_rejected() {
        assert!(matches!(
            graph_code(MAX_CODE_VERTICES + 1, &[]),
            Err(CanonicalError::DiscTooLarge { .. })
        ));
    }

    #[test]
    fn petersen_vs_relabelled() {
        let outer: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        let spokes: Vec<(usize, usize)> = (0..5).map(|i| (i, i + 5)).collect();
        let inner: Vec<(usize, usize)> = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5)).collect();
        let edges: Vec<_> = outer.iter().chain(&spokes).chain(&inner).copied().collect();
        let perm = [3, 8, 1, 6, 0, 9, 2, 7, 5, 4];
        let moved: Vec<_> = edges.iter().map(|&(a, b)| (perm[a], perm[b])).collect();
        assert_eq!(graph_code(10, &edges).unwrap(), graph_code(10, &moved).unwrap());
        assert_eq!(rooted_code(10, &edges, 0).unwrap(), rooted_code(10, &moved, perm[7]).unwrap());
    }
}

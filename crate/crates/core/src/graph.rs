//! Static simple undirected graphs over the vertex set `1..=n`.

use std::collections::HashSet;
use std::fmt;
use std::io::BufRead;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Vertex label in `1..=n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn label(self) -> u32 {
        self.0
    }

    pub(crate) fn index(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for VertexId {
    fn from(v: u32) -> Self {
        VertexId(v)
    }
}

/// Undirected edge, stored with the smaller label first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub weight: Option<u32>,
}

impl Edge {
    pub fn new(a: impl Into<VertexId>, b: impl Into<VertexId>) -> Self {
        let (a, b) = (a.into(), b.into());
        let (u, v) = if a <= b { (a, b) } else { (b, a) };
        Edge { u, v, weight: None }
    }

    pub fn weighted(a: impl Into<VertexId>, b: impl Into<VertexId>, w: u32) -> Self {
        Edge {
            weight: Some(w),
            ..Edge::new(a, b)
        }
    }

    pub fn endpoints(&self) -> (VertexId, VertexId) {
        (self.u, self.v)
    }

    /// Same endpoints, ignoring weight.
    pub fn same_pair(&self, other: &Edge) -> bool {
        self.u == other.u && self.v == other.v
    }

    pub fn touches(&self, x: VertexId) -> bool {
        self.u == x || self.v == x
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.weight {
            Some(w) => write!(f, "({},{}):{}", self.u, self.v, w),
            None => write!(f, "({},{})", self.u, self.v),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: duplicate edge ({u},{v})")]
    DuplicateEdge { u: u32, v: u32, line: usize },
    #[error("line {line}: self-loop at vertex {v}")]
    SelfLoop { v: u32, line: usize },
    #[error("line {line}: vertex label {label} outside 1..={n}")]
    LabelOutOfRange { label: u64, n: usize, line: usize },
    #[error("line {line}: weight {weight} outside 1..={max}")]
    BadWeight { weight: u64, max: u32, line: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("i/o error: {0}")]
    Io(String),
}

/// Knobs for [`load_edge_list`].
#[derive(Clone, Copy, Debug, Default)]
pub struct LoadOptions {
    /// Vertex count; overrides an `n=` header and the maximum label seen.
    pub n: Option<usize>,
    /// Maximum admissible weight `W`; inferred from the data when absent.
    pub max_weight: Option<u32>,
}

/// Immutable simple graph. Adjacency lists are kept sorted by label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<VertexId>>,
    max_weight: Option<u32>,
}

impl Graph {
    /// Validates and builds a graph. Edges must be either all weighted or all
    /// unweighted; `W` is inferred as the largest weight.
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self, GraphError> {
        Self::build(n, edges, None)
    }

    /// Like [`Graph::new`] but with an explicit weight bound `W`.
    pub fn with_max_weight(
        n: usize,
        edges: impl IntoIterator<Item = Edge>,
        max_weight: u32,
    ) -> Result<Self, GraphError> {
        Self::build(n, edges, Some(max_weight))
    }

    pub fn from_pairs(n: usize, pairs: &[(u32, u32)]) -> Result<Self, GraphError> {
        Self::new(n, pairs.iter().map(|&(a, b)| Edge::new(a, b)))
    }

    pub fn from_weighted(n: usize, triples: &[(u32, u32, u32)]) -> Result<Self, GraphError> {
        Self::new(n, triples.iter().map(|&(a, b, w)| Edge::weighted(a, b, w)))
    }

    fn build(
        n: usize,
        edges: impl IntoIterator<Item = Edge>,
        max_weight: Option<u32>,
    ) -> Result<Self, GraphError> {
        let mut seen = HashSet::new();
        let mut list = Vec::new();
        let mut weighted = None;
        let mut inferred = 0u32;
        for (i, e) in edges.into_iter().enumerate() {
            let line = i + 1;
            let e = Edge::new(e.u, e.v).with_weight(e.weight);
            for x in [e.u, e.v] {
                if x.0 == 0 || x.0 as usize > n {
                    return Err(GraphError::LabelOutOfRange {
                        label: x.0 as u64,
                        n,
                        line,
                    });
                }
            }
            if e.u == e.v {
                return Err(GraphError::SelfLoop { v: e.u.0, line });
            }
            match (weighted, e.weight) {
                (None, w) => weighted = Some(w.is_some()),
                (Some(true), None) | (Some(false), Some(_)) => {
                    return Err(GraphError::Parse {
                        line,
                        msg: "mixed weighted and unweighted edges".into(),
                    })
                }
                _ => {}
            }
            if let Some(w) = e.weight {
                let bound = max_weight.unwrap_or(u32::MAX);
                if w == 0 || w > bound {
                    return Err(GraphError::BadWeight {
                        weight: w as u64,
                        max: bound,
                        line,
                    });
                }
                inferred = inferred.max(w);
            }
            if !seen.insert((e.u, e.v)) {
                return Err(GraphError::DuplicateEdge {
                    u: e.u.0,
                    v: e.v.0,
                    line,
                });
            }
            list.push(e);
        }
        list.sort();
        let mut adj = vec![Vec::new(); n];
        for e in &list {
            adj[e.u.index()].push(e.v);
            adj[e.v.index()].push(e.u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        let max_weight = match weighted {
            Some(true) => Some(max_weight.unwrap_or(inferred)),
            Some(false) => None,
            None => max_weight,
        };
        Ok(Graph {
            n,
            edges: list,
            adj,
            max_weight,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical order (sorted by endpoints).
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_weighted(&self) -> bool {
        self.edges.first().is_some_and(|e| e.weight.is_some())
            || (self.edges.is_empty() && self.max_weight.is_some())
    }

    /// The weight bound `W`, if the graph is weighted.
    pub fn max_weight(&self) -> Option<u32> {
        self.max_weight
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (1..=self.n as u32).map(VertexId)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v.0 >= 1 && v.0 as usize <= self.n
    }

    /// Neighbors of `v` in strictly ascending label order.
    pub fn neighbors_sorted(&self, v: VertexId) -> Result<&[VertexId], GraphError> {
        if !self.contains(v) {
            return Err(GraphError::LabelOutOfRange {
                label: v.0 as u64,
                n: self.n,
                line: 0,
            });
        }
        Ok(&self.adj[v.index()])
    }

    /// Unchecked variant for internal hot loops.
    pub(crate) fn nbrs(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v.index()]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v.index()].len()
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.contains(a) && self.adj[a.index()].binary_search(&b).is_ok()
    }

    /// `G_{|d}`: drops every edge with an endpoint of degree above `d`.
    pub fn truncate_high_degree(&self, d: usize) -> Graph {
        let kept = self
            .edges
            .iter()
            .filter(|e| self.degree(e.u) <= d && self.degree(e.v) <= d)
            .copied()
            .collect::<Vec<_>>();
        Self::build(self.n, kept, self.max_weight).expect("subgraph of a valid graph is valid")
    }

    /// Threshold graph `G^(t)`: edges of weight at most `t`.
    pub fn threshold(&self, t: u32) -> Graph {
        let kept = self
            .edges
            .iter()
            .filter(|e| e.weight.is_some_and(|w| w <= t))
            .copied()
            .collect::<Vec<_>>();
        Self::build(self.n, kept, self.max_weight).expect("subgraph of a valid graph is valid")
    }

    /// Canonical text form: an `n=` header, then one edge per line with the
    /// smaller label first, sorted by `(u, v)`.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for e in &self.edges {
            match e.weight {
                Some(w) => out.push_str(&format!("{} {} {}\n", e.u, e.v, w)),
                None => out.push_str(&format!("{} {}\n", e.u, e.v)),
            }
        }
        out
    }
}

impl Edge {
    fn with_weight(mut self, w: Option<u32>) -> Self {
        self.weight = w;
        self
    }
}

/// Parses an edge-list document into a validated [`Graph`].
///
/// Lines are `u v` or `u v w`; blank lines and lines starting with `#` are
/// skipped; the first content line may be an `n=<int>` header.
pub fn load_edge_list<R: BufRead>(reader: R, opts: &LoadOptions) -> Result<Graph, GraphError> {
    let mut lines = EdgeLines::new(reader, opts.n, opts.max_weight);
    let mut edges = Vec::new();
    let mut line_of = Vec::new();
    for item in lines.by_ref() {
        let (line, e) = item?;
        edges.push(e);
        line_of.push(line);
    }
    let n = opts
        .n
        .or(lines.header_n())
        .unwrap_or_else(|| edges.iter().map(|e| e.v.0 as usize).max().unwrap_or(0));
    let built = match opts.max_weight {
        Some(w) => Graph::with_max_weight(n, edges, w),
        None => Graph::new(n, edges),
    };
    // Graph::build numbers edges by position; report source lines instead.
    built.map_err(|err| remap_line(err, &line_of))
}

fn remap_line(err: GraphError, line_of: &[usize]) -> GraphError {
    let fix = |l: usize| line_of.get(l.wrapping_sub(1)).copied().unwrap_or(l);
    match err {
        GraphError::DuplicateEdge { u, v, line } => GraphError::DuplicateEdge { u, v, line: fix(line) },
        GraphError::SelfLoop { v, line } => GraphError::SelfLoop { v, line: fix(line) },
        GraphError::LabelOutOfRange { label, n, line } => GraphError::LabelOutOfRange {
            label,
            n,
            line: fix(line),
        },
        GraphError::BadWeight { weight, max, line } => GraphError::BadWeight {
            weight,
            max,
            line: fix(line),
        },
        GraphError::Parse { line, msg } => GraphError::Parse { line: fix(line), msg },
        other => other,
    }
}

/// Lazy line-by-line edge reader.
///
/// Checks syntax, self-loops, label range (once `n` is known) and weight
/// range, but not duplicates, so it runs in constant memory.
pub struct EdgeLines<R> {
    reader: R,
    n: Option<usize>,
    max_weight: Option<u32>,
    header_n: Option<usize>,
    line: usize,
    seen_content: bool,
    weighted: Option<bool>,
    buf: String,
}

impl<R: BufRead> EdgeLines<R> {
    pub fn new(reader: R, n: Option<usize>, max_weight: Option<u32>) -> Self {
        EdgeLines {
            reader,
            n,
            max_weight,
            header_n: None,
            line: 0,
            seen_content: false,
            weighted: None,
            buf: String::new(),
        }
    }

    /// The `n=` header value, once it has been read.
    pub fn header_n(&self) -> Option<usize> {
        self.header_n
    }

    fn effective_n(&self) -> Option<usize> {
        self.n.or(self.header_n)
    }

    /// Reads up to and including the `n=` header if one is present, without
    /// consuming the first edge.
    pub fn peek_header(&mut self) -> Result<Option<usize>, GraphError> {
        loop {
            if self.seen_content {
                return Ok(self.header_n);
            }
            let len = self.reader.fill_buf().map_err(|e| GraphError::Io(e.to_string()))?.len();
            if len == 0 {
                return Ok(self.header_n);
            }
            let mut probe = String::new();
            // Only consume comment/blank/header lines here.
            {
                let bytes = self.reader.fill_buf().map_err(|e| GraphError::Io(e.to_string()))?;
                let end = bytes.iter().position(|&b| b == b'\n').map(|p| p + 1);
                match end {
                    Some(end) => probe.push_str(&String::from_utf8_lossy(&bytes[..end])),
                    None => return Ok(self.header_n),
                }
            }
            let t = probe.trim();
            if t.is_empty() || t.starts_with('#') {
                self.reader.consume(probe.len());
                self.line += 1;
                continue;
            }
            if let Some(rest) = t.strip_prefix("n=") {
                self.reader.consume(probe.len());
                self.line += 1;
                self.seen_content = true;
                self.header_n = Some(rest.trim().parse().map_err(|_| GraphError::Parse {
                    line: self.line,
                    msg: format!("bad header {t:?}"),
                })?);
                return Ok(self.header_n);
            }
            return Ok(self.header_n);
        }
    }

    fn parse_line(&mut self, text: &str) -> Result<Option<Edge>, GraphError> {
        let line = self.line;
        let t = text.trim();
        if t.is_empty() || t.starts_with('#') {
            return Ok(None);
        }
        if !self.seen_content {
            self.seen_content = true;
            if let Some(rest) = t.strip_prefix("n=") {
                self.header_n = Some(rest.trim().parse().map_err(|_| GraphError::Parse {
                    line,
                    msg: format!("bad header {t:?}"),
                })?);
                return Ok(None);
            }
        }
        let fields: Vec<&str> = t.split_whitespace().collect();
        if fields.len() != 2 && fields.len() != 3 {
            return Err(GraphError::Parse {
                line,
                msg: format!("expected `u v` or `u v w`, got {t:?}"),
            });
        }
        let num = |s: &str| -> Result<u64, GraphError> {
            s.parse::<u64>().map_err(|_| GraphError::Parse {
                line,
                msg: format!("not a non-negative integer: {s:?}"),
            })
        };
        let (a, b) = (num(fields[0])?, num(fields[1])?);
        let bound = self.effective_n().map(|n| n as u64).unwrap_or(u32::MAX as u64);
        for x in [a, b] {
            if x == 0 || x > bound {
                return Err(GraphError::LabelOutOfRange {
                    label: x,
                    n: self.effective_n().unwrap_or(u32::MAX as usize),
                    line,
                });
            }
        }
        if a == b {
            return Err(GraphError::SelfLoop { v: a as u32, line });
        }
        let is_weighted = fields.len() == 3;
        match self.weighted {
            None => self.weighted = Some(is_weighted),
            Some(w) if w != is_weighted => {
                return Err(GraphError::Parse {
                    line,
                    msg: "mixed weighted and unweighted lines".into(),
                })
            }
            _ => {}
        }
        let mut e = Edge::new(a as u32, b as u32);
        if is_weighted {
            let w = num(fields[2])?;
            let max = self.max_weight.unwrap_or(u32::MAX);
            if w == 0 || w > max as u64 {
                return Err(GraphError::BadWeight { weight: w, max, line });
            }
            e.weight = Some(w as u32);
        }
        Ok(Some(e))
    }
}

impl<R: BufRead> Iterator for EdgeLines<R> {
    type Item = Result<(usize, Edge), GraphError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            self.buf.clear();
            match self.reader.read_line(&mut self.buf) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(e) => return Some(Err(GraphError::Io(e.to_string()))),
            }
            self.line += 1;
            let text = std::mem::take(&mut self.buf);
            let parsed = self.parse_line(&text);
            self.buf = text;
            match parsed {
                Ok(Some(e)) => return Some(Ok((self.line, e))),
                Ok(None) => continue,
                Err(err) => return Some(Err(err)),
            }
        }
    }
}

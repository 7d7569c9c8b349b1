//! Simple undirected graphs with dense vertex and edge handles.
//!
//! Edges are stored in canonical order: every edge is kept as `(u, v)` with
//! `u < v`, and the edge list is sorted lexicographically, so edge IDs are a
//! deterministic function of the edge set.

use std::collections::VecDeque;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(u32),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(u32, u32),
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: u32, n: usize },
    #[error("invalid generator parameters: {0}")]
    Parameter(String),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

/// An immutable simple graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
    adjacency: Vec<Vec<(VertexId, EdgeId)>>,
    max_degree: usize,
}

impl Graph {
    /// Builds a graph from an edge list. Endpoint order within a pair does not
    /// matter; self-loops and duplicates are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut list = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            for x in [a, b] {
                if x as usize >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        Ok(Self::from_sorted_unique(n, list))
    }

    fn from_sorted_unique(n: usize, list: Vec<(u32, u32)>) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        let edges: Vec<_> = list
            .into_iter()
            .enumerate()
            .map(|(i, (u, v))| {
                let e = EdgeId(i as u32);
                adjacency[u as usize].push((VertexId(v), e));
                adjacency[v as usize].push((VertexId(u), e));
                (VertexId(u), VertexId(v))
            })
            .collect();
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let max_degree = adjacency.iter().map(Vec::len).max().unwrap_or(0);
        Graph {
            n,
            edges,
            adjacency,
            max_degree,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted_unique(n, Vec::new())
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v.index()].len()
    }

    #[inline]
    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e.index()]
    }

    /// The endpoint of `e` that is not `v`.
    #[inline]
    pub fn other(&self, e: EdgeId, v: VertexId) -> VertexId {
        let (a, b) = self.edges[e.index()];
        if a == v {
            b
        } else {
            debug_assert_eq!(b, v, "{e} is not incident to {v}");
            a
        }
    }

    /// Incident `(neighbor, edge)` pairs, sorted by neighbor.
    #[inline]
    pub fn incident(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adjacency[v.index()]
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.n as u32).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        let list = &self.adjacency[u.index()];
        list.binary_search_by_key(&v, |&(w, _)| w).ok().map(|i| list[i].1)
    }

    /// Subgraph on the same vertex set keeping only `keep` edges. Returns the
    /// subgraph and, for each of its edges, the originating edge ID.
    pub fn edge_subgraph(&self, keep: &[EdgeId]) -> (Graph, Vec<EdgeId>) {
        let mut kept: Vec<EdgeId> = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        let list = kept
            .iter()
            .map(|&e| {
                let (u, v) = self.endpoints(e);
                (u.0, v.0)
            })
            .collect();
        // Canonical order of the parent carries over, so sub edge i maps to kept[i].
        (Self::from_sorted_unique(self.n, list), kept)
    }

    /// Proper 2-coloring of the vertices (`false`/`true` sides), or `None`
    /// when the graph has an odd cycle.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut side: Vec<Option<bool>> = vec![None; self.n];
        let mut queue = VecDeque::new();
        for s in 0..self.n {
            if side[s].is_some() {
                continue;
            }
            side[s] = Some(false);
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                let su = side[u].unwrap();
                for &(w, _) in &self.adjacency[u] {
                    match side[w.index()] {
                        Some(sw) if sw == su => return None,
                        Some(_) => {}
                        None => {
                            side[w.index()] = Some(!su);
                            queue.push_back(w.index());
                        }
                    }
                }
            }
        }
        Some(side.into_iter().map(|s| s.unwrap_or(false)).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    /// Edge-list text: a header `n m`, then one `u v` line per edge with
    /// `u < v`, in edge-ID order.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            out.push_str(&format!("{} {}\n", u.0, v.0));
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(GraphError::Format {
            line: 1,
            message: "missing header line".into(),
        })?;
        let (n, m) = parse_pair::<usize>(hline, header)?;
        let mut list = Vec::with_capacity(m);
        let mut seen = std::collections::HashSet::with_capacity(m);
        for (line, body) in lines.by_ref() {
            let (u, v) = parse_pair::<u32>(line, body)?;
            let err = |message: String| GraphError::Format { line, message };
            if u == v {
                return Err(err(format!("self-loop at vertex {u}")));
            }
            if u as usize >= n || v as usize >= n {
                return Err(err(format!("vertex out of range for n = {n}")));
            }
            if u > v {
                return Err(err(format!("expected u < v, got {u} {v}")));
            }
            if !seen.insert((u, v)) {
                return Err(err(format!("duplicate edge {u} {v}")));
            }
            list.push((u, v));
        }
        if list.len() != m {
            return Err(GraphError::Format {
                line: hline,
                message: format!("header declares {m} edges, found {}", list.len()),
            });
        }
        list.sort_unstable();
        Ok(Self::from_sorted_unique(n, list))
    }
}

fn parse_pair<T: std::str::FromStr>(line: usize, body: &str) -> Result<(T, T), GraphError> {
    let mut it = body.split_whitespace();
    let mut next = || {
        it.next().and_then(|s| s.parse::<T>().ok()).ok_or(GraphError::Format {
            line,
            message: format!("expected two non-negative integers, got {body:?}"),
        })
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(GraphError::Format {
            line,
            message: format!("trailing tokens in {body:?}"),
        });
    }
    Ok((a, b))
}

/// Graph families the generators know about.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphKind {
    Gnp { n: usize, p: f64 },
    RandomRegular { n: usize, d: usize },
    RandomBipartite { left: usize, right: usize, p: f64 },
    CompleteBipartite { left: usize, right: usize },
    Path(usize),
    Cycle(usize),
    Complete(usize),
}

impl GraphKind {
    /// Parses `kind:arg:arg`, e.g. `gnp:50:0.1`, `regular:20:3`,
    /// `bipartite:10:12:0.3`, `kbip:2:2`, `path:3`, `cycle:5`, `complete:4`.
    pub fn parse(spec: &str) -> Result<Self, GraphError> {
        let bad = || GraphError::Parameter(format!("cannot parse generator spec {spec:?}"));
        let parts: Vec<&str> = spec.split(':').collect();
        let int = |s: &str| s.parse::<usize>().map_err(|_| bad());
        let float = |s: &str| s.parse::<f64>().map_err(|_| bad());
        match parts.as_slice() {
            ["gnp", n, p] => Ok(GraphKind::Gnp {
                n: int(n)?,
                p: float(p)?,
            }),
            ["regular", n, d] => Ok(GraphKind::RandomRegular { n: int(n)?, d: int(d)? }),
            ["bipartite", a, b, p] => Ok(GraphKind::RandomBipartite {
                left: int(a)?,
                right: int(b)?,
                p: float(p)?,
            }),
            ["kbip", a, b] => Ok(GraphKind::CompleteBipartite {
                left: int(a)?,
                right: int(b)?,
            }),
            ["path", n] => Ok(GraphKind::Path(int(n)?)),
            ["cycle", n] => Ok(GraphKind::Cycle(int(n)?)),
            ["complete", n] => Ok(GraphKind::Complete(int(n)?)),
            _ => Err(bad()),
        }
    }

    pub fn is_randomized(&self) -> bool {
        matches!(
            self,
            GraphKind::Gnp { .. } | GraphKind::RandomRegular { .. } | GraphKind::RandomBipartite { .. }
        )
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphKind::Gnp { n, p } => write!(f, "gnp:{n}:{p}"),
            GraphKind::RandomRegular { n, d } => write!(f, "regular:{n}:{d}"),
            GraphKind::RandomBipartite { left, right, p } => write!(f, "bipartite:{left}:{right}:{p}"),
            GraphKind::CompleteBipartite { left, right } => write!(f, "kbip:{left}:{right}"),
            GraphKind::Path(n) => write!(f, "path:{n}"),
            GraphKind::Cycle(n) => write!(f, "cycle:{n}"),
            GraphKind::Complete(n) => write!(f, "complete:{n}"),
        }
    }
}

const REGULAR_ATTEMPTS: usize = 1000;

/// Generates a graph of the requested family. Deterministic for a fixed seed.
pub fn generate(kind: &GraphKind, seed: u64) -> Result<Graph, GraphError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let check_p = |p: f64| {
        if (0.0..=1.0).contains(&p) {
            Ok(())
        } else {
            Err(GraphError::Parameter(format!("edge probability {p} not in [0, 1]")))
        }
    };
    let mut list = Vec::new();
    let n = match *kind {
        GraphKind::Gnp { n, p } => {
            check_p(p)?;
            for u in 0..n as u32 {
                for v in u + 1..n as u32 {
                    if rng.gen_bool(p) {
                        list.push((u, v));
                    }
                }
            }
            n
        }
        GraphKind::RandomBipartite { left, right, p } => {
            check_p(p)?;
            for u in 0..left as u32 {
                for v in 0..right as u32 {
                    if rng.gen_bool(p) {
                        list.push((u, left as u32 + v));
                    }
                }
            }
            left + right
        }
        GraphKind::CompleteBipartite { left, right } => {
            for u in 0..left as u32 {
                for v in 0..right as u32 {
                    list.push((u, left as u32 + v));
                }
            }
            left + right
        }
        GraphKind::RandomRegular { n, d } => {
            list = random_regular_edges(n, d, &mut rng)?;
            n
        }
        GraphKind::Path(n) => {
            list.extend((1..n as u32).map(|v| (v - 1, v)));
            n
        }
        GraphKind::Cycle(n) => {
            if n < 3 {
                return Err(GraphError::Parameter(format!("cycle needs n >= 3, got {n}")));
            }
            list.extend((1..n as u32).map(|v| (v - 1, v)));
            list.push((0, n as u32 - 1));
            n
        }
        GraphKind::Complete(n) => {
            for u in 0..n as u32 {
                for v in u + 1..n as u32 {
                    list.push((u, v));
                }
            }
            n
        }
    };
    Graph::from_edges(n, list)
}

/// Pairing model with rejection of loops and multi-edges.
fn random_regular_edges(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Result<Vec<(u32, u32)>, GraphError> {
    if d >= n.max(1) && !(n == 0 && d == 0) {
        return Err(GraphError::Parameter(format!("regular degree {d} needs d < n = {n}")));
    }
    if !(n * d).is_multiple_of(2) {
        return Err(GraphError::Parameter(format!("d*n must be even, got d={d}, n={n}")));
    }
    // Stubs are paired one edge at a time, redrawing pairs that would form a
    // loop or a repeated edge; a dead end restarts the attempt.
    'attempt: for _ in 0..REGULAR_ATTEMPTS {
        let mut stubs: Vec<u32> = (0..n as u32).flat_map(|v| std::iter::repeat_n(v, d)).collect();
        let mut seen = std::collections::HashSet::with_capacity(stubs.len() / 2);
        let mut list = Vec::with_capacity(stubs.len() / 2);
        while !stubs.is_empty() {
            let mut tries = 0;
            let (i, j) = loop {
                let i = rng.gen_range(0..stubs.len());
                let j = rng.gen_range(0..stubs.len());
                let (a, b) = (stubs[i].min(stubs[j]), stubs[i].max(stubs[j]));
                if i != j && a != b && !seen.contains(&(a, b)) {
                    break (i, j);
                }
                tries += 1;
                if tries > 50 * stubs.len() {
                    continue 'attempt;
                }
            };
            let (a, b) = (stubs[i].min(stubs[j]), stubs[i].max(stubs[j]));
            seen.insert((a, b));
            list.push((a, b));
            let (hi, lo) = (i.max(j), i.min(j));
            stubs.swap_remove(hi);
            stubs.swap_remove(lo);
        }
        list.sort_unstable();
        return Ok(list);
    }
    Err(GraphError::Parameter(format!(
        "no simple {d}-regular pairing on {n} vertices after {REGULAR_ATTEMPTS} attempts"
    )))
}

/// The k-th distance power: `u ~ v` iff `1 <= dist(u, v) <= k`. When
/// `subset` is given, the result is induced on those vertices (distances are
/// still measured in the full graph); other vertices stay isolated.
pub fn distance_power(g: &Graph, k: usize, subset: Option<&[VertexId]>) -> Graph {
    let n = g.vertex_count();
    let mut member = vec![subset.is_none(); n];
    if let Some(s) = subset {
        for v in s {
            member[v.index()] = true;
        }
    }
    let mut dist = vec![usize::MAX; n];
    let mut touched = Vec::new();
    let mut queue = VecDeque::new();
    let mut list = Vec::new();
    for s in 0..n {
        if !member[s] {
            continue;
        }
        dist[s] = 0;
        touched.push(s);
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            if dist[u] == k {
                continue;
            }
            for &(w, _) in g.incident(VertexId(u as u32)) {
                let w = w.index();
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    touched.push(w);
                    queue.push_back(w);
                    if w > s && member[w] {
                        list.push((s as u32, w as u32));
                    }
                }
            }
        }
        for &t in &touched {
            dist[t] = usize::MAX;
        }
        touched.clear();
    }
    list.sort_unstable();
    Graph::from_sorted_unique(n, list)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_and_complete_shapes() {
        let p = generate(&GraphKind::Path(3), 1).unwrap();
        assert_eq!(p.edge_count(), 2);
        assert_eq!(p.max_degree(), 2);
        assert_eq!(p.edges(), &[(VertexId(0), VertexId(1)), (VertexId(1), VertexId(2))]);
        let k4 = generate(&GraphKind::Complete(4), 1).unwrap();
        assert_eq!(k4.edge_count(), 6);
        assert_eq!(k4.max_degree(), 3);
    }

    #[test]
    fn gnp_is_deterministic_per_seed() {
        let kind = GraphKind::Gnp { n: 50, p: 0.1 };
        let a = generate(&kind, 7).unwrap();
        let b = generate(&kind, 7).unwrap();
        assert_eq!(a, b);
        let c = generate(&kind, 8).unwrap();
        assert_ne!(a.edges(), c.edges());
    }

    #[test]
    fn regular_generator_respects_degree() {
        let g = generate(&GraphKind::RandomRegular { n: 31, d: 5 }, 3).unwrap_err();
        assert!(matches!(g, GraphError::Parameter(_)));
        let g = generate(&GraphKind::RandomRegular { n: 30, d: 4 }, 3).unwrap();
        assert!(g.vertices().all(|v| g.degree(v) == 4));
    }

    #[test]
    fn invalid_probability_rejected() {
        assert!(generate(&GraphKind::Gnp { n: 5, p: 1.5 }, 0).is_err());
        assert!(generate(&GraphKind::Cycle(2), 0).is_err());
    }

    #[test]
    fn edge_list_parses_and_reports_line_numbers() {
        let g = Graph::from_edge_list("3 2\n0 1\n1 2").unwrap();
        assert_eq!(g, generate(&GraphKind::Path(3), 0).unwrap());
        let err = Graph::from_edge_list("2 1\n0 0").unwrap_err();
        assert!(matches!(err, GraphError::Format { line: 2, .. }), "{err:?}");
        let err = Graph::from_edge_list("3 2\n0 1\n0 1").unwrap_err();
        assert!(matches!(err, GraphError::Format { line: 3, .. }));
        let err = Graph::from_edge_list("3 1\n0 7").unwrap_err();
        assert!(matches!(err, GraphError::Format { line: 2, .. }));
    }

    #[test]
    fn distance_power_small_cases() {
        let p3 = generate(&GraphKind::Path(3), 0).unwrap();
        let sq = distance_power(&p3, 2, None);
        assert_eq!(sq, generate(&GraphKind::Complete(3), 0).unwrap());
        let c6 = generate(&GraphKind::Cycle(6), 0).unwrap();
        let sq = distance_power(&c6, 2, None);
        assert!(sq.vertices().all(|v| sq.degree(v) == 4));
    }

    #[test]
    fn distance_power_restricted_to_subset() {
        let p5 = generate(&GraphKind::Path(5), 0).unwrap();
        let sub = [VertexId(0), VertexId(2), VertexId(4)];
        let g = distance_power(&p5, 2, Some(&sub));
        assert_eq!(g.edge_count(), 2);
        assert!(g.edge_between(VertexId(0), VertexId(2)).is_some());
        assert!(g.edge_between(VertexId(0), VertexId(4)).is_none());
    }

    #[test]
    fn bipartition_detects_odd_cycle() {
        assert!(generate(&GraphKind::Cycle(6), 0).unwrap().is_bipartite());
        assert!(!generate(&GraphKind::Cycle(5), 0).unwrap().is_bipartite());
    }
}

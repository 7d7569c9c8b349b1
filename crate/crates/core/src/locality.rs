//! Symmetry breaking and round accounting.
//!
//! Everything here is computed centrally (greedy in ID order). The LOCAL
//! round cost a distributed implementation would pay is charged to a
//! [`RoundLedger`] with unit constants.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{distance_power, EdgeId, Graph, VertexId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LocalityError {
    #[error("color limit {limit} is below Δ(G^{k}) + 1 = {needed}")]
    LimitTooSmall { k: usize, limit: usize, needed: usize },
    #[error("node {0} has more than one outgoing arc")]
    OutDegree(usize),
    #[error("arc endpoint {0} out of range")]
    NodeOutOfRange(usize),
}

/// A proper vertex coloring of `G^k`, colors in `1..=limit`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopColoring {
    pub k: usize,
    pub limit: usize,
    /// `0` for vertices outside the colored subset.
    pub colors: Vec<usize>,
}

impl HopColoring {
    pub fn color(&self, v: VertexId) -> usize {
        self.colors[v.index()]
    }

    pub fn colors_used(&self) -> usize {
        self.colors.iter().copied().max().unwrap_or(0)
    }

    /// Vertices grouped by color, in color order; every class is sorted.
    pub fn classes(&self) -> Vec<Vec<VertexId>> {
        let mut out = vec![Vec::new(); self.colors_used()];
        for (i, &c) in self.colors.iter().enumerate() {
            if c > 0 {
                out[c - 1].push(VertexId(i as u32));
            }
        }
        out
    }
}

/// Greedy coloring of `G^k` (restricted to `subset` if given) in vertex-ID
/// order.
pub fn hop_coloring(
    g: &Graph,
    k: usize,
    limit: usize,
    subset: Option<&[VertexId]>,
) -> Result<HopColoring, LocalityError> {
    let power = distance_power(g, k, subset);
    let needed = power.max_degree() + 1;
    if limit < needed {
        return Err(LocalityError::LimitTooSmall { k, limit, needed });
    }
    let mut member = vec![subset.is_none(); g.vertex_count()];
    if let Some(s) = subset {
        for v in s {
            member[v.index()] = true;
        }
    }
    let mut colors = vec![0usize; g.vertex_count()];
    let mut used = vec![false; needed + 1];
    for v in power.vertices() {
        if !member[v.index()] {
            continue;
        }
        used.iter_mut().for_each(|u| *u = false);
        for &(w, _) in power.incident(v) {
            used[colors[w.index()]] = true;
        }
        colors[v.index()] = (1..=needed).find(|&c| !used[c]).unwrap();
    }
    Ok(HopColoring { k, limit, colors })
}

/// Greedy maximal matching over `edges` in the given order.
pub fn maximal_matching(g: &Graph, edges: &[EdgeId]) -> Vec<EdgeId> {
    let mut matched = vec![false; g.vertex_count()];
    let mut out = Vec::new();
    for &e in edges {
        let (u, v) = g.endpoints(e);
        if !matched[u.index()] && !matched[v.index()] {
            matched[u.index()] = true;
            matched[v.index()] = true;
            out.push(e);
        }
    }
    out
}

pub const CONFLICT_COLORS: usize = 3;

/// Colors the undirected version of a graph where every node has at most one
/// outgoing arc. Such graphs are 2-degenerate, so smallest-last greedy needs
/// at most [`CONFLICT_COLORS`] colors. Colors are `0..3`.
pub fn conflict_graph_coloring(nodes: usize, arcs: &[(usize, usize)]) -> Result<Vec<usize>, LocalityError> {
    let mut out_seen = vec![false; nodes];
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    for &(a, b) in arcs {
        for x in [a, b] {
            if x >= nodes {
                return Err(LocalityError::NodeOutOfRange(x));
            }
        }
        if std::mem::replace(&mut out_seen[a], true) {
            return Err(LocalityError::OutDegree(a));
        }
        if a != b {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut removed = vec![false; nodes];
    let mut order = Vec::with_capacity(nodes);
    let max_deg = degree.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); max_deg + 1];
    for (v, &d) in degree.iter().enumerate().rev() {
        buckets[d].push(v);
    }
    let mut low = 0;
    while order.len() < nodes {
        low = low.min(max_deg);
        let v = loop {
            match buckets[low].pop() {
                Some(v) if !removed[v] && degree[v] == low => break v,
                Some(_) => {}
                None => low += 1,
            }
        };
        removed[v] = true;
        order.push(v);
        for &w in &adj[v] {
            if !removed[w] {
                degree[w] -= 1;
                buckets[degree[w]].push(w);
                low = low.min(degree[w]);
            }
        }
    }
    let mut colors = vec![usize::MAX; nodes];
    for &v in order.iter().rev() {
        let taken: Vec<usize> = adj[v].iter().map(|&w| colors[w]).collect();
        colors[v] = (0..).find(|c| !taken.contains(c)).unwrap();
    }
    debug_assert!(colors.iter().all(|&c| c < CONFLICT_COLORS));
    Ok(colors)
}

/// `log* n` in base 2.
pub fn log_star(n: f64) -> f64 {
    let mut x = n;
    let mut k = 0.0;
    while x > 1.0 {
        x = x.log2();
        k += 1.0;
    }
    k
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LedgerEntry {
    pub phase: String,
    pub formula: String,
    pub charge: f64,
}

/// Ordered record of round charges, one entry per phase invocation.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct RoundLedger {
    entries: Vec<LedgerEntry>,
}

impl RoundLedger {
    pub fn charge(&mut self, phase: &str, formula: &str, charge: f64) {
        self.entries.push(LedgerEntry {
            phase: phase.to_string(),
            formula: formula.to_string(),
            charge,
        });
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|e| e.charge).sum()
    }

    pub fn phase_total(&self, phase: &str) -> f64 {
        self.entries.iter().filter(|e| e.phase == phase).map(|e| e.charge).sum()
    }

    pub fn extend(&mut self, other: &RoundLedger) {
        self.entries.extend(other.entries.iter().cloned());
    }
}

//! Partial edge colorings over the palette `1..=p`, plus the blocking slot `★`.
//!
//! Colors at a vertex are indexed by a dense `vertex × color → edge` table,
//! so "which edge at `v` has color `c`" and "is `c` missing at `v`" are both
//! O(1). Every mutation goes through [`PartialColoring::apply`], which either
//! commits a whole batch or leaves the coloring untouched.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::fans::{self, FanError};
use crate::graph::{EdgeId, Graph, VertexId};

pub type Color = u32;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Uncolored,
    Real(Color),
    Star,
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Uncolored => f.write_str("_"),
            Slot::Real(c) => write!(f, "{c}"),
            Slot::Star => f.write_str("*"),
        }
    }
}

/// How `m(v)` is picked when nothing is pinned or preferred.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum MissingPolicy {
    #[default]
    Lowest,
    Highest,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColoringError {
    #[error("{edge} cannot take color {color}: {clash} already has it")]
    Conflict { edge: EdgeId, color: Color, clash: EdgeId },
    #[error("color {color} outside palette 1..={palette}")]
    OutOfPalette { color: Color, palette: Color },
    #[error("color {color} is not missing at {vertex}")]
    NotMissing { vertex: VertexId, color: Color },
    #[error("{0} is uncolored")]
    Uncolored(EdgeId),
}

/// Two edges sharing `vertex` that carry the same real color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Violation {
    pub first: EdgeId,
    pub second: EdgeId,
    pub vertex: VertexId,
    pub color: Color,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} and {} both have color {} at {}",
            self.first, self.second, self.color, self.vertex
        )
    }
}

#[derive(Debug, Clone)]
pub struct PartialColoring<'g> {
    graph: &'g Graph,
    palette: Color,
    slots: Vec<Slot>,
    at: Vec<u32>,
    loads: Vec<u32>,
    pins: Vec<Option<Color>>,
    uncolored: usize,
    version: u64,
    policy: MissingPolicy,
}

impl<'g> PartialColoring<'g> {
    /// All edges uncolored, palette `1..=palette`.
    pub fn new(graph: &'g Graph, palette: Color) -> Self {
        let stride = palette as usize + 1;
        PartialColoring {
            graph,
            palette,
            slots: vec![Slot::Uncolored; graph.edge_count()],
            at: vec![NONE; graph.vertex_count() * stride],
            loads: vec![0; graph.vertex_count()],
            pins: vec![None; graph.vertex_count()],
            uncolored: graph.edge_count(),
            version: 0,
            policy: MissingPolicy::Lowest,
        }
    }

    /// Palette of size `Δ + 1`.
    pub fn vizing(graph: &'g Graph) -> Self {
        Self::new(graph, graph.max_degree() as Color + 1)
    }

    pub fn with_policy(mut self, policy: MissingPolicy) -> Self {
        self.policy = policy;
        self
    }

    #[inline]
    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    #[inline]
    pub fn palette(&self) -> Color {
        self.palette
    }

    #[inline]
    pub fn slot(&self, e: EdgeId) -> Slot {
        self.slots[e.index()]
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    #[inline]
    pub fn uncolored_count(&self) -> usize {
        self.uncolored
    }

    /// Bumped by every committed batch or pin change.
    #[inline]
    pub fn version(&self) -> u64 {
        self.version
    }

    #[inline]
    pub fn load(&self, v: VertexId) -> u32 {
        self.loads[v.index()]
    }

    pub fn loads(&self) -> &[u32] {
        &self.loads
    }

    /// ℓ(G): the largest number of `★` edges at any vertex.
    pub fn max_load(&self) -> u32 {
        self.loads.iter().copied().max().unwrap_or(0)
    }

    #[inline]
    fn cell(&self, v: VertexId, c: Color) -> usize {
        v.index() * (self.palette as usize + 1) + c as usize
    }

    /// The edge at `v` colored `c`, if any.
    #[inline]
    pub fn edge_with(&self, v: VertexId, c: Color) -> Option<EdgeId> {
        if c == 0 || c > self.palette {
            return None;
        }
        match self.at[self.cell(v, c)] {
            NONE => None,
            e => Some(EdgeId(e)),
        }
    }

    /// `c ∈ M(v)`.
    #[inline]
    pub fn is_missing(&self, v: VertexId, c: Color) -> bool {
        c >= 1 && c <= self.palette && self.at[self.cell(v, c)] == NONE
    }

    pub fn missing(&self, v: VertexId) -> impl Iterator<Item = Color> + '_ {
        (1..=self.palette).filter(move |&c| self.is_missing(v, c))
    }

    fn policy_missing(&self, v: VertexId) -> Option<Color> {
        match self.policy {
            MissingPolicy::Lowest => self.missing(v).next(),
            MissingPolicy::Highest => self.missing(v).last(),
        }
    }

    /// `m(v)`: the pinned color if still missing, else the policy choice.
    pub fn m(&self, v: VertexId) -> Option<Color> {
        self.m_preferring(v, None)
    }

    /// Like [`m`](Self::m), but `prefer` wins over the policy when missing.
    pub fn m_preferring(&self, v: VertexId, prefer: Option<Color>) -> Option<Color> {
        if let Some(c) = self.pins[v.index()] {
            if self.is_missing(v, c) {
                return Some(c);
            }
        }
        match prefer {
            Some(c) if self.is_missing(v, c) => Some(c),
            _ => self.policy_missing(v),
        }
    }

    pub fn pin(&mut self, v: VertexId, c: Color) -> Result<(), ColoringError> {
        if !self.is_missing(v, c) {
            return Err(ColoringError::NotMissing { vertex: v, color: c });
        }
        self.pins[v.index()] = Some(c);
        self.version += 1;
        Ok(())
    }

    pub fn unpin(&mut self, v: VertexId) {
        if self.pins[v.index()].take().is_some() {
            self.version += 1;
        }
    }

    pub fn pinned(&self, v: VertexId) -> Option<Color> {
        self.pins[v.index()].filter(|&c| self.is_missing(v, c))
    }

    pub fn uncolored_at(&self, v: VertexId) -> impl Iterator<Item = (VertexId, EdgeId)> + '_ {
        self.graph
            .incident(v)
            .iter()
            .copied()
            .filter(move |&(_, e)| self.slots[e.index()] == Slot::Uncolored)
    }

    /// The lowest-ID uncolored edge at `v`.
    pub fn first_uncolored_at(&self, v: VertexId) -> Option<(VertexId, EdgeId)> {
        self.uncolored_at(v).min_by_key(|&(_, e)| e)
    }

    #[inline]
    pub fn is_incomplete(&self, v: VertexId) -> bool {
        self.uncolored_at(v).next().is_some()
    }

    pub fn set(&mut self, e: EdgeId, slot: Slot) -> Result<(), ColoringError> {
        self.apply(&[(e, slot)])
    }

    /// Applies a batch atomically. Later entries for the same edge override
    /// earlier ones; properness is checked on the final state only, so a
    /// batch may permute colors that would clash if applied one by one.
    pub fn apply(&mut self, batch: &[(EdgeId, Slot)]) -> Result<(), ColoringError> {
        let mut index: HashMap<EdgeId, usize> = HashMap::with_capacity(batch.len());
        let mut order: Vec<(EdgeId, Slot)> = Vec::with_capacity(batch.len());
        for &(e, s) in batch {
            if let Slot::Real(c) = s {
                if c == 0 || c > self.palette {
                    return Err(ColoringError::OutOfPalette {
                        color: c,
                        palette: self.palette,
                    });
                }
            }
            match index.get(&e) {
                Some(&i) => order[i].1 = s,
                None => {
                    index.insert(e, order.len());
                    order.push((e, s));
                }
            }
        }
        let old: Vec<Slot> = order.iter().map(|&(e, _)| self.slots[e.index()]).collect();
        for &(e, _) in &order {
            self.clear(e);
        }
        for (i, &(e, s)) in order.iter().enumerate() {
            if let Err(err) = self.fill(e, s) {
                for &(done, _) in &order[..i] {
                    self.clear(done);
                }
                for (&(e, _), &s) in order.iter().zip(&old) {
                    self.fill(e, s).expect("restoring a previously proper state");
                }
                return Err(err);
            }
        }
        self.version += 1;
        Ok(())
    }

    fn clear(&mut self, e: EdgeId) {
        let (u, v) = self.graph.endpoints(e);
        match std::mem::replace(&mut self.slots[e.index()], Slot::Uncolored) {
            Slot::Uncolored => return,
            Slot::Real(c) => {
                let (cu, cv) = (self.cell(u, c), self.cell(v, c));
                self.at[cu] = NONE;
                self.at[cv] = NONE;
            }
            Slot::Star => {
                self.loads[u.index()] -= 1;
                self.loads[v.index()] -= 1;
            }
        }
        self.uncolored += 1;
    }

    fn fill(&mut self, e: EdgeId, s: Slot) -> Result<(), ColoringError> {
        debug_assert_eq!(self.slots[e.index()], Slot::Uncolored);
        let (u, v) = self.graph.endpoints(e);
        match s {
            Slot::Uncolored => return Ok(()),
            Slot::Real(c) => {
                for x in [u, v] {
                    if let Some(clash) = self.edge_with(x, c) {
                        return Err(ColoringError::Conflict {
                            edge: e,
                            color: c,
                            clash,
                        });
                    }
                }
                let (cu, cv) = (self.cell(u, c), self.cell(v, c));
                self.at[cu] = e.0;
                self.at[cv] = e.0;
            }
            Slot::Star => {
                self.loads[u.index()] += 1;
                self.loads[v.index()] += 1;
            }
        }
        self.slots[e.index()] = s;
        self.uncolored -= 1;
        Ok(())
    }

    /// Every pair of adjacent edges sharing a real color, recomputed from
    /// the slots alone.
    pub fn verify_proper(&self) -> Vec<Violation> {
        find_conflicts(self.graph, &self.slots)
    }

    /// Recomputes the derived tables from the slots and reports the first
    /// disagreement. Intended for tests and debug assertions.
    pub fn audit(&self) -> Result<(), String> {
        let mut fresh = PartialColoring::new(self.graph, self.palette);
        for (i, &s) in self.slots.iter().enumerate() {
            fresh
                .fill(EdgeId(i as u32), s)
                .map_err(|e| format!("slots are not proper: {e}"))?;
        }
        if fresh.at != self.at {
            return Err("color table out of sync with slots".into());
        }
        if fresh.loads != self.loads {
            return Err("loads out of sync with star edges".into());
        }
        if fresh.uncolored != self.uncolored {
            return Err(format!(
                "uncolored count {} but {} uncolored slots",
                self.uncolored, fresh.uncolored
            ));
        }
        Ok(())
    }
}

/// All violations in an arbitrary slot vector (colors are not bounded by a
/// palette here, so finalized colorings can be checked too).
pub fn find_conflicts(g: &Graph, slots: &[Slot]) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut seen: HashMap<Color, Vec<EdgeId>> = HashMap::new();
    for v in g.vertices() {
        seen.clear();
        for &(_, e) in g.incident(v) {
            if let Slot::Real(c) = slots[e.index()] {
                seen.entry(c).or_default().push(e);
            }
        }
        for (&color, edges) in &seen {
            for (i, &a) in edges.iter().enumerate() {
                for &b in &edges[i + 1..] {
                    out.push(Violation {
                        first: a.min(b),
                        second: a.max(b),
                        vertex: v,
                        color,
                    });
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Recolors `★` edges greedily with fresh colors `p+1, p+2, …` (at most
/// `2ℓ(G) − 1` of them) and returns the complete coloring, one color per
/// edge.
pub fn finalize_star_edges(coloring: &PartialColoring<'_>) -> Result<Vec<Color>, ColoringError> {
    let g = coloring.graph();
    let base = coloring.palette();
    let mut colors = vec![0; g.edge_count()];
    let mut stars = Vec::new();
    for e in g.edge_ids() {
        match coloring.slot(e) {
            Slot::Uncolored => return Err(ColoringError::Uncolored(e)),
            Slot::Real(c) => colors[e.index()] = c,
            Slot::Star => stars.push(e),
        }
    }
    let mut taken = Vec::new();
    for &e in &stars {
        let (u, v) = g.endpoints(e);
        taken.clear();
        for x in [u, v] {
            for &(_, f) in g.incident(x) {
                if f != e && coloring.slot(f) == Slot::Star && colors[f.index()] > base {
                    taken.push(colors[f.index()]);
                }
            }
        }
        let fresh = (base + 1..).find(|c| !taken.contains(c)).unwrap();
        colors[e.index()] = fresh;
    }
    Ok(colors)
}

/// Colors every edge with at most `Δ + 1` colors by repairing one fan per
/// uncolored edge, with untruncated alternating paths.
pub fn sequential_vizing(g: &Graph) -> Result<PartialColoring<'_>, FanError> {
    let mut coloring = PartialColoring::vizing(g);
    for e in g.edge_ids() {
        if coloring.slot(e) != Slot::Uncolored {
            continue;
        }
        let (center, _) = g.endpoints(e);
        let alpha = coloring.m(center).expect("palette exceeds degree");
        let fan = fans::grow_normal_fan(&coloring, center, alpha, Some(e), None)?;
        fans::repair_normal_fan(&mut coloring, &fan, None, &mut |_| None)?;
    }
    Ok(coloring)
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct DumpError {
    pub line: usize,
    pub message: String,
}

/// Coloring dump: one `edge_id color` line per edge, color being `_`, `*`
/// or a positive integer.
pub fn format_dump(slots: &[Slot]) -> String {
    let mut out = String::with_capacity(slots.len() * 8);
    for (i, s) in slots.iter().enumerate() {
        out.push_str(&format!("{i} {s}\n"));
    }
    out
}

pub fn format_colors(colors: &[Color]) -> String {
    let slots: Vec<Slot> = colors.iter().map(|&c| Slot::Real(c)).collect();
    format_dump(&slots)
}

/// Parses a dump for a graph with `m` edges. Edges not mentioned stay
/// uncolored.
pub fn parse_dump(text: &str, m: usize) -> Result<Vec<Slot>, DumpError> {
    let mut slots = vec![Slot::Uncolored; m];
    let mut seen = vec![false; m];
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let err = |message: String| DumpError { line, message };
        let mut it = body.split_whitespace();
        let (Some(id), Some(color), None) = (it.next(), it.next(), it.next()) else {
            return Err(err(format!("expected `edge_id color`, got {body:?}")));
        };
        let id: usize = id.parse().map_err(|_| err(format!("bad edge id {id:?}")))?;
        if id >= m {
            return Err(err(format!("edge id {id} out of range for m = {m}")));
        }
        if std::mem::replace(&mut seen[id], true) {
            return Err(err(format!("edge {id} listed twice")));
        }
        slots[id] = match color {
            "_" => Slot::Uncolored,
            "*" => Slot::Star,
            c => match c.parse::<Color>() {
                Ok(c) if c > 0 => Slot::Real(c),
                _ => return Err(err(format!("bad color {c:?}"))),
            },
        };
    }
    Ok(slots)
}

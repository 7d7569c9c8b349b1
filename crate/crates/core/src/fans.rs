//! Fans, alternating paths and single-item repairs.
//!
//! A repair is split into a *plan* (validate the item, walk its alternating
//! path) and an *execution* (one atomic batch, or two for the case where the
//! path ends at the repeated leaf). Schedulers use the split to pick blocking
//! edges for a whole wave before touching the coloring.

use std::fmt;

use thiserror::Error;

use crate::graph::{EdgeId, VertexId};
use crate::palette::{Color, ColoringError, PartialColoring, Slot};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FanError {
    #[error("item centered at {0} no longer matches the coloring")]
    Stale(VertexId),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("structure violated: {0}")]
    Structure(String),
    #[error("no admissible blocking edge on a path truncated at {0}")]
    BlockingFailed(usize),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
}

/// How fan growth stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FanTerminal {
    /// `m(x_k)` is missing at the center.
    Closes,
    /// `m(x_k) = m(x_j)` for the 1-based leaf index `j ≤ k − 2`.
    Repeats { j: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalFan {
    pub center: VertexId,
    pub alpha: Color,
    pub leaves: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    /// `m(x_i)` as chosen during growth.
    pub m: Vec<Color>,
    pub terminal: FanTerminal,
}

impl NormalFan {
    pub fn degree(&self) -> usize {
        self.leaves.len()
    }

    /// `β = m(x_k)`.
    pub fn beta(&self) -> Color {
        *self.m.last().unwrap()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        std::iter::once(self.center).chain(self.leaves.iter().copied())
    }

    /// 1-based position of `x` among the leaves.
    pub fn leaf_index(&self, x: VertexId) -> Option<usize> {
        self.leaves.iter().position(|&l| l == x).map(|i| i + 1)
    }

    /// Checks that every recorded edge color and missing color still holds.
    pub fn check(&self, c: &PartialColoring<'_>) -> Result<(), FanError> {
        let stale = || FanError::Stale(self.center);
        if !c.is_missing(self.center, self.alpha) || c.slot(self.edges[0]) != Slot::Uncolored {
            return Err(stale());
        }
        for i in 1..self.edges.len() {
            if c.slot(self.edges[i]) != Slot::Real(self.m[i - 1]) {
                return Err(stale());
            }
        }
        if self.leaves.iter().zip(&self.m).any(|(&x, &mx)| !c.is_missing(x, mx)) {
            return Err(stale());
        }
        if self.terminal == FanTerminal::Closes && !c.is_missing(self.center, self.beta()) {
            return Err(stale());
        }
        Ok(())
    }

    pub fn is_valid(&self, c: &PartialColoring<'_>) -> bool {
        self.check(c).is_ok()
    }

    /// Batch for `shift(F, i)`: `e_j` takes `m(x_j)` for `j < i`.
    pub fn shift_batch(&self, i: usize) -> Vec<(EdgeId, Slot)> {
        (0..i.saturating_sub(1))
            .map(|j| (self.edges[j], Slot::Real(self.m[j])))
            .collect()
    }
}

/// Grows a normal `α`-fan at `v` from `seed` (default: the lowest-ID
/// uncolored edge at `v`). `prefer` biases every `m(x_i)` towards that
/// color when it is missing at `x_i`.
pub fn grow_normal_fan(
    c: &PartialColoring<'_>,
    v: VertexId,
    alpha: Color,
    seed: Option<EdgeId>,
    prefer: Option<Color>,
) -> Result<NormalFan, FanError> {
    if !c.is_missing(v, alpha) {
        return Err(FanError::Precondition(format!("{alpha} is not missing at {v}")));
    }
    let g = c.graph();
    let first = match seed {
        Some(e) => {
            let (a, b) = g.endpoints(e);
            if (a != v && b != v) || c.slot(e) != Slot::Uncolored {
                return Err(FanError::Precondition(format!("{e} is not an uncolored edge at {v}")));
            }
            e
        }
        None => {
            c.first_uncolored_at(v)
                .ok_or_else(|| FanError::Precondition(format!("{v} has no uncolored edge")))?
                .1
        }
    };
    let mut fan = NormalFan {
        center: v,
        alpha,
        leaves: Vec::new(),
        edges: Vec::new(),
        m: Vec::new(),
        terminal: FanTerminal::Closes,
    };
    let mut edge = first;
    loop {
        let x = g.other(edge, v);
        let mx = c.m_preferring(x, prefer).expect("palette exceeds degree");
        fan.leaves.push(x);
        fan.edges.push(edge);
        if c.is_missing(v, mx) {
            fan.m.push(mx);
            return Ok(fan);
        }
        if let Some(j) = fan.m.iter().position(|&p| p == mx) {
            fan.m.push(mx);
            let j = j + 1;
            if j + 2 > fan.degree() {
                return Err(FanError::Structure(format!(
                    "fan at {v} repeats m(x_{j}) at degree {}",
                    fan.degree()
                )));
            }
            fan.terminal = FanTerminal::Repeats { j };
            return Ok(fan);
        }
        fan.m.push(mx);
        edge = c.edge_with(v, mx).expect("color not missing at center has an edge");
        if fan.degree() > g.degree(v) {
            return Err(FanError::Structure(format!("fan at {v} revisits a leaf")));
        }
    }
}

/// `shift(F, i)` for `1 ≤ i ≤ deg(F)`.
pub fn shift(c: &mut PartialColoring<'_>, fan: &NormalFan, i: usize) -> Result<(), FanError> {
    if i == 0 || i > fan.degree() {
        return Err(FanError::Usage(format!("shift index {i} outside 1..={}", fan.degree())));
    }
    fan.check(c)?;
    c.apply(&fan.shift_batch(i))?;
    Ok(())
}

/// A prefix of a maximal `αβ`-alternating path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlternatingPath {
    pub alpha: Color,
    pub beta: Color,
    /// Color of the first edge; later edges alternate.
    pub first: Color,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    /// The maximal path continues past the stored prefix.
    pub exceeds: bool,
}

impl AlternatingPath {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn start(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn end(&self) -> VertexId {
        *self.vertices.last().unwrap()
    }

    pub fn is_maximal(&self) -> bool {
        !self.exceeds
    }

    /// Color of the 0-based edge `i`.
    pub fn color_of(&self, i: usize) -> Color {
        if i.is_multiple_of(2) {
            self.first
        } else {
            self.swap(self.first)
        }
    }

    fn swap(&self, c: Color) -> Color {
        if c == self.alpha {
            self.beta
        } else {
            self.alpha
        }
    }

    /// Batch flipping the first `count` edges.
    pub fn flip_batch(&self, count: usize) -> Vec<(EdgeId, Slot)> {
        (0..count)
            .map(|i| (self.edges[i], Slot::Real(self.swap(self.color_of(i)))))
            .collect()
    }

    fn check(&self, c: &PartialColoring<'_>) -> Result<(), FanError> {
        for (i, &e) in self.edges.iter().enumerate() {
            if c.slot(e) != Slot::Real(self.color_of(i)) {
                return Err(FanError::Stale(self.start()));
            }
        }
        Ok(())
    }
}

/// Walks the maximal `αβ`-path from `start`, which must miss `α` or `β`.
/// With `limit = Some(T)`, at most `T` edges are stored and `exceeds` tells
/// whether the path is longer.
pub fn walk_alternating_path(
    c: &PartialColoring<'_>,
    start: VertexId,
    alpha: Color,
    beta: Color,
    limit: Option<usize>,
) -> Result<AlternatingPath, FanError> {
    if alpha == beta {
        return Err(FanError::Usage(format!("path colors must differ, got {alpha} twice")));
    }
    let has_a = !c.is_missing(start, alpha);
    let has_b = !c.is_missing(start, beta);
    if has_a && has_b {
        return Err(FanError::Usage(format!(
            "{start} has both {alpha} and {beta}; it is interior to its path"
        )));
    }
    let first = if has_b { beta } else { alpha };
    let mut path = AlternatingPath {
        alpha,
        beta,
        first,
        vertices: vec![start],
        edges: Vec::new(),
        exceeds: false,
    };
    if !has_a && !has_b {
        return Ok(path);
    }
    let g = c.graph();
    let mut cur = start;
    let mut color = first;
    while let Some(e) = c.edge_with(cur, color) {
        if limit == Some(path.edges.len()) {
            path.exceeds = true;
            break;
        }
        cur = g.other(e, cur);
        path.edges.push(e);
        path.vertices.push(cur);
        color = path.swap(color);
        if path.edges.len() > g.edge_count() {
            return Err(FanError::Structure("alternating walk does not terminate".into()));
        }
    }
    Ok(path)
}

/// `augment(P)` or, with `prefix`, `augment(P(prefix))` where the edge right
/// after the prefix has already been blocked with `★`.
pub fn augment(c: &mut PartialColoring<'_>, path: &AlternatingPath, prefix: Option<usize>) -> Result<(), FanError> {
    let count = match prefix {
        None => {
            if !path.is_maximal() {
                return Err(FanError::Usage("cannot augment a truncated path in full".into()));
            }
            path.len()
        }
        Some(p) => {
            if p >= path.len() || c.slot(path.edges[p]) != Slot::Star {
                return Err(FanError::Usage(format!(
                    "prefix {p} must be followed by a blocked edge"
                )));
            }
            p
        }
    };
    for (i, &e) in path.edges[..count].iter().enumerate() {
        if c.slot(e) != Slot::Real(path.color_of(i)) {
            return Err(FanError::Stale(path.start()));
        }
    }
    c.apply(&path.flip_batch(count))?;
    Ok(())
}

/// Center with `k ≥ 2` uncolored edges to leaves that all miss `α`, while
/// the center has an `α` edge. `colors` is `B ⊆ M(center)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReverseFan {
    pub center: VertexId,
    pub alpha: Color,
    pub leaves: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    pub colors: Vec<Color>,
}

impl ReverseFan {
    pub fn degree(&self) -> usize {
        self.leaves.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        std::iter::once(self.center).chain(self.leaves.iter().copied())
    }

    pub fn push_leaf(&mut self, leaf: VertexId, edge: EdgeId) {
        self.leaves.push(leaf);
        self.edges.push(edge);
    }

    /// Fixes `B` as the lowest `k + 1` missing colors at the center. With a
    /// palette too small for that (`limited`), takes whatever is missing as
    /// long as every sub-fan still gets its own color.
    pub fn assign_colors(&mut self, c: &PartialColoring<'_>, limited: bool) -> Result<(), FanError> {
        let want = self.degree() + 1;
        self.colors = c.missing(self.center).take(want).collect();
        let need = if limited { self.degree() / 2 } else { want };
        if self.colors.len() < need {
            return Err(FanError::Structure(format!(
                "reverse fan at {} has {} leaves but only {} missing colors",
                self.center,
                self.degree(),
                self.colors.len()
            )));
        }
        Ok(())
    }

    pub fn check(&self, c: &PartialColoring<'_>) -> Result<(), FanError> {
        let ok = self.degree() >= 2
            && !c.is_missing(self.center, self.alpha)
            && self.edges.iter().all(|&e| c.slot(e) == Slot::Uncolored)
            && self.leaves.iter().all(|&x| c.is_missing(x, self.alpha))
            && self.colors.iter().all(|&b| c.is_missing(self.center, b));
        if ok {
            Ok(())
        } else {
            Err(FanError::Stale(self.center))
        }
    }
}

/// A two- or three-leaf slice of a reverse fan with its own color `β`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubReverseFan {
    pub center: VertexId,
    pub alpha: Color,
    pub beta: Color,
    /// 0-based position among the parent's sub-fans.
    pub index: usize,
    pub leaves: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl SubReverseFan {
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        std::iter::once(self.center).chain(self.leaves.iter().copied())
    }

    /// Leaves whose edge is still uncolored and which still miss `α`.
    fn open_leaves(&self, c: &PartialColoring<'_>) -> Vec<(VertexId, EdgeId)> {
        self.leaves
            .iter()
            .zip(&self.edges)
            .filter(|&(&x, &e)| c.slot(e) == Slot::Uncolored && c.is_missing(x, self.alpha))
            .map(|(&x, &e)| (x, e))
            .collect()
    }

    /// The center lost its `α` edge (another repair's path ended here), so
    /// one leaf edge can take `α` directly.
    pub fn is_semi_destroyed(&self, c: &PartialColoring<'_>) -> bool {
        c.is_missing(self.center, self.alpha) && !self.open_leaves(c).is_empty()
    }
}

/// Splits into `⌊k/2⌋` sub-fans of two leaves, the last taking three when
/// `k` is odd, with `β_i` taken from `B` in order.
pub fn split_sub_reverse(fan: &ReverseFan) -> Result<Vec<SubReverseFan>, FanError> {
    let k = fan.degree();
    if k < 2 {
        return Err(FanError::Precondition(format!(
            "reverse fan at {} has {k} leaves",
            fan.center
        )));
    }
    let parts = k / 2;
    if fan.colors.len() < parts {
        return Err(FanError::Precondition(format!(
            "reverse fan at {} needs {parts} colors, has {}",
            fan.center,
            fan.colors.len()
        )));
    }
    Ok((0..parts)
        .map(|i| {
            let lo = 2 * i;
            let hi = if i + 1 == parts { k } else { lo + 2 };
            SubReverseFan {
                center: fan.center,
                alpha: fan.alpha,
                beta: fan.colors[i],
                index: i,
                leaves: fan.leaves[lo..hi].to_vec(),
                edges: fan.edges[lo..hi].to_vec(),
            }
        })
        .collect())
}

/// Bipartite item: uncolored `vu` with `α ∈ M(v)` and `β = m(u)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaEdge {
    pub v: VertexId,
    pub u: VertexId,
    pub edge: EdgeId,
    pub alpha: Color,
    pub beta: Color,
}

/// Anything a repair wave can fix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RepairItem {
    Normal(NormalFan),
    Sub(SubReverseFan),
    Edge(AlphaEdge),
}

impl fmt::Display for RepairItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepairItem::Normal(n) => write!(f, "fan@{}", n.center),
            RepairItem::Sub(s) => write!(f, "subfan@{}#{}", s.center, s.index),
            RepairItem::Edge(a) => write!(f, "edge@{}", a.edge),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RepairPlan {
    /// Normal fan whose last missing color is free at the center.
    Closes,
    /// `α` is already missing at the far side; no path is needed.
    Direct,
    /// Augment the whole (maximal) path.
    Path(AlternatingPath),
    /// The path is longer than `T`; a blocking edge is required.
    Blocked(AlternatingPath),
}

impl RepairPlan {
    pub fn path(&self) -> Option<&AlternatingPath> {
        match self {
            RepairPlan::Path(p) | RepairPlan::Blocked(p) => Some(p),
            _ => None,
        }
    }

    pub fn needs_block(&self) -> bool {
        matches!(self, RepairPlan::Blocked(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepairCase {
    Closes,
    /// Path does not end at `x_j`: shift to `j+1`, then augment.
    Case1,
    /// Path ends at `x_j`: augment, re-pin `m(x_j) = α`, shift to `k`.
    Case2,
    Blocked,
    Direct,
    Augmented,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RepairOutcome {
    pub case: RepairCase,
    /// The previously uncolored edge that now carries a color.
    pub colored: EdgeId,
    pub star: Option<EdgeId>,
}

fn plan_path(path: AlternatingPath) -> RepairPlan {
    if path.exceeds {
        RepairPlan::Blocked(path)
    } else {
        RepairPlan::Path(path)
    }
}

impl RepairItem {
    pub fn center(&self) -> VertexId {
        match self {
            RepairItem::Normal(n) => n.center,
            RepairItem::Sub(s) => s.center,
            RepairItem::Edge(a) => a.u,
        }
    }

    pub fn alpha(&self) -> Color {
        match self {
            RepairItem::Normal(n) => n.alpha,
            RepairItem::Sub(s) => s.alpha,
            RepairItem::Edge(a) => a.alpha,
        }
    }

    pub fn beta(&self) -> Color {
        match self {
            RepairItem::Normal(n) => n.beta(),
            RepairItem::Sub(s) => s.beta,
            RepairItem::Edge(a) => a.beta,
        }
    }

    pub fn vertices(&self) -> Vec<VertexId> {
        match self {
            RepairItem::Normal(n) => n.vertices().collect(),
            RepairItem::Sub(s) => s.vertices().collect(),
            RepairItem::Edge(a) => vec![a.u, a.v],
        }
    }

    /// Validates the item and walks its path, truncated at `t` edges.
    pub fn plan(&self, c: &PartialColoring<'_>, t: Option<usize>) -> Result<RepairPlan, FanError> {
        match self {
            RepairItem::Normal(fan) => {
                fan.check(c)?;
                match fan.terminal {
                    FanTerminal::Closes => Ok(RepairPlan::Closes),
                    FanTerminal::Repeats { j } => {
                        let path = walk_alternating_path(c, fan.center, fan.alpha, fan.beta(), t)?;
                        if path.edges.first() != Some(&fan.edges[j]) {
                            return Err(FanError::Structure(format!(
                                "path from {} does not start at e_{}",
                                fan.center,
                                j + 1
                            )));
                        }
                        Ok(plan_path(path))
                    }
                }
            }
            RepairItem::Sub(sub) => {
                let open = sub.open_leaves(c).len();
                if c.is_missing(sub.center, sub.alpha) && open >= 1 {
                    return Ok(RepairPlan::Direct);
                }
                if !c.is_missing(sub.center, sub.beta) || open < 2 {
                    return Err(FanError::Stale(sub.center));
                }
                let path = walk_alternating_path(c, sub.center, sub.alpha, sub.beta, t)?;
                Ok(plan_path(path))
            }
            RepairItem::Edge(a) => {
                if c.slot(a.edge) != Slot::Uncolored || !c.is_missing(a.v, a.alpha) {
                    return Err(FanError::Stale(a.u));
                }
                if c.is_missing(a.u, a.alpha) {
                    return Ok(RepairPlan::Direct);
                }
                if !c.is_missing(a.u, a.beta) {
                    return Err(FanError::Stale(a.u));
                }
                let path = walk_alternating_path(c, a.u, a.alpha, a.beta, t)?;
                if path.is_maximal() && path.end() == a.v {
                    return Err(FanError::Structure(format!(
                        "path from {} returns to {}; graph is not bipartite",
                        a.u, a.v
                    )));
                }
                Ok(plan_path(path))
            }
        }
    }

    /// Executes a plan made against the current coloring. `block` is the
    /// 1-based index of the blocking edge on `P(T)` for blocked plans.
    pub fn execute(
        &self,
        c: &mut PartialColoring<'_>,
        plan: &RepairPlan,
        block: Option<usize>,
    ) -> Result<RepairOutcome, FanError> {
        let mut batch: Vec<(EdgeId, Slot)> = Vec::new();
        let mut star = None;
        if let Some(path) = plan.path() {
            path.check(c)?;
            if let RepairPlan::Blocked(p) = plan {
                let b = block.ok_or_else(|| FanError::Usage("blocked plan needs an index".into()))?;
                if b == 0 || b > p.len() {
                    return Err(FanError::Usage(format!("blocking index {b} outside 1..={}", p.len())));
                }
                batch.extend(p.flip_batch(b - 1));
                batch.push((p.edges[b - 1], Slot::Star));
                star = Some(p.edges[b - 1]);
            }
        }
        match self {
            RepairItem::Normal(fan) => execute_normal(c, fan, plan, batch, star),
            RepairItem::Sub(sub) => {
                let open = sub.open_leaves(c);
                let (target, case) = match plan {
                    RepairPlan::Direct => (open[0].1, RepairCase::Direct),
                    RepairPlan::Path(p) => {
                        batch.extend(p.flip_batch(p.len()));
                        let hit = !p.is_empty() && p.end() == open[0].0;
                        (open[usize::from(hit)].1, RepairCase::Augmented)
                    }
                    RepairPlan::Blocked(_) => (open[0].1, RepairCase::Blocked),
                    RepairPlan::Closes => return Err(FanError::Usage("sub-fans never close".into())),
                };
                batch.push((target, Slot::Real(sub.alpha)));
                c.apply(&batch)?;
                Ok(RepairOutcome {
                    case,
                    colored: target,
                    star,
                })
            }
            RepairItem::Edge(a) => {
                let case = match plan {
                    RepairPlan::Direct => RepairCase::Direct,
                    RepairPlan::Path(p) => {
                        batch.extend(p.flip_batch(p.len()));
                        RepairCase::Augmented
                    }
                    RepairPlan::Blocked(_) => RepairCase::Blocked,
                    RepairPlan::Closes => return Err(FanError::Usage("edges never close".into())),
                };
                batch.push((a.edge, Slot::Real(a.alpha)));
                c.apply(&batch)?;
                Ok(RepairOutcome {
                    case,
                    colored: a.edge,
                    star,
                })
            }
        }
    }
}

fn execute_normal(
    c: &mut PartialColoring<'_>,
    fan: &NormalFan,
    plan: &RepairPlan,
    mut batch: Vec<(EdgeId, Slot)>,
    star: Option<EdgeId>,
) -> Result<RepairOutcome, FanError> {
    fan.check(c)?;
    let k = fan.degree();
    let colored = fan.edges[0];
    let j = match fan.terminal {
        FanTerminal::Repeats { j } => j,
        FanTerminal::Closes => {
            if *plan != RepairPlan::Closes {
                return Err(FanError::Usage("closing fan needs the closing plan".into()));
            }
            let mut batch = fan.shift_batch(k);
            batch.push((fan.edges[k - 1], Slot::Real(fan.beta())));
            c.apply(&batch)?;
            return Ok(RepairOutcome {
                case: RepairCase::Closes,
                colored,
                star: None,
            });
        }
    };
    match plan {
        RepairPlan::Path(p) if p.end() == fan.leaves[j - 1] => {
            let xj = fan.leaves[j - 1];
            c.apply(&p.flip_batch(p.len()))?;
            c.pin(xj, fan.alpha)?;
            let mut shift: Vec<(EdgeId, Slot)> = (0..k - 1)
                .map(|i| {
                    let m = if i == j - 1 { c.m(xj).unwrap() } else { fan.m[i] };
                    (fan.edges[i], Slot::Real(m))
                })
                .collect();
            shift.push((fan.edges[k - 1], Slot::Real(fan.beta())));
            let result = c.apply(&shift);
            c.unpin(xj);
            result?;
            Ok(RepairOutcome {
                case: RepairCase::Case2,
                colored,
                star: None,
            })
        }
        RepairPlan::Path(p) => {
            let mut all = fan.shift_batch(j + 1);
            all.extend(p.flip_batch(p.len()));
            c.apply(&all)?;
            Ok(RepairOutcome {
                case: RepairCase::Case1,
                colored,
                star: None,
            })
        }
        RepairPlan::Blocked(_) => {
            batch.extend(fan.shift_batch(j + 1));
            c.apply(&batch)?;
            Ok(RepairOutcome {
                case: RepairCase::Blocked,
                colored,
                star,
            })
        }
        _ => Err(FanError::Usage("plan does not fit a repeating fan".into())),
    }
}

fn repair_with(
    c: &mut PartialColoring<'_>,
    item: &RepairItem,
    t: Option<usize>,
    chooser: &mut dyn FnMut(&AlternatingPath) -> Option<usize>,
) -> Result<RepairOutcome, FanError> {
    let plan = item.plan(c, t)?;
    let block = match &plan {
        RepairPlan::Blocked(p) => Some(chooser(p).ok_or(FanError::BlockingFailed(p.len()))?),
        _ => None,
    };
    item.execute(c, &plan, block)
}

/// Repairs a normal fan with paths truncated at `t` edges. `chooser` picks
/// the 1-based blocking index on `P(T)`; returning `None` leaves the
/// coloring untouched and reports [`FanError::BlockingFailed`].
pub fn repair_normal_fan(
    c: &mut PartialColoring<'_>,
    fan: &NormalFan,
    t: Option<usize>,
    chooser: &mut dyn FnMut(&AlternatingPath) -> Option<usize>,
) -> Result<RepairOutcome, FanError> {
    repair_with(c, &RepairItem::Normal(fan.clone()), t, chooser)
}

pub fn repair_sub_reverse_fan(
    c: &mut PartialColoring<'_>,
    sub: &SubReverseFan,
    t: Option<usize>,
    chooser: &mut dyn FnMut(&AlternatingPath) -> Option<usize>,
) -> Result<RepairOutcome, FanError> {
    repair_with(c, &RepairItem::Sub(sub.clone()), t, chooser)
}

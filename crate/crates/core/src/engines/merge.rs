//! Merging freshly grown normal fans into the set of active `α`-fans.
//!
//! A new fan `F_v` is cut at its first leaf `x` that already belongs to an
//! active fan. Two normal fans meeting at `x` both shift up to `x` and give
//! up their `x` edge; `x` becomes the center of a reverse fan with leaves
//! `w` and `v`. A normal fan meeting a reverse fan at its center joins it as
//! a new leaf. Neither step changes the number of uncolored edges.
//!
//! Growth prefers `α` for `m(x)`, so a leaf that misses `α` ends its fan.
//! If that leaf is taken, `vx` is simply colored `α` and the fan that owned
//! `x` is regrown if the new edge invalidated it.

use std::collections::{HashMap, VecDeque};

use crate::fans::{grow_normal_fan, FanError, NormalFan, ReverseFan};
use crate::graph::VertexId;
use crate::palette::{Color, PartialColoring, Slot};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MergeEvent {
    /// `F_v` met no active fan and became active.
    Activated { v: VertexId },
    /// `F_v` and `F_w` met at leaf `x`, which became a reverse-fan center.
    NormalNormal { v: VertexId, w: VertexId, x: VertexId },
    /// `F_v` joined the reverse fan centered at `x`.
    NormalReverse { v: VertexId, x: VertexId },
    /// `F_v` ended at a taken leaf `x` missing `α`; `vx` was colored `α`.
    ClosedDirect { v: VertexId, x: VertexId },
    /// The active fan at `w` was invalidated and grown again.
    Regrown { w: VertexId },
    /// The active fan at `w` was invalidated and `w` no longer qualifies.
    Dropped { w: VertexId },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Owner {
    Normal(usize),
    Reverse(usize),
}

/// Active `α`-fans of one `(γ, α)` step.
#[derive(Debug, Clone)]
pub struct FanSet {
    pub alpha: Color,
    normal: Vec<Option<NormalFan>>,
    reverse: Vec<Option<ReverseFan>>,
    owner: HashMap<VertexId, Owner>,
}

impl FanSet {
    pub fn new(alpha: Color) -> Self {
        FanSet {
            alpha,
            normal: Vec::new(),
            reverse: Vec::new(),
            owner: HashMap::new(),
        }
    }

    pub fn normal_fans(&self) -> impl Iterator<Item = &NormalFan> {
        self.normal.iter().flatten()
    }

    pub fn reverse_fans(&self) -> impl Iterator<Item = &ReverseFan> {
        self.reverse.iter().flatten()
    }

    pub fn into_parts(self) -> (Vec<NormalFan>, Vec<ReverseFan>) {
        (
            self.normal.into_iter().flatten().collect(),
            self.reverse.into_iter().flatten().collect(),
        )
    }

    pub fn owns(&self, v: VertexId) -> bool {
        self.owner.contains_key(&v)
    }

    /// Counts every vertex over all active fans; any repeat is reported.
    pub fn check_disjoint(&self) -> Result<(), VertexId> {
        let mut seen = std::collections::HashSet::new();
        let all = self
            .normal_fans()
            .flat_map(|f| f.vertices().collect::<Vec<_>>())
            .chain(self.reverse_fans().flat_map(|f| f.vertices().collect::<Vec<_>>()));
        for v in all {
            if !seen.insert(v) {
                return Err(v);
            }
        }
        Ok(())
    }

    fn insert_normal(&mut self, fan: NormalFan) {
        let idx = self.normal.len();
        for v in fan.vertices() {
            self.owner.insert(v, Owner::Normal(idx));
        }
        self.normal.push(Some(fan));
    }

    fn take_normal(&mut self, idx: usize) -> NormalFan {
        let fan = self.normal[idx].take().expect("active fan");
        for v in fan.vertices() {
            self.owner.remove(&v);
        }
        fan
    }

    fn insert_reverse(&mut self, fan: ReverseFan) {
        let idx = self.reverse.len();
        for v in fan.vertices() {
            self.owner.insert(v, Owner::Reverse(idx));
        }
        self.reverse.push(Some(fan));
    }

    fn qualifies(&self, c: &PartialColoring<'_>, v: VertexId) -> bool {
        c.is_missing(v, self.alpha) && c.is_incomplete(v) && !self.owns(v)
    }
}

/// Grows a fan at every qualifying center of one class and merges the fans
/// one by one into `set`.
pub fn merge_class(
    c: &mut PartialColoring<'_>,
    set: &mut FanSet,
    centers: &[VertexId],
    events: &mut Vec<MergeEvent>,
) -> Result<(), FanError> {
    let alpha = set.alpha;
    let mut work: VecDeque<NormalFan> = VecDeque::new();
    for &v in centers {
        if set.qualifies(c, v) {
            work.push_back(grow_normal_fan(c, v, alpha, None, Some(alpha))?);
        }
    }
    while let Some(mut fan) = work.pop_front() {
        if set.owns(fan.center) {
            continue;
        }
        if !fan.is_valid(c) {
            if !set.qualifies(c, fan.center) {
                continue;
            }
            fan = grow_normal_fan(c, fan.center, alpha, None, Some(alpha))?;
        }
        if let Some(regrow) = merge_one(c, set, fan, events)? {
            work.push_front(regrow);
        }
    }
    Ok(())
}

/// Merges one valid fan. Returns a fan that has to be merged again after it
/// was invalidated by this step.
fn merge_one(
    c: &mut PartialColoring<'_>,
    set: &mut FanSet,
    fan: NormalFan,
    events: &mut Vec<MergeEvent>,
) -> Result<Option<NormalFan>, FanError> {
    let alpha = set.alpha;
    let v = fan.center;
    let hit = fan
        .leaves
        .iter()
        .enumerate()
        .find_map(|(i, x)| set.owner.get(x).map(|&o| (i + 1, *x, o)));
    let Some((a, x, owner)) = hit else {
        set.insert_normal(fan);
        events.push(MergeEvent::Activated { v });
        return Ok(None);
    };
    let ea = fan.edges[a - 1];

    if fan.m[a - 1] == alpha {
        let k = fan.degree();
        debug_assert_eq!(a, k);
        let mut batch = fan.shift_batch(k);
        batch.push((fan.edges[k - 1], Slot::Real(alpha)));
        c.apply(&batch)?;
        events.push(MergeEvent::ClosedDirect { v, x });
        return Ok(match owner {
            Owner::Normal(idx) => {
                let other = set.normal[idx].as_ref().expect("active fan");
                if other.is_valid(c) {
                    None
                } else {
                    let w = set.take_normal(idx).center;
                    regrow(c, set, w, events)?
                }
            }
            Owner::Reverse(idx) => {
                let r = set.reverse[idx].as_mut().expect("active fan");
                let pos = r
                    .leaves
                    .iter()
                    .position(|&l| l == x)
                    .ok_or_else(|| FanError::Structure(format!("{x} misses {alpha} but centers a reverse fan")))?;
                r.leaves.remove(pos);
                r.edges.remove(pos);
                set.owner.remove(&x);
                if r.degree() >= 2 {
                    None
                } else {
                    let r = set.reverse[idx].take().unwrap();
                    for u in r.vertices() {
                        set.owner.remove(&u);
                    }
                    match r.leaves.first() {
                        Some(&y) => regrow(c, set, y, events)?,
                        None => None,
                    }
                }
            }
        });
    }

    match owner {
        Owner::Normal(idx) => {
            let other = set.normal[idx].as_ref().expect("active fan");
            let w = other.center;
            let b = other.leaf_index(x).ok_or_else(|| {
                FanError::Structure(format!("fan at {v} reaches the center of the active fan at {w}"))
            })?;
            other
                .check(c)
                .map_err(|_| FanError::Structure(format!("active fan at {w} is stale")))?;
            let eb = other.edges[b - 1];
            let mut batch = fan.shift_batch(a);
            batch.push((ea, Slot::Uncolored));
            batch.extend(other.shift_batch(b));
            batch.push((eb, Slot::Uncolored));
            c.apply(&batch)?;
            if c.is_missing(x, alpha) {
                return Err(FanError::Structure(format!("{x} misses {alpha} after merging at it")));
            }
            set.take_normal(idx);
            set.insert_reverse(ReverseFan {
                center: x,
                alpha,
                leaves: vec![w, v],
                edges: vec![eb, ea],
                colors: Vec::new(),
            });
            events.push(MergeEvent::NormalNormal { v, w, x });
        }
        Owner::Reverse(idx) => {
            let r = set.reverse[idx].as_ref().expect("active fan");
            if r.center != x {
                return Err(FanError::Structure(format!(
                    "fan at {v} meets the reverse fan at {} in leaf {x}",
                    r.center
                )));
            }
            let mut batch = fan.shift_batch(a);
            batch.push((ea, Slot::Uncolored));
            c.apply(&batch)?;
            set.reverse[idx].as_mut().unwrap().push_leaf(v, ea);
            set.owner.insert(v, Owner::Reverse(idx));
            events.push(MergeEvent::NormalReverse { v, x });
        }
    }
    Ok(None)
}

fn regrow(
    c: &PartialColoring<'_>,
    set: &FanSet,
    w: VertexId,
    events: &mut Vec<MergeEvent>,
) -> Result<Option<NormalFan>, FanError> {
    if set.qualifies(c, w) {
        events.push(MergeEvent::Regrown { w });
        Ok(Some(grow_normal_fan(c, w, set.alpha, None, Some(set.alpha))?))
    } else {
        events.push(MergeEvent::Dropped { w });
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{EdgeId, Graph};

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    #[test]
    fn two_normal_fans_meet_at_common_leaf() {
        // v=0 and w=2 both have one uncolored edge to x=1, which holds α=1
        // on its edge to 3.
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (1, 3)]).unwrap();
        let mut c = PartialColoring::vizing(&g);
        c.set(EdgeId(2), Slot::Real(1)).unwrap();
        let mut set = FanSet::new(1);
        let mut events = Vec::new();
        merge_class(&mut c, &mut set, &[v(0)], &mut events).unwrap();
        merge_class(&mut c, &mut set, &[v(2)], &mut events).unwrap();
        assert_eq!(c.uncolored_count(), 2);
        let (normal, reverse) = set.clone().into_parts();
        assert!(normal.is_empty());
        assert_eq!(reverse.len(), 1);
        assert_eq!(reverse[0].center, v(1));
        assert_eq!(reverse[0].leaves, vec![v(0), v(2)]);
        assert!(reverse[0].check(&c).is_ok());
        assert_eq!(
            events.last(),
            Some(&MergeEvent::NormalNormal {
                v: v(2),
                w: v(0),
                x: v(1)
            })
        );
    }

    #[test]
    fn normal_fan_joins_reverse_center() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (1, 3), (1, 4)]).unwrap();
        let mut c = PartialColoring::vizing(&g);
        c.set(EdgeId(2), Slot::Real(1)).unwrap();
        let mut set = FanSet::new(1);
        let mut events = Vec::new();
        for center in [0, 2, 4] {
            merge_class(&mut c, &mut set, &[v(center)], &mut events).unwrap();
        }
        assert_eq!(c.uncolored_count(), 3);
        let reverse: Vec<_> = set.reverse_fans().collect();
        assert_eq!(reverse.len(), 1);
        assert_eq!(reverse[0].leaves, vec![v(0), v(2), v(4)]);
        assert_eq!(events.last(), Some(&MergeEvent::NormalReverse { v: v(4), x: v(1) }));
        assert!(set.check_disjoint().is_ok());
    }

    #[test]
    fn taken_leaf_missing_alpha_is_colored_directly() {
        // x=1 misses α, so both fans close at x; the second one colors
        // its edge with α and the first one has to be regrown.
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let mut c = PartialColoring::vizing(&g);
        let mut set = FanSet::new(1);
        let mut events = Vec::new();
        merge_class(&mut c, &mut set, &[v(0)], &mut events).unwrap();
        merge_class(&mut c, &mut set, &[v(2)], &mut events).unwrap();
        assert_eq!(c.uncolored_count(), 1);
        assert!(events.contains(&MergeEvent::ClosedDirect { v: v(2), x: v(1) }));
        assert!(set.check_disjoint().is_ok());
        for f in set.normal_fans() {
            assert!(f.is_valid(&c));
        }
    }
}

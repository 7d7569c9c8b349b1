//! Item repair for bipartite graphs with a palette of `Δ` colors. An
//! alternating path from `u` can never come back to `v`, so an `α`-edge
//! needs no fan at all.

use std::collections::BTreeMap;

use super::wave::Runner;
use super::EngineError;
use crate::fans::{split_sub_reverse, AlphaEdge, RepairItem, ReverseFan};
use crate::graph::{EdgeId, VertexId};
use crate::locality::maximal_matching;
use crate::palette::{Color, Slot};

pub(crate) fn run(r: &mut Runner<'_>) -> Result<(), EngineError> {
    let g = r.g;
    if g.edge_count() == 0 {
        return Ok(());
    }
    let palette = r.c.palette();
    while r.c.uncolored_count() > 0 {
        let before = r.begin_iteration();
        for alpha in 1..=palette {
            color_matching(r, alpha)?;
            let items = activate(r, alpha)?;
            if items.is_empty() {
                continue;
            }
            for beta in 1..=palette {
                let round: Vec<RepairItem> = items.iter().filter(|i| i.beta() == beta).cloned().collect();
                r.beta_round(&round)?;
                if r.failed {
                    return r.end_iteration(before);
                }
            }
        }
        r.end_iteration(before)?;
    }
    Ok(())
}

/// Colors a maximal matching among uncolored edges whose endpoints both miss
/// `α`.
fn color_matching(r: &mut Runner<'_>, alpha: Color) -> Result<(), EngineError> {
    let candidates: Vec<EdgeId> =
        r.g.edge_ids()
            .filter(|&e| {
                let (u, v) = r.g.endpoints(e);
                r.c.slot(e) == Slot::Uncolored && r.c.is_missing(u, alpha) && r.c.is_missing(v, alpha)
            })
            .collect();
    if candidates.is_empty() {
        return Ok(());
    }
    let matching = maximal_matching(r.g, &candidates);
    let batch: Vec<_> = matching.iter().map(|&e| (e, Slot::Real(alpha))).collect();
    r.c.apply(&batch)?;
    r.charge_matching();
    r.checkpoint()
}

/// Every incomplete vertex `v` missing `α` activates its lowest uncolored
/// edge `vu`. A lone edge at `u` becomes an `α`-edge item; several become a
/// reverse fan at `u`, split into sub-fans.
fn activate(r: &mut Runner<'_>, alpha: Color) -> Result<Vec<RepairItem>, EngineError> {
    let mut groups: BTreeMap<VertexId, Vec<(VertexId, EdgeId)>> = BTreeMap::new();
    for v in r.g.vertices() {
        if !r.c.is_missing(v, alpha) {
            continue;
        }
        if let Some((u, e)) = r.c.first_uncolored_at(v) {
            groups.entry(u).or_default().push((v, e));
        }
    }
    if groups.is_empty() {
        return Ok(Vec::new());
    }
    r.charge("merge", "1", 1.0);
    let mut items = Vec::new();
    for (u, list) in groups {
        if let [(v, edge)] = list[..] {
            let beta = r.c.m(u).expect("incomplete vertex misses a color");
            items.push(RepairItem::Edge(AlphaEdge {
                v,
                u,
                edge,
                alpha,
                beta,
            }));
        } else {
            let mut fan = ReverseFan {
                center: u,
                alpha,
                leaves: list.iter().map(|&(v, _)| v).collect(),
                edges: list.iter().map(|&(_, e)| e).collect(),
                colors: Vec::new(),
            };
            fan.assign_colors(&r.c, true)?;
            items.extend(split_sub_reverse(&fan)?.into_iter().map(RepairItem::Sub));
        }
    }
    Ok(items)
}

//! Fan repair with merging. Centers come from one class of a proper vertex
//! coloring, so fans of different centers may share leaves; those are merged
//! into reverse fans, which are repaired through sub-fans with their own
//! `β`.

use super::merge::{merge_class, FanSet};
use super::wave::Runner;
use super::EngineError;
use crate::fans::{split_sub_reverse, FanError, RepairItem};
use crate::graph::{EdgeId, VertexId};
use crate::locality::{hop_coloring, maximal_matching};
use crate::palette::{Color, Slot};

pub(crate) fn run(r: &mut Runner<'_>) -> Result<(), EngineError> {
    let g = r.g;
    if g.edge_count() == 0 {
        return Ok(());
    }
    let delta = r.delta;
    let vertex_classes = hop_coloring(g, 1, delta + 1, None)?.classes();
    let palette = r.c.palette();

    while r.c.uncolored_count() > 0 {
        let before = r.begin_iteration();
        let charge = delta as f64 + r.log_star_n();
        r.charge("vertex_coloring", "Δ + log* n", charge);
        for class in &vertex_classes {
            for alpha in 1..=palette {
                color_matching(r, class, alpha)?;
                let items = grow_and_merge(r, class, alpha)?;
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
        }
        r.end_iteration(before)?;
    }
    Ok(())
}

/// Colors a maximal matching of the uncolored edges at the class whose
/// endpoints both miss `α`.
fn color_matching(r: &mut Runner<'_>, class: &[VertexId], alpha: Color) -> Result<(), EngineError> {
    let mut candidates: Vec<EdgeId> = class
        .iter()
        .flat_map(|&u| r.c.uncolored_at(u).map(|(_, e)| e).collect::<Vec<_>>())
        .filter(|&e| {
            let (a, b) = r.g.endpoints(e);
            r.c.is_missing(a, alpha) && r.c.is_missing(b, alpha)
        })
        .collect();
    candidates.sort_unstable();
    candidates.dedup();
    if candidates.is_empty() {
        return Ok(());
    }
    let matching = maximal_matching(r.g, &candidates);
    let batch: Vec<_> = matching.iter().map(|&e| (e, Slot::Real(alpha))).collect();
    r.c.apply(&batch)?;
    r.charge_matching();
    r.checkpoint()
}

/// Grows and merges the `α`-fans of the class, one 4-hop class at a time, and
/// returns the resulting repair items.
fn grow_and_merge(r: &mut Runner<'_>, class: &[VertexId], alpha: Color) -> Result<Vec<RepairItem>, EngineError> {
    let centers: Vec<VertexId> = class
        .iter()
        .copied()
        .filter(|&v| r.c.is_missing(v, alpha) && r.c.is_incomplete(v))
        .collect();
    if centers.is_empty() {
        return Ok(Vec::new());
    }
    let delta = r.delta;
    let hop = hop_coloring(r.g, 4, 4 * delta.pow(4), Some(&centers))?;
    let charge = delta.pow(4) as f64 + r.log_star_n();
    r.charge("four_hop_coloring", "Δ⁴ + log* n", charge);

    let mut set = FanSet::new(alpha);
    for sub in hop.classes() {
        merge_class(&mut r.c, &mut set, &sub, &mut r.merge_events)?;
        r.charge("merge", "1", 1.0);
        if r.cfg.assert_level != super::AssertLevel::Fast {
            if let Err(v) = set.check_disjoint() {
                return Err(FanError::Structure(format!("active fans share {v}")).into());
            }
        }
        r.checkpoint()?;
    }

    let (normal, reverse) = set.into_parts();
    let mut items: Vec<RepairItem> = normal.into_iter().map(RepairItem::Normal).collect();
    for mut fan in reverse {
        fan.assign_colors(&r.c, false)?;
        items.extend(split_sub_reverse(&fan)?.into_iter().map(RepairItem::Sub));
    }
    Ok(items)
}

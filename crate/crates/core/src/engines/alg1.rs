//! Fan repair over a 2-hop coloring: every class is an independent set in
//! `G²`, so fans grown from one class never share a vertex.

use super::wave::Runner;
use super::EngineError;
use crate::fans::{grow_normal_fan, RepairItem};
use crate::locality::hop_coloring;

pub(crate) fn run(r: &mut Runner<'_>) -> Result<(), EngineError> {
    let g = r.g;
    if g.edge_count() == 0 {
        return Ok(());
    }
    let delta = r.delta;
    let hop = hop_coloring(g, 2, delta * delta + 1, None)?;
    let charge = (delta * delta) as f64 + r.log_star_n();
    r.charge("two_hop_coloring", "Δ² + log* n", charge);
    let classes = hop.classes();
    let palette = r.c.palette();

    while r.c.uncolored_count() > 0 {
        let before = r.begin_iteration();
        for class in &classes {
            for alpha in 1..=palette {
                let fans = class
                    .iter()
                    .filter(|&&v| r.c.is_missing(v, alpha) && r.c.is_incomplete(v))
                    .map(|&v| grow_normal_fan(&r.c, v, alpha, None, None))
                    .collect::<Result<Vec<_>, _>>()?;
                if fans.is_empty() {
                    continue;
                }
                for beta in 1..=palette {
                    let items: Vec<RepairItem> = fans
                        .iter()
                        .filter(|f| f.beta() == beta)
                        .cloned()
                        .map(RepairItem::Normal)
                        .collect();
                    r.beta_round(&items)?;
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

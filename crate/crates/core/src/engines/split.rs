//! `(1+ε)Δ` colors by recursive degree splitting.
//!
//! Each split walks an Euler circuit per component (odd-degree vertices are
//! joined to one virtual vertex first) and puts alternate edges on alternate
//! sides, so every vertex keeps at most `⌈d/2⌉ + 1` edges on each side. The
//! `2^h` leaves are colored with disjoint palettes.

use super::params::log2_n;
use super::{run, Algorithm, EngineError, RunConfig, RunReport};
use crate::graph::{EdgeId, Graph};
use crate::locality::RoundLedger;
use crate::palette::Color;

#[derive(Debug, Clone, PartialEq)]
pub struct SplitConfig {
    pub epsilon: f64,
    pub base: RunConfig,
    /// Overrides the computed recursion depth.
    pub force_levels: Option<usize>,
}

/// Degree check for one split: `child ≤ (1/2 + ε')·parent + 4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelAudit {
    pub level: usize,
    pub parent_delta: usize,
    pub child_delta: usize,
    pub bound: f64,
}

impl LevelAudit {
    pub fn holds(&self) -> bool {
        self.child_delta as f64 <= self.bound
    }
}

#[derive(Debug, Clone)]
pub struct SplitOutcome {
    pub colors: Vec<Color>,
    pub colors_used: Color,
    pub levels: usize,
    pub epsilon_prime: f64,
    /// Edge sets of the leaves, in palette order.
    pub parts: Vec<Vec<EdgeId>>,
    /// Palette offset of every leaf.
    pub offsets: Vec<Color>,
    pub audits: Vec<LevelAudit>,
    pub ledger: RoundLedger,
    pub reports: Vec<RunReport>,
}

/// Extra colors the base algorithm may use beyond `Δ`.
pub fn base_slack(alg: Algorithm) -> usize {
    match alg {
        Algorithm::Alg4 => 1,
        _ => 2,
    }
}

/// `(h, ε')` for a graph of maximum degree `delta`. `ε` is capped at 1/4.
pub fn split_levels(delta: usize, epsilon: f64, z: usize) -> (usize, f64) {
    let eps = epsilon.min(0.25);
    let target = 16.0 * (z as f64 + 8.0) / eps;
    let d = delta as f64;
    if d <= target {
        return (0, 0.0);
    }
    let eps_prime = eps / (32.0 * d.ln() / (4.0f64 / 3.0).ln());
    let mut h = 0;
    let mut value = d;
    while value > target {
        value *= 0.5 + eps_prime;
        h += 1;
    }
    (h, eps_prime)
}

/// Splits the edges in two halves by Euler-circuit alternation.
pub fn euler_split(g: &Graph) -> (Vec<EdgeId>, Vec<EdgeId>) {
    let n = g.vertex_count();
    let virt = n;
    let mut ends: Vec<(usize, usize)> = g.edges().iter().map(|&(u, v)| (u.index(), v.index())).collect();
    let real = ends.len();
    for v in g.vertices() {
        if g.degree(v) % 2 == 1 {
            ends.push((v.index(), virt));
        }
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for (e, &(u, v)) in ends.iter().enumerate() {
        adj[u].push(e);
        adj[v].push(e);
    }
    let mut used = vec![false; ends.len()];
    let mut next = vec![0usize; n + 1];
    let mut side = vec![false; ends.len()];
    let starts = std::iter::once(virt).chain(0..n);
    for start in starts {
        if next[start] == adj[start].len() {
            continue;
        }
        let mut circuit = Vec::new();
        let mut stack: Vec<(usize, Option<usize>)> = vec![(start, None)];
        while let Some(&(v, via)) = stack.last() {
            while next[v] < adj[v].len() && used[adj[v][next[v]]] {
                next[v] += 1;
            }
            if next[v] == adj[v].len() {
                stack.pop();
                circuit.extend(via);
            } else {
                let e = adj[v][next[v]];
                used[e] = true;
                let (a, b) = ends[e];
                stack.push((if a == v { b } else { a }, Some(e)));
            }
        }
        for (i, e) in circuit.into_iter().enumerate() {
            side[e] = i % 2 == 1;
        }
    }
    let mut halves = (Vec::new(), Vec::new());
    for (e, &right) in side.iter().enumerate().take(real) {
        if right {
            halves.1.push(EdgeId(e as u32));
        } else {
            halves.0.push(EdgeId(e as u32));
        }
    }
    halves
}

fn max_degree_of(g: &Graph, edges: &[EdgeId]) -> usize {
    let mut deg = vec![0usize; g.vertex_count()];
    for &e in edges {
        let (u, v) = g.endpoints(e);
        deg[u.index()] += 1;
        deg[v.index()] += 1;
    }
    deg.into_iter().max().unwrap_or(0)
}

pub fn split_and_color(g: &Graph, cfg: &SplitConfig) -> Result<SplitOutcome, EngineError> {
    let delta = g.max_degree();
    let z = base_slack(cfg.base.algorithm);
    if cfg.epsilon.is_nan() || cfg.epsilon <= 0.0 || (delta > 0 && cfg.epsilon < z as f64 / delta as f64) {
        return Err(EngineError::Parameter(format!(
            "ε = {} must be at least z/Δ = {z}/{delta}",
            cfg.epsilon
        )));
    }
    let (computed, mut eps_prime) = split_levels(delta, cfg.epsilon, z);
    let levels = cfg.force_levels.unwrap_or(computed);
    if levels > 0 && eps_prime == 0.0 {
        let d = (delta.max(2)) as f64;
        eps_prime = cfg.epsilon.min(0.25) / (32.0 * d.ln() / (4.0f64 / 3.0).ln());
    }
    let mut ledger = RoundLedger::default();
    let mut audits = Vec::new();
    let mut parts: Vec<Vec<EdgeId>> = vec![g.edge_ids().collect()];
    for level in 1..=levels {
        let mut next = Vec::with_capacity(parts.len() * 2);
        for part in &parts {
            let parent_delta = max_degree_of(g, part);
            let (sub, map) = g.edge_subgraph(part);
            let (a, b) = euler_split(&sub);
            let charge = (1.0 / eps_prime) * (1.0 / eps_prime).log2() * log2_n(g.vertex_count());
            ledger.charge("split", "(1/ε') · log(1/ε') · log n", charge);
            for half in [a, b] {
                let half: Vec<EdgeId> = half.into_iter().map(|e| map[e.index()]).collect();
                audits.push(LevelAudit {
                    level,
                    parent_delta,
                    child_delta: max_degree_of(g, &half),
                    bound: (0.5 + eps_prime) * parent_delta as f64 + 4.0,
                });
                next.push(half);
            }
        }
        parts = next;
    }

    let mut colors = vec![0 as Color; g.edge_count()];
    let mut offsets = Vec::with_capacity(parts.len());
    let mut reports = Vec::with_capacity(parts.len());
    let mut offset: Color = 0;
    for part in &parts {
        let (sub, map) = g.edge_subgraph(part);
        let out = run(&sub, &cfg.base)?;
        let sub_colors = out
            .colors
            .ok_or_else(|| EngineError::Parameter("base algorithm froze inside split_and_color".to_string()))?;
        for (i, c) in sub_colors.into_iter().enumerate() {
            colors[map[i].index()] = offset + c;
        }
        offsets.push(offset);
        ledger.extend(&out.report.ledger);
        offset += out.report.colors_used;
        reports.push(out.report);
    }
    Ok(SplitOutcome {
        colors,
        colors_used: offset,
        levels,
        epsilon_prime: eps_prime,
        parts,
        offsets,
        audits,
        ledger,
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engines::StrategyKind;
    use crate::graph::{generate, GraphKind};

    #[test]
    fn euler_split_halves_regular_degree() {
        for d in [3usize, 4, 6, 7] {
            let g = generate(&GraphKind::RandomRegular { n: 40, d }, 5).unwrap();
            let (a, b) = euler_split(&g);
            assert_eq!(a.len() + b.len(), g.edge_count());
            let bound = d.div_ceil(2) + 1;
            assert!(max_degree_of(&g, &a) <= bound);
            assert!(max_degree_of(&g, &b) <= bound);
        }
    }

    #[test]
    fn small_degree_needs_no_split() {
        assert_eq!(split_levels(64, 0.25, 2).0, 0);
        assert_eq!(split_levels(640, 0.25, 2).0, 0);
        assert!(split_levels(641, 0.25, 2).0 >= 1);
    }

    #[test]
    fn epsilon_below_threshold_is_rejected() {
        let g = generate(&GraphKind::Complete(5), 0).unwrap();
        let cfg = SplitConfig {
            epsilon: 0.1,
            base: RunConfig::new(Algorithm::Alg1, StrategyKind::Greedy),
            force_levels: None,
        };
        assert!(matches!(split_and_color(&g, &cfg), Err(EngineError::Parameter(_))));
    }
}

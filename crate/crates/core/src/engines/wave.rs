//! Shared run state and the wave scheduler used by all three algorithms.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::merge::MergeEvent;
use super::params::{default_t, log2_n, one_plus_delta, repair_budget};
use super::potential::Potential;
use super::report::{IterationRecord, RunReport};
use super::strategy::BlockingStrategy;
use super::{Algorithm, AssertLevel, EngineError, RunConfig, RunOutcome, RunStats, StrategyKind};
use crate::fans::{FanError, RepairCase, RepairItem, RepairPlan};
use crate::graph::{Graph, VertexId};
use crate::locality::{conflict_graph_coloring, log_star, RoundLedger, CONFLICT_COLORS};
use crate::palette::{finalize_star_edges, Color, PartialColoring, Slot};

fn mix(a: u64, b: u64) -> u64 {
    let mut z = a ^ b.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Order-independent identity of an item, used to derive its RNG stream.
fn item_key(item: &RepairItem) -> u64 {
    let center = u64::from(item.center().0);
    match item {
        RepairItem::Normal(_) => center << 2,
        RepairItem::Sub(s) => (center << 2 | 1) ^ ((s.index as u64) << 40),
        RepairItem::Edge(_) => center << 2 | 2,
    }
}

pub(crate) struct Runner<'g> {
    pub g: &'g Graph,
    pub c: PartialColoring<'g>,
    pub cfg: RunConfig,
    pub ledger: RoundLedger,
    pub stats: RunStats,
    pub merge_events: Vec<MergeEvent>,
    pub failed: bool,
    pub delta: usize,
    big_t: u64,
    t_limit: usize,
    one_plus_delta: f64,
    strategy: BlockingStrategy,
    potential: Option<Potential>,
    phi_trace: Vec<f64>,
    executions: u64,
    iterations: Vec<IterationRecord>,
    log2n: f64,
    log_star_n: f64,
}

impl<'g> Runner<'g> {
    pub fn new(g: &'g Graph, cfg: &RunConfig) -> Self {
        let n = g.vertex_count();
        let delta = g.max_degree();
        let palette = match cfg.algorithm {
            Algorithm::Alg4 => delta,
            _ => delta + 1,
        } as Color;
        let big_t = cfg
            .t
            .unwrap_or_else(|| default_t(cfg.algorithm, cfg.strategy, delta, n, cfg.lambda));
        let t_limit = usize::try_from(big_t).unwrap_or(usize::MAX);
        let opd = one_plus_delta(n, cfg.lambda);
        let potential = (cfg.strategy == StrategyKind::Greedy).then(|| {
            let t = match cfg.t {
                Some(t) => ((t as f64 / (2.0 * cfg.lambda)) as u64).max(1),
                None => repair_budget(cfg.algorithm, delta, n),
            };
            Potential::new(n, t, big_t as f64, opd, cfg.lambda)
        });
        let phi_trace = potential.iter().map(Potential::ln_value).collect();
        Runner {
            g,
            c: PartialColoring::new(g, palette).with_policy(cfg.policy),
            cfg: cfg.clone(),
            ledger: RoundLedger::default(),
            stats: RunStats::default(),
            merge_events: Vec::new(),
            failed: false,
            delta,
            big_t,
            t_limit,
            one_plus_delta: opd,
            strategy: BlockingStrategy {
                kind: cfg.strategy,
                t: t_limit,
                one_plus_delta: opd,
                freeze: cfg.freeze,
            },
            potential,
            phi_trace,
            executions: 0,
            iterations: Vec::new(),
            log2n: log2_n(n),
            log_star_n: log_star(n as f64),
        }
    }

    pub fn log_star_n(&self) -> f64 {
        self.log_star_n
    }

    pub fn charge(&mut self, phase: &str, formula: &str, charge: f64) {
        self.ledger.charge(phase, formula, charge);
    }

    pub fn charge_matching(&mut self) {
        let charge = self.delta as f64 + self.log2n;
        self.charge("maximal_matching", "Δ + log n (cited bound: Δ + log* n)", charge);
    }

    pub fn verify(&mut self) -> Result<(), EngineError> {
        self.stats.verifications += 1;
        let violations = self.c.verify_proper();
        if !violations.is_empty() {
            return Err(EngineError::Improper(violations));
        }
        self.c.audit().map_err(EngineError::Audit)
    }

    /// Verification point after a batch of mutations outside the repair waves.
    pub fn checkpoint(&mut self) -> Result<(), EngineError> {
        if self.cfg.assert_level != AssertLevel::Fast {
            self.verify()?;
        }
        Ok(())
    }

    pub fn begin_iteration(&self) -> usize {
        self.c.uncolored_count()
    }

    pub fn end_iteration(&mut self, before: usize) -> Result<(), EngineError> {
        let after = self.c.uncolored_count();
        self.iterations.push(IterationRecord {
            uncolored_before: before,
            uncolored_after: after,
        });
        if after == before && !self.failed {
            return Err(EngineError::Stalled {
                iteration: self.iterations.len(),
                uncolored: after,
            });
        }
        Ok(())
    }

    /// Closes one execution of the repair step: ledger, `Φ`, verification.
    fn close_execution(&mut self, phase: &str, formula: &str, charge: f64) -> Result<(), EngineError> {
        self.executions += 1;
        self.charge(phase, formula, charge);
        if let Some(p) = &mut self.potential {
            let (before, after) = p.step(self.c.loads());
            self.phi_trace.push(after);
            if !Potential::is_monotone(before, after) {
                return Err(EngineError::PotentialIncrease {
                    q: p.q(),
                    before,
                    after,
                });
            }
        }
        self.checkpoint()
    }

    fn plan(&self, item: &RepairItem) -> Result<Option<RepairPlan>, EngineError> {
        match item.plan(&self.c, Some(self.t_limit)) {
            Ok(plan) => Ok(Some(plan)),
            Err(FanError::Stale(_)) => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    /// One `β` round: conflict coloring of the items, one wave per conflict
    /// class, then the semi-destroyed sub-fans.
    pub fn beta_round(&mut self, items: &[RepairItem]) -> Result<(), EngineError> {
        if self.failed || items.is_empty() {
            return Ok(());
        }
        let mut owner: HashMap<VertexId, usize> = HashMap::new();
        for (i, item) in items.iter().enumerate() {
            for v in item.vertices() {
                owner.insert(v, i);
            }
        }
        let mut arcs = Vec::new();
        for (i, item) in items.iter().enumerate() {
            let Some(plan) = self.plan(item)? else { continue };
            if let Some(p) = plan.path().filter(|p| p.is_maximal() && !p.is_empty()) {
                match owner.get(&p.end()) {
                    Some(&j) if j != i => arcs.push((i, j)),
                    _ => {}
                }
            }
        }
        let classes = conflict_graph_coloring(items.len(), &arcs)?;
        let charge = self.big_t as f64 * self.log2n;
        self.charge("conflict_coloring", "T · log n", charge);
        let mut done = vec![false; items.len()];
        for class in 0..CONFLICT_COLORS {
            let members: Vec<usize> = (0..items.len()).filter(|&i| classes[i] == class).collect();
            self.run_waves(items, members, &mut done)?;
            if self.failed {
                return Ok(());
            }
        }
        self.semi_destroyed(items, &done)
    }

    fn run_waves(&mut self, items: &[RepairItem], mut queue: Vec<usize>, done: &mut [bool]) -> Result<(), EngineError> {
        while !queue.is_empty() {
            let mut admitted: Vec<(usize, RepairPlan)> = Vec::new();
            let mut spill = Vec::new();
            let mut on_paths: HashSet<VertexId> = HashSet::new();
            let mut on_items: HashSet<VertexId> = HashSet::new();
            let mut path_ends: HashSet<VertexId> = HashSet::new();
            for i in queue {
                let Some(plan) = self.plan(&items[i])? else {
                    self.stats.destroyed += 1;
                    continue;
                };
                let verts = items[i].vertices();
                let path_vertices = plan.path().map_or(&[][..], |p| &p.vertices[..]);
                let end = plan.path().filter(|p| p.is_maximal() && !p.is_empty()).map(|p| p.end());
                let clash = path_vertices.iter().any(|v| on_paths.contains(v))
                    || verts.iter().any(|v| on_items.contains(v) || path_ends.contains(v))
                    || end.is_some_and(|e| on_items.contains(&e));
                if clash {
                    spill.push(i);
                    continue;
                }
                on_paths.extend(path_vertices.iter().copied());
                on_items.extend(verts);
                path_ends.extend(end);
                admitted.push((i, plan));
            }
            if admitted.is_empty() {
                break;
            }
            self.stats.spillovers += spill.len() as u64;
            queue = spill;
            let wave = self.stats.waves;
            self.stats.waves += 1;

            let snapshot = self.c.loads().to_vec();
            let seed = self.cfg.seed.unwrap_or(0);
            let mut blocks = vec![None; admitted.len()];
            for (k, (i, plan)) in admitted.iter().enumerate() {
                if let RepairPlan::Blocked(p) = plan {
                    let mut rng = ChaCha8Rng::seed_from_u64(mix(mix(seed, wave), item_key(&items[*i])));
                    match self.strategy.choose(p, &snapshot, &mut rng)? {
                        Some(b) => blocks[k] = Some(b),
                        None => {
                            self.failed = true;
                            return Ok(());
                        }
                    }
                }
            }

            let mut order: Vec<usize> = (0..admitted.len()).collect();
            if let Some(s) = self.cfg.shuffle_waves {
                order.shuffle(&mut ChaCha8Rng::seed_from_u64(mix(s, wave)));
            }
            for k in order {
                let (i, plan) = &admitted[k];
                let outcome = items[*i].execute(&mut self.c, plan, blocks[k])?;
                done[*i] = true;
                self.count(outcome.case);
                if let Some(star) = outcome.star {
                    let (u, v) = self.g.endpoints(star);
                    if let Some(p) = &mut self.potential {
                        p.add_load(self.c.load(u) - 1);
                        p.add_load(self.c.load(v) - 1);
                    }
                }
                if self.cfg.assert_level == AssertLevel::Debug {
                    self.verify()?;
                }
            }
            let charge = self.big_t as f64;
            self.close_execution("repair_wave", "T", charge)?;
        }
        Ok(())
    }

    /// Sub-fans whose center lost its `α` edge to another repair's path get
    /// one leaf edge colored `α` directly.
    fn semi_destroyed(&mut self, items: &[RepairItem], done: &[bool]) -> Result<(), EngineError> {
        let targets: Vec<usize> = (0..items.len())
            .filter(|&i| !done[i])
            .filter(|&i| matches!(&items[i], RepairItem::Sub(s) if s.is_semi_destroyed(&self.c)))
            .collect();
        if targets.is_empty() {
            return Ok(());
        }
        for i in targets {
            items[i].execute(&mut self.c, &RepairPlan::Direct, None)?;
            self.stats.semi_destroyed += 1;
            self.count(RepairCase::Direct);
            if self.cfg.assert_level == AssertLevel::Debug {
                self.verify()?;
            }
        }
        self.close_execution("semi_destroyed_repair", "1", 1.0)
    }

    fn count(&mut self, case: RepairCase) {
        let s = &mut self.stats;
        match case {
            RepairCase::Closes => s.closes += 1,
            RepairCase::Case1 => s.case1 += 1,
            RepairCase::Case2 => s.case2 += 1,
            RepairCase::Blocked => s.blocked += 1,
            RepairCase::Direct => s.direct += 1,
            RepairCase::Augmented => s.augmented += 1,
        }
    }

    pub fn finish(mut self) -> Result<RunOutcome<'g>, EngineError> {
        let colors = if self.failed {
            None
        } else {
            self.verify()?;
            if self.c.uncolored_count() > 0 {
                return Err(EngineError::Audit(format!(
                    "run ended with {} uncolored edges",
                    self.c.uncolored_count()
                )));
            }
            let colors = finalize_star_edges(&self.c)?;
            if self.c.slots().contains(&Slot::Star) {
                let charge = f64::from(self.c.max_load()) + self.log_star_n;
                self.charge("finalize", "ℓ(G) + log* n", charge);
            }
            Some(colors)
        };
        let colors_used = match &colors {
            Some(cs) => cs.iter().copied().max().unwrap_or(0),
            None => self
                .c
                .slots()
                .iter()
                .filter_map(|s| match s {
                    Slot::Real(c) => Some(*c),
                    _ => None,
                })
                .max()
                .unwrap_or(0),
        };
        let report = RunReport {
            algorithm: self.cfg.algorithm.to_string(),
            n: self.g.vertex_count(),
            m: self.g.edge_count(),
            delta: self.delta,
            strategy: self.cfg.strategy.to_string(),
            big_t: self.big_t,
            t_mode: if self.cfg.t.is_some() { "explicit" } else { "paper" }.to_string(),
            lambda: self.cfg.lambda,
            delta_param: self.one_plus_delta - 1.0,
            seed: self.cfg.seed,
            colors_used,
            ell_g: self.c.max_load(),
            iterations: self.iterations,
            repair_executions: self.executions,
            phi_trace: self.potential.as_ref().map(|_| self.phi_trace),
            ledger: self.ledger,
            failed: self.failed,
        };
        Ok(RunOutcome {
            coloring: self.c,
            colors,
            report,
            stats: self.stats,
            merge_events: self.merge_events,
            phi_drift: self.potential.map_or(0.0, |p| p.max_drift),
        })
    }
}

//! Where to put the blocking edge on a truncated path `P(T)`.

use rand::Rng;
use thiserror::Error;

use super::{FreezeMode, StrategyKind};
use crate::fans::AlternatingPath;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StrategyError {
    #[error("path of length {len} does not exceed T = {t}; no blocking edge is needed")]
    NotTruncated { len: usize, t: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockingStrategy {
    pub kind: StrategyKind,
    pub t: usize,
    pub one_plus_delta: f64,
    pub freeze: FreezeMode,
}

impl BlockingStrategy {
    /// Picks a 1-based index `i` so that `(v_{i-1}, v_i)` is blocked.
    /// `Ok(None)` is the random-empty failure that freezes a run.
    pub fn choose<R: Rng>(
        &self,
        path: &AlternatingPath,
        loads: &[u32],
        rng: &mut R,
    ) -> Result<Option<usize>, StrategyError> {
        if !path.exceeds || path.len() != self.t {
            return Err(StrategyError::NotTruncated {
                len: path.len(),
                t: self.t,
            });
        }
        let load = |i: usize| (loads[path.vertices[i - 1].index()], loads[path.vertices[i].index()]);
        Ok(match self.kind {
            StrategyKind::Uniform => Some(rng.gen_range(1..=self.t)),
            StrategyKind::RandomEmpty => {
                let empty: Vec<usize> = (1..=self.t).filter(|&i| load(i) == (0, 0)).collect();
                let fails = match self.freeze {
                    FreezeMode::Strict => 15 * empty.len() < self.t,
                    FreezeMode::Permissive => empty.is_empty(),
                };
                if fails {
                    None
                } else {
                    Some(empty[rng.gen_range(0..empty.len())])
                }
            }
            StrategyKind::Greedy => {
                let base = self.one_plus_delta;
                let cost = |i: usize| {
                    let (a, b) = load(i);
                    base.powi(a as i32) + base.powi(b as i32)
                };
                let mut best = 1;
                let mut best_cost = cost(1);
                for i in 2..=self.t {
                    let c = cost(i);
                    if c < best_cost {
                        best = i;
                        best_cost = c;
                    }
                }
                Some(best)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{EdgeId, VertexId};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn path(t: usize) -> AlternatingPath {
        AlternatingPath {
            alpha: 1,
            beta: 2,
            first: 1,
            vertices: (0..=t as u32).map(VertexId).collect(),
            edges: (0..t as u32).map(EdgeId).collect(),
            exceeds: true,
        }
    }

    fn strategy(kind: StrategyKind, t: usize) -> BlockingStrategy {
        BlockingStrategy {
            kind,
            t,
            one_plus_delta: 2.0,
            freeze: FreezeMode::Permissive,
        }
    }

    #[test]
    fn greedy_ties_go_to_first_edge() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = strategy(StrategyKind::Greedy, 4);
        assert_eq!(s.choose(&path(4), &[0; 5], &mut rng), Ok(Some(1)));
    }

    #[test]
    fn greedy_avoids_loaded_vertex() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = strategy(StrategyKind::Greedy, 2);
        // Edge 1 touches a loaded vertex, edge 2 does not.
        assert_eq!(s.choose(&path(2), &[1, 0, 0], &mut rng), Ok(Some(2)));
    }

    #[test]
    fn random_empty_fails_without_empty_edges() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = strategy(StrategyKind::RandomEmpty, 2);
        assert_eq!(s.choose(&path(2), &[0, 1, 0], &mut rng), Ok(None));
        let strict = BlockingStrategy {
            freeze: FreezeMode::Strict,
            ..strategy(StrategyKind::RandomEmpty, 30)
        };
        let mut loads = vec![1; 31];
        loads[0] = 0;
        loads[1] = 0;
        // One empty edge out of 30 is below T/15 = 2.
        assert_eq!(strict.choose(&path(30), &loads, &mut rng), Ok(None));
        loads[2] = 0;
        assert!(strict.choose(&path(30), &loads, &mut rng).unwrap().is_some());
    }

    #[test]
    fn untruncated_path_is_a_usage_error() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut p = path(3);
        p.exceeds = false;
        let s = strategy(StrategyKind::Uniform, 3);
        assert!(s.choose(&p, &[0; 4], &mut rng).is_err());
    }
}

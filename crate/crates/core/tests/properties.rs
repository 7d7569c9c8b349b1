//! Property tests checked against small independent oracles.

use std::collections::{HashSet, VecDeque};

use fanrepair::engines::potential::{potential_phi, Potential};
use fanrepair::engines::{run, Algorithm, BlockingStrategy, FreezeMode, RunConfig, StrategyKind};
use fanrepair::fans::{
    augment, grow_normal_fan, repair_normal_fan, walk_alternating_path, AlternatingPath, FanTerminal,
};
use fanrepair::graph::{distance_power, generate, EdgeId, Graph, GraphKind, VertexId};
use fanrepair::locality::{conflict_graph_coloring, hop_coloring, maximal_matching, CONFLICT_COLORS};
use fanrepair::palette::{finalize_star_edges, find_conflicts, sequential_vizing, Color, PartialColoring, Slot};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_graph() -> impl Strategy<Value = Graph> {
    (2usize..16, 0.05f64..0.7, any::<u64>()).prop_map(|(n, p, seed)| generate(&GraphKind::Gnp { n, p }, seed).unwrap())
}

fn bfs_within(g: &Graph, s: VertexId, k: usize) -> HashSet<VertexId> {
    let mut dist = vec![usize::MAX; g.vertex_count()];
    dist[s.index()] = 0;
    let mut queue = VecDeque::from([s]);
    let mut out = HashSet::new();
    while let Some(u) = queue.pop_front() {
        for &(w, _) in g.incident(u) {
            if dist[w.index()] == usize::MAX {
                dist[w.index()] = dist[u.index()] + 1;
                if dist[w.index()] <= k {
                    out.insert(w);
                    queue.push_back(w);
                }
            }
        }
    }
    out.remove(&s);
    out
}

/// A random proper partial coloring with palette `Δ + 1`.
fn random_partial<'g>(g: &'g Graph, density: f64, rng: &mut ChaCha8Rng) -> PartialColoring<'g> {
    let mut c = PartialColoring::vizing(g);
    for e in g.edge_ids() {
        if rng.gen_bool(density) {
            let (u, v) = g.endpoints(e);
            let free: Vec<Color> = c.missing(u).filter(|&x| c.is_missing(v, x)).collect();
            if !free.is_empty() {
                c.set(e, Slot::Real(free[rng.gen_range(0..free.len())])).unwrap();
            }
        }
    }
    c
}

/// Lowest color in `1..=p` not on an edge at `x`, from the slots alone.
fn lowest_missing(g: &Graph, slots: &[Slot], p: Color, x: VertexId) -> Color {
    let used: HashSet<Color> = g
        .incident(x)
        .iter()
        .filter_map(|&(_, e)| {
            if let Slot::Real(c) = slots[e.index()] {
                Some(c)
            } else {
                None
            }
        })
        .collect();
    (1..=p).find(|c| !used.contains(c)).unwrap()
}

/// Step-by-step fan construction: leaves, missing colors and terminal.
fn fan_oracle(
    g: &Graph,
    slots: &[Slot],
    p: Color,
    v: VertexId,
    first: EdgeId,
) -> (Vec<VertexId>, Vec<Color>, FanTerminal) {
    let at_v = |c: Color| {
        g.incident(v)
            .iter()
            .find(|&&(_, e)| slots[e.index()] == Slot::Real(c))
            .map(|&(x, _)| x)
    };
    let mut leaves = vec![g.other(first, v)];
    let mut ms: Vec<Color> = Vec::new();
    loop {
        let x = *leaves.last().unwrap();
        let mx = lowest_missing(g, slots, p, x);
        if at_v(mx).is_none() {
            ms.push(mx);
            return (leaves, ms, FanTerminal::Closes);
        }
        if let Some(j) = ms.iter().position(|&c| c == mx) {
            ms.push(mx);
            return (leaves, ms, FanTerminal::Repeats { j: j + 1 });
        }
        ms.push(mx);
        leaves.push(at_v(mx).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn edge_list_round_trips(g in small_graph()) {
        let text = g.to_edge_list();
        let back = Graph::from_edge_list(&text).unwrap();
        prop_assert_eq!(back.edges(), g.edges());
        prop_assert_eq!(back.to_edge_list(), text);
    }

    #[test]
    fn distance_power_matches_bfs(g in small_graph(), k in prop::sample::select(vec![2usize, 4])) {
        let power = distance_power(&g, k, None);
        for v in g.vertices() {
            let got: HashSet<VertexId> = power.incident(v).iter().map(|&(w, _)| w).collect();
            prop_assert_eq!(got, bfs_within(&g, v, k));
        }
    }

    #[test]
    fn hop_coloring_separates_close_vertices(g in small_graph(), k in 1usize..=4) {
        let h = hop_coloring(&g, k, g.vertex_count() + 1, None).unwrap();
        for v in g.vertices() {
            prop_assert!(h.color(v) >= 1);
            for w in bfs_within(&g, v, k) {
                prop_assert_ne!(h.color(v), h.color(w));
            }
        }
    }

    #[test]
    fn matching_is_maximal(g in small_graph(), keep in prop::collection::vec(any::<bool>(), 120)) {
        let subset: Vec<EdgeId> = g.edge_ids().filter(|e| keep[e.index() % keep.len()]).collect();
        let m = maximal_matching(&g, &subset);
        let mut matched = HashSet::new();
        for &e in &m {
            let (u, v) = g.endpoints(e);
            prop_assert!(matched.insert(u) && matched.insert(v));
        }
        for e in subset {
            let (u, v) = g.endpoints(e);
            prop_assert!(matched.contains(&u) || matched.contains(&v));
        }
    }

    #[test]
    fn functional_graphs_use_three_colors(n in 1usize..2000, seed in any::<u64>(), density in 0.0f64..=1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let arcs: Vec<(usize, usize)> = (0..n)
            .filter(|_| rng.gen_bool(density))
            .collect::<Vec<_>>()
            .into_iter()
            .map(|a| (a, rng.gen_range(0..n)))
            .collect();
        let colors = conflict_graph_coloring(n, &arcs).unwrap();
        for &(a, b) in &arcs {
            prop_assert!(a == b || colors[a] != colors[b]);
        }
        prop_assert!(colors.iter().all(|&c| c < CONFLICT_COLORS));
    }

    #[test]
    fn legal_updates_keep_the_coloring_proper(g in small_graph(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = g.max_degree() as Color + 1;
        let mut c = PartialColoring::vizing(&g);
        if g.edge_count() == 0 {
            return Ok(());
        }
        for _ in 0..4 * g.edge_count() {
            let e = EdgeId(rng.gen_range(0..g.edge_count() as u32));
            let slot = match rng.gen_range(0..6) {
                0 => Slot::Uncolored,
                1 => Slot::Star,
                _ => Slot::Real(rng.gen_range(1..=p)),
            };
            let mut next = c.slots().to_vec();
            next[e.index()] = slot;
            let legal = find_conflicts(&g, &next).is_empty();
            let before = c.slots().to_vec();
            let result = c.set(e, slot);
            prop_assert_eq!(result.is_ok(), legal);
            if !legal {
                prop_assert_eq!(c.slots(), &before[..]);
            }
            prop_assert!(c.verify_proper().is_empty());
            c.audit().map_err(TestCaseError::fail)?;
        }
    }

    #[test]
    fn fan_growth_matches_oracle(g in small_graph(), seed in any::<u64>(), density in 0.2f64..0.9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_partial(&g, density, &mut rng);
        let p = c.palette();
        for v in g.vertices() {
            let Some((_, first)) = c.first_uncolored_at(v) else { continue };
            let alpha = c.m(v).unwrap();
            let fan = grow_normal_fan(&c, v, alpha, Some(first), None).unwrap();
            let (leaves, ms, terminal) = fan_oracle(&g, c.slots(), p, v, first);
            prop_assert_eq!(&fan.leaves, &leaves);
            prop_assert_eq!(&fan.m, &ms);
            prop_assert_eq!(fan.terminal, terminal);
            fan.check(&c).map_err(|e| TestCaseError::fail(e.to_string()))?;
        }
    }

    #[test]
    fn maximal_paths_are_disjoint_and_augment_properly(g in small_graph(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut c = random_partial(&g, 0.8, &mut rng);
        let p = c.palette();
        if p < 2 {
            return Ok(());
        }
        let alpha = rng.gen_range(1..=p);
        let beta = (1..=p).filter(|&b| b != alpha).nth(rng.gen_range(0..p as usize - 1)).unwrap();
        let mut paths: Vec<AlternatingPath> = Vec::new();
        let mut seen_edges = HashSet::new();
        for v in g.vertices() {
            if c.is_missing(v, alpha) || c.is_missing(v, beta) {
                let path = walk_alternating_path(&c, v, alpha, beta, None).unwrap();
                prop_assert!(path.is_maximal());
                if path.is_empty() || !seen_edges.insert(path.edges[0]) || path.end() < v {
                    continue;
                }
                paths.push(path);
            }
        }
        for (i, a) in paths.iter().enumerate() {
            for b in &paths[i + 1..] {
                prop_assert!(a.vertices.iter().all(|v| !b.vertices.contains(v)));
            }
        }
        for path in &paths {
            augment(&mut c, path, None).unwrap();
            prop_assert!(c.verify_proper().is_empty());
        }
    }

    #[test]
    fn truncated_repairs_color_exactly_one_edge(g in small_graph(), seed in any::<u64>(), t in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut c = random_partial(&g, 0.7, &mut rng);
        for v in g.vertices() {
            let Some((_, first)) = c.first_uncolored_at(v) else { continue };
            let alpha = c.m(v).unwrap();
            let fan = grow_normal_fan(&c, v, alpha, Some(first), None).unwrap();
            let before = c.uncolored_count();
            let loads = c.loads().to_vec();
            let out = repair_normal_fan(&mut c, &fan, Some(t), &mut |path| Some(rng.gen_range(1..=path.len())))
                .map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert_eq!(c.uncolored_count(), before - 1);
            prop_assert!(c.slot(out.colored) != Slot::Uncolored);
            prop_assert!(c.verify_proper().is_empty());
            let grown: Vec<usize> = (0..g.vertex_count()).filter(|&x| c.loads()[x] != loads[x]).collect();
            match out.star {
                Some(e) => {
                    let (a, b) = g.endpoints(e);
                    let mut ends = vec![a.index(), b.index()];
                    ends.sort_unstable();
                    prop_assert_eq!(grown, ends);
                    prop_assert!((0..g.vertex_count()).all(|x| c.loads()[x] - loads[x] <= 1));
                }
                None => prop_assert!(grown.is_empty()),
            }
        }
    }

    #[test]
    fn incremental_potential_matches_scratch(
        n in 1usize..50,
        steps in prop::collection::vec(prop::collection::vec(0usize..50, 0..4), 1..200),
        opd in 1.1f64..8.0,
        lambda in 1.0f64..8.0,
    ) {
        let t = steps.len() as u64 + 3;
        let big_t = 2.0 * t as f64 * lambda;
        let mut loads = vec![0u32; n];
        let mut phi = Potential::new(n, t, big_t, opd, lambda);
        for step in &steps {
            for &x in step {
                let x = x % n;
                phi.add_load(loads[x]);
                loads[x] += 1;
            }
            phi.step(&loads);
            let scratch = potential_phi(&loads, phi.q(), t, big_t, opd, lambda);
            let rel = (phi.ln_value().exp() - scratch.exp()).abs() / scratch.exp();
            prop_assert!(rel < 1e-12, "relative error {rel}");
        }
    }

    #[test]
    fn star_finalization_is_proper(g in small_graph(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut c = sequential_vizing(&g).unwrap();
        let stars: Vec<(EdgeId, Slot)> = g.edge_ids().filter(|_| rng.gen_bool(0.3)).map(|e| (e, Slot::Star)).collect();
        c.apply(&stars).unwrap();
        let colors = finalize_star_edges(&c).unwrap();
        let slots: Vec<Slot> = colors.iter().map(|&x| Slot::Real(x)).collect();
        prop_assert!(find_conflicts(&g, &slots).is_empty());
        let fresh: HashSet<Color> = colors.iter().copied().filter(|&x| x > c.palette()).collect();
        let ell = c.max_load() as usize;
        prop_assert!(fresh.len() <= (2 * ell).saturating_sub(1));
    }

    #[test]
    fn wave_order_does_not_matter(g in small_graph(), seed in any::<u64>(), t in 1u64..6) {
        for alg in [Algorithm::Alg1, Algorithm::Alg2] {
            for strategy in StrategyKind::ALL {
                let cfg = RunConfig::new(alg, strategy).with_t(t).with_seed(seed);
                let a = run(&g, &cfg).unwrap();
                let b = run(&g, &RunConfig { shuffle_waves: Some(seed ^ 1), ..cfg }).unwrap();
                prop_assert_eq!(a.coloring.slots(), b.coloring.slots());
                prop_assert_eq!(a.report.to_json(), b.report.to_json());
            }
        }
    }
}

#[test]
fn functional_graph_of_ten_thousand_nodes() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let n = 10_000;
    let arcs: Vec<(usize, usize)> = (0..n).map(|a| (a, rng.gen_range(0..n))).collect();
    let colors = conflict_graph_coloring(n, &arcs).unwrap();
    assert!(arcs.iter().all(|&(a, b)| a == b || colors[a] != colors[b]));
    assert!(colors.iter().all(|&c| c < CONFLICT_COLORS));
}

#[test]
fn sequential_vizing_on_random_graphs() {
    for seed in 0..200 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=60);
        let g = generate(
            &GraphKind::Gnp {
                n,
                p: rng.gen_range(0.02..0.4),
            },
            seed,
        )
        .unwrap();
        let c = sequential_vizing(&g).unwrap();
        assert_eq!(c.uncolored_count(), 0);
        assert!(c.verify_proper().is_empty());
        assert!(c
            .slots()
            .iter()
            .all(|s| matches!(s, Slot::Real(x) if *x as usize <= g.max_degree() + 1)));
    }
}

/// Random-empty placement with one loaded vertex on `P(T)`: the two edges
/// touching it are never chosen and the rest are hit uniformly.
#[test]
fn random_empty_is_uniform_over_empty_edges() {
    let t = 10;
    let g = generate(&GraphKind::Path(t + 2), 0).unwrap();
    let path = AlternatingPath {
        alpha: 1,
        beta: 2,
        first: 1,
        vertices: (0..=t as u32).map(VertexId).collect(),
        edges: (0..t as u32).map(EdgeId).collect(),
        exceeds: true,
    };
    let mut loads = vec![0u32; g.vertex_count()];
    let occupied = 4;
    loads[occupied] = 1;
    let strategy = BlockingStrategy {
        kind: StrategyKind::RandomEmpty,
        t,
        one_plus_delta: 2.0,
        freeze: FreezeMode::Permissive,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let draws = 100_000;
    let mut counts = vec![0u64; t + 1];
    for _ in 0..draws {
        counts[strategy.choose(&path, &loads, &mut rng).unwrap().unwrap()] += 1;
    }
    // Edge i joins v_{i-1} and v_i.
    assert_eq!(counts[occupied], 0);
    assert_eq!(counts[occupied + 1], 0);
    let eligible: Vec<usize> = (1..=t).filter(|&i| i != occupied && i != occupied + 1).collect();
    let expected = draws as f64 / eligible.len() as f64;
    let chi2: f64 = eligible
        .iter()
        .map(|&i| (counts[i] as f64 - expected).powi(2) / expected)
        .sum();
    // 7 degrees of freedom; the 0.999 quantile is 24.32.
    assert!(chi2 < 24.32, "χ² = {chi2}");
}

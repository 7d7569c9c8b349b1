use fanrepair::engines::split::{split_and_color, SplitConfig};
use fanrepair::engines::{run, Algorithm, AssertLevel, RunConfig, StrategyKind};
use fanrepair::graph::{generate, Graph, GraphKind};
use fanrepair::palette::{find_conflicts, Slot};

fn proper(g: &Graph, colors: &[u32]) -> bool {
    let slots: Vec<Slot> = colors.iter().map(|&c| Slot::Real(c)).collect();
    find_conflicts(g, &slots).is_empty()
}

fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    generate(&GraphKind::Gnp { n, p }, seed).unwrap()
}

#[test]
fn alg1_random_empty_on_sparse_gnp() {
    for seed in 0..30 {
        let g = gnp(120, 4.0 / 120.0, seed);
        let cfg = RunConfig::new(Algorithm::Alg1, StrategyKind::RandomEmpty)
            .with_t(100)
            .with_seed(seed);
        let out = run(&g, &cfg).unwrap();
        assert!(!out.report.failed);
        assert!(out.report.colors_used as usize <= g.max_degree() + 2);
        assert!(out.report.ell_g <= 1);
        for it in &out.report.iterations {
            assert!(4 * it.colored() >= it.uncolored_before);
        }
        assert!(proper(&g, out.colors.as_ref().unwrap()));
    }
}

#[test]
fn alg2_keeps_fans_disjoint_under_debug_checks() {
    for seed in 0..20 {
        let g = gnp(60, 0.1, seed);
        let cfg = RunConfig::new(Algorithm::Alg2, StrategyKind::Greedy)
            .with_t(3)
            .with_assert(AssertLevel::Debug);
        let out = run(&g, &cfg).unwrap();
        for it in &out.report.iterations {
            assert!(16 * it.colored() >= it.uncolored_before);
        }
        assert!(proper(&g, out.colors.as_ref().unwrap()));
    }
}

#[test]
fn alg2_on_complete4() {
    let g = generate(&GraphKind::Complete(4), 0).unwrap();
    let cfg = RunConfig::new(Algorithm::Alg2, StrategyKind::RandomEmpty).with_seed(1);
    let out = run(&g, &cfg).unwrap();
    assert!(out.report.colors_used <= 5);
    assert!(proper(&g, out.colors.as_ref().unwrap()));
}

#[test]
fn alg4_on_random_bipartite_without_truncation() {
    for seed in 0..30 {
        let g = generate(
            &GraphKind::RandomBipartite {
                left: 60,
                right: 80,
                p: 0.08,
            },
            seed,
        )
        .unwrap();
        let out = run(&g, &RunConfig::new(Algorithm::Alg4, StrategyKind::Greedy)).unwrap();
        assert_eq!(out.stats.blocked, 0);
        assert!(out.report.colors_used as usize <= g.max_degree() + 1);
        for it in &out.report.iterations {
            assert!(8 * it.colored() >= it.uncolored_before);
        }
    }
}

#[test]
fn report_json_has_the_documented_fields() {
    let g = generate(&GraphKind::Cycle(7), 0).unwrap();
    let out = run(&g, &RunConfig::new(Algorithm::Alg1, StrategyKind::Greedy)).unwrap();
    let value: serde_json::Value = serde_json::from_str(&out.report.to_json()).unwrap();
    for key in [
        "algorithm",
        "n",
        "m",
        "delta",
        "strategy",
        "T",
        "T_mode",
        "lambda",
        "delta_param",
        "seed",
        "colors_used",
        "ell_G",
        "iterations",
        "repair_executions",
        "phi_trace",
        "ledger",
        "failed",
    ] {
        assert!(value.get(key).is_some(), "missing {key}");
    }
    assert_eq!(value["T_mode"], "paper");
}

#[test]
fn split_with_small_degree_runs_the_base_directly() {
    let g = generate(&GraphKind::RandomRegular { n: 40, d: 16 }, 3).unwrap();
    let cfg = SplitConfig {
        epsilon: 0.25,
        base: RunConfig::new(Algorithm::Alg1, StrategyKind::Greedy),
        force_levels: None,
    };
    let out = split_and_color(&g, &cfg).unwrap();
    assert_eq!(out.levels, 0);
    assert_eq!(out.parts.len(), 1);
    assert!(proper(&g, &out.colors));
}

#[test]
fn split_delta_64_within_eighty_colors() {
    let g = generate(&GraphKind::RandomRegular { n: 130, d: 64 }, 2).unwrap();
    for levels in [None, Some(1), Some(2)] {
        let cfg = SplitConfig {
            epsilon: 0.25,
            base: RunConfig::new(Algorithm::Alg1, StrategyKind::Greedy).with_assert(AssertLevel::Fast),
            force_levels: levels,
        };
        let out = split_and_color(&g, &cfg).unwrap();
        assert!(out.colors_used <= 80, "{} colors", out.colors_used);
        assert!(proper(&g, &out.colors));
        assert!(out.audits.iter().all(|a| a.holds()));
    }
}

//! Parameter formulas. Logarithms are base 2 and every hidden constant is 1.

use super::{Algorithm, StrategyKind};

/// `log₂ n`, clamped to at least 1 so tiny graphs get positive budgets.
pub fn log2_n(n: usize) -> f64 {
    (n as f64).log2().max(1.0)
}

/// Budget `t` on executions of the repair step: `Δ⁴ log n` (alg1),
/// `Δ³ log n` (alg2), `Δ² log n` (alg4).
pub fn repair_budget(alg: Algorithm, delta: usize, n: usize) -> u64 {
    let exp = match alg {
        Algorithm::Alg1 => 4,
        Algorithm::Alg2 => 3,
        Algorithm::Alg4 => 2,
    };
    let t = (delta as f64).powi(exp) * log2_n(n);
    (t.ceil() as u64).max(1)
}

/// Truncation length: `Δ⁷ t` for random-empty, `2tλ` for greedy, `tλ` for
/// uniform placement. Saturates instead of overflowing.
pub fn default_t(alg: Algorithm, strategy: StrategyKind, delta: usize, n: usize, lambda: f64) -> u64 {
    let t = repair_budget(alg, delta, n);
    let value = match strategy {
        StrategyKind::RandomEmpty => (delta as f64).powi(7) * t as f64,
        StrategyKind::Greedy => 2.0 * t as f64 * lambda,
        StrategyKind::Uniform => t as f64 * lambda,
    };
    if value >= u64::MAX as f64 {
        u64::MAX
    } else {
        (value.ceil() as u64).max(1)
    }
}

/// `1 + δ = λ log n / (log λ + log log n)`. `log n` is clamped to at least 2
/// and the denominator to at least 1, which keeps `1 + δ > 1` for `λ ≥ 1`.
pub fn one_plus_delta(n: usize, lambda: f64) -> f64 {
    let l = (n as f64).log2().max(2.0);
    let denom = (lambda.log2() + l.log2()).max(1.0);
    lambda * l / denom
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alg1_random_empty_reference_values() {
        assert_eq!(repair_budget(Algorithm::Alg1, 4, 256), 2048);
        assert_eq!(
            default_t(Algorithm::Alg1, StrategyKind::RandomEmpty, 4, 256, 2.0),
            33_554_432
        );
    }

    #[test]
    fn greedy_t_is_two_t_lambda() {
        // Δ² log n = 100 with Δ = 5, n = 16.
        assert_eq!(repair_budget(Algorithm::Alg4, 5, 16), 100);
        assert_eq!(default_t(Algorithm::Alg4, StrategyKind::Greedy, 5, 16, 4.0), 800);
        assert_eq!(default_t(Algorithm::Alg4, StrategyKind::Uniform, 5, 16, 4.0), 400);
    }

    #[test]
    fn delta_reference_value() {
        let v = one_plus_delta(1 << 16, 2.0);
        assert!((v - 6.4).abs() < 1e-12, "{v}");
        assert!(one_plus_delta(2, 1.0) > 1.0);
    }

    #[test]
    fn huge_t_saturates() {
        assert_eq!(
            default_t(Algorithm::Alg1, StrategyKind::RandomEmpty, 1 << 12, 1 << 20, 2.0),
            u64::MAX
        );
        assert_eq!(default_t(Algorithm::Alg1, StrategyKind::Greedy, 0, 1, 2.0), 4);
    }
}

//! The pessimistic estimator behind greedy blocking-edge placement:
//!
//! `Φ(q) = Σ_v (1+δ)^{ℓ_q(v)} · (1 + 2δ/T)^{t−q} / (1+δ)^{(1+δ)/λ}`
//!
//! Values are kept as natural logarithms, since `(1 + 2δ/T)^{t}` and
//! `(1+δ)^{ℓ}` leave the `f64` range quickly.

/// `ln Φ` evaluated from scratch.
pub fn potential_phi(loads: &[u32], q: u64, t: u64, big_t: f64, one_plus_delta: f64, lambda: f64) -> f64 {
    let sum: f64 = loads.iter().map(|&l| one_plus_delta.powi(l as i32)).sum();
    ln_phi(sum, q, t, big_t, one_plus_delta, lambda)
}

fn ln_phi(sum: f64, q: u64, t: u64, big_t: f64, one_plus_delta: f64, lambda: f64) -> f64 {
    let delta = one_plus_delta - 1.0;
    let steps = t as f64 - q as f64;
    sum.ln() + steps * (2.0 * delta / big_t).ln_1p() - one_plus_delta / lambda * one_plus_delta.ln()
}

/// Incrementally maintained `Φ`, checked against a full recomputation every
/// [`RECHECK_EVERY`] steps.
#[derive(Debug, Clone)]
pub struct Potential {
    pub t: u64,
    pub big_t: f64,
    pub one_plus_delta: f64,
    pub lambda: f64,
    q: u64,
    sum: f64,
    current: f64,
    /// Largest relative gap seen between incremental and recomputed sums.
    pub max_drift: f64,
}

pub const RECHECK_EVERY: u64 = 64;
pub const TOLERANCE: f64 = 1e-9;

impl Potential {
    pub fn new(n: usize, t: u64, big_t: f64, one_plus_delta: f64, lambda: f64) -> Self {
        let sum = n as f64;
        Potential {
            t,
            big_t,
            one_plus_delta,
            lambda,
            q: 0,
            sum,
            current: ln_phi(sum, 0, t, big_t, one_plus_delta, lambda),
            max_drift: 0.0,
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn ln_value(&self) -> f64 {
        self.current
    }

    /// Accounts for one more load unit at a vertex whose load was `before`.
    pub fn add_load(&mut self, before: u32) {
        self.sum += self.one_plus_delta.powi(before as i32) * (self.one_plus_delta - 1.0);
    }

    /// Closes execution `q + 1`. Returns `(ln Φ(q), ln Φ(q+1))`.
    pub fn step(&mut self, loads: &[u32]) -> (f64, f64) {
        self.q += 1;
        if self.q.is_multiple_of(RECHECK_EVERY) {
            let fresh: f64 = loads.iter().map(|&l| self.one_plus_delta.powi(l as i32)).sum();
            self.max_drift = self.max_drift.max(((fresh - self.sum) / fresh).abs());
            self.sum = fresh;
        }
        let before = self.current;
        self.current = ln_phi(self.sum, self.q, self.t, self.big_t, self.one_plus_delta, self.lambda);
        (before, self.current)
    }

    /// `Φ(q+1) ≤ Φ(q) · (1 + TOLERANCE)`.
    pub fn is_monotone(before: f64, after: f64) -> bool {
        after <= before + TOLERANCE.ln_1p()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex_at_q_equals_t() {
        let (opd, lambda) = (3.0, 2.0);
        let v = potential_phi(&[0], 5, 5, 10.0, opd, lambda).exp();
        let expected = opd.powf(-opd / lambda);
        assert!((v - expected).abs() < 1e-12);
    }

    #[test]
    fn incremental_matches_scratch() {
        let mut loads = vec![0u32; 10];
        let mut p = Potential::new(10, 50, 200.0, 2.5, 2.0);
        for step in 0..40u64 {
            let v = (step * 7 % 10) as usize;
            p.add_load(loads[v]);
            loads[v] += 1;
            let (before, after) = p.step(&loads);
            let scratch = potential_phi(&loads, step + 1, 50, 200.0, 2.5, 2.0);
            assert!(((after - scratch) / scratch).abs() < 1e-12);
            assert!(after.is_finite() && before.is_finite());
        }
    }

    #[test]
    fn empty_step_decreases() {
        let mut p = Potential::new(4, 10, 20.0, 2.0, 2.0);
        let (before, after) = p.step(&[0; 4]);
        assert!(after < before);
        assert!(Potential::is_monotone(before, after));
    }
}

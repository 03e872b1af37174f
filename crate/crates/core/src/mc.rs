//! Seeded Monte Carlo simulation of equivalence replication pipelines.
//!
//! Replicates are split into fixed-size chunks. Chunk `k` draws from a
//! ChaCha8 stream seeded by `seed` with stream id `k`, so the estimate is
//! bit-identical whether chunks run sequentially or on the rayon pool.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::design::{DesignInput, PowerFlavor};
use crate::error::{check_alpha, check_positive, domain, Result};
use crate::exec::Execution;
use crate::numkit::z_upper;
use crate::sceptical::{gamma_c, sceptical_z};
use crate::tost::PairTruth;

/// Replicates per RNG stream.
pub const CHUNK: u64 = 1 << 16;
pub const DEFAULT_N_SIM: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    TwoTrials,
    Sceptical,
}

/// True effects, standard errors and simulation size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub theta_o: f64,
    pub theta_r: f64,
    pub delta: f64,
    pub sigma_o: f64,
    pub sigma_r: f64,
    #[serde(default = "default_n_sim")]
    pub n_sim: u64,
    #[serde(default)]
    pub seed: u64,
}

fn default_n_sim() -> u64 {
    DEFAULT_N_SIM
}

impl Scenario {
    pub fn from_truth(truth: PairTruth, n_sim: u64, seed: u64) -> Self {
        Self {
            theta_o: truth.theta_o,
            theta_r: truth.theta_r,
            delta: truth.delta,
            sigma_o: truth.sigma_o,
            sigma_r: truth.sigma_r,
            n_sim,
            seed,
        }
    }

    pub fn truth(&self) -> PairTruth {
        PairTruth {
            theta_o: self.theta_o,
            theta_r: self.theta_r,
            delta: self.delta,
            sigma_o: self.sigma_o,
            sigma_r: self.sigma_r,
        }
    }

    /// Names of every field violating its constraint.
    pub fn invalid_fields(&self) -> Vec<&'static str> {
        let mut bad = Vec::new();
        let checks = [
            ("theta_o", self.theta_o.is_finite()),
            ("theta_r", self.theta_r.is_finite()),
            ("delta", self.delta > 0.0 && self.delta.is_finite()),
            ("sigma_o", self.sigma_o > 0.0 && self.sigma_o.is_finite()),
            ("sigma_r", self.sigma_r > 0.0 && self.sigma_r.is_finite()),
            ("n_sim", self.n_sim >= 1),
        ];
        for (name, ok) in checks {
            if !ok {
                bad.push(name);
            }
        }
        bad
    }

    pub fn validate(&self) -> Result<()> {
        let bad = self.invalid_fields();
        if bad.is_empty() {
            Ok(())
        } else {
            Err(domain(format!("invalid scenario fields: {}", bad.join(", "))))
        }
    }
}

/// A simulated success rate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub rate: f64,
    pub std_err: f64,
    pub n_sim: u64,
}

impl McEstimate {
    pub fn from_counts(successes: u64, n_sim: u64) -> Self {
        let rate = successes as f64 / n_sim as f64;
        Self { rate, std_err: (rate * (1.0 - rate) / n_sim as f64).sqrt(), n_sim }
    }

    /// Whether `value` lies within `k` standard errors of the estimate.
    ///
    /// A zero standard error (rate 0 or 1) is widened to that of a single
    /// success so that exact-zero probabilities still compare sensibly.
    pub fn agrees_with(&self, value: f64, k: f64) -> bool {
        let floor = 1.0 / self.n_sim as f64;
        (self.rate - value).abs() <= k * self.std_err.max(floor)
    }
}

fn stream(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Counts successes of `trial` over `n_sim` replicates.
fn count<T>(n_sim: u64, seed: u64, exec: Execution, trial: T) -> u64
where
    T: Fn(&mut ChaCha8Rng) -> bool + Sync + Send,
{
    let chunks = n_sim.div_ceil(CHUNK);
    exec.sum_indexed(chunks, |k| {
        let mut rng = stream(seed, k);
        let size = CHUNK.min(n_sim - k * CHUNK);
        (0..size).filter(|_| trial(&mut rng)).count() as u64
    })
}

/// Success rate per chunk, for checking that streams are homogeneous.
pub fn chunk_rates(scenario: &Scenario, rule: Rule, alpha: f64) -> Result<Vec<McEstimate>> {
    scenario.validate()?;
    let decide = Decider::new(rule, scenario.sigma_o, scenario.sigma_r, scenario.delta, alpha)?;
    let chunks = scenario.n_sim.div_ceil(CHUNK);
    let ids: Vec<u64> = (0..chunks).collect();
    Ok(Execution::default().map(&ids, |&k| {
        let mut rng = stream(scenario.seed, k);
        let size = CHUNK.min(scenario.n_sim - k * CHUNK);
        let hits = (0..size).filter(|_| draw_and_decide(scenario, &decide, &mut rng)).count() as u64;
        McEstimate::from_counts(hits, size)
    }))
}

/// Success decision on the z scale, equivalent to thresholding the
/// p-values at α.
#[derive(Debug, Clone, Copy)]
struct Decider {
    rule: Rule,
    threshold: f64,
    c: f64,
    two_m_o: f64,
    two_m_r: f64,
}

impl Decider {
    fn new(rule: Rule, sigma_o: f64, sigma_r: f64, delta: f64, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        let c = (sigma_o / sigma_r).powi(2);
        let threshold = match rule {
            Rule::TwoTrials => z_upper(alpha)?,
            Rule::Sceptical => gamma_c(c, alpha)?.z_gamma,
        };
        Ok(Self { rule, threshold, c, two_m_o: 2.0 * delta / sigma_o, two_m_r: 2.0 * delta / sigma_r })
    }

    fn success(&self, z_o_plus: f64, z_r_plus: f64) -> bool {
        let (z_o_minus, z_r_minus) = (z_o_plus + self.two_m_o, z_r_plus + self.two_m_r);
        match self.rule {
            Rule::TwoTrials => {
                let t = self.threshold;
                z_o_plus < -t && z_r_plus < -t && z_o_minus > t && z_r_minus > t
            }
            Rule::Sceptical => {
                let t = self.threshold;
                let side = |zo: f64, zr: f64| zo > 0.0 && zr > 0.0 && sceptical_z(zo, zr, self.c) > t;
                side(-z_o_plus, -z_r_plus) && side(z_o_minus, z_r_minus)
            }
        }
    }
}

fn draw_and_decide(s: &Scenario, decide: &Decider, rng: &mut ChaCha8Rng) -> bool {
    let e_o: f64 = rng.sample(StandardNormal);
    let e_r: f64 = rng.sample(StandardNormal);
    let z_o_plus = (s.theta_o - s.delta) / s.sigma_o + e_o;
    let z_r_plus = (s.theta_r - s.delta) / s.sigma_r + e_r;
    decide.success(z_o_plus, z_r_plus)
}

/// Simulates both studies from `scenario` and applies `rule` at level `alpha`.
pub fn simulate_rule(scenario: &Scenario, rule: Rule, alpha: f64) -> Result<McEstimate> {
    simulate_rule_with(scenario, rule, alpha, Execution::default())
}

pub fn simulate_rule_with(scenario: &Scenario, rule: Rule, alpha: f64, exec: Execution) -> Result<McEstimate> {
    scenario.validate()?;
    let decide = Decider::new(rule, scenario.sigma_o, scenario.sigma_r, scenario.delta, alpha)?;
    let hits = count(scenario.n_sim, scenario.seed, exec, |rng| draw_and_decide(scenario, &decide, rng));
    Ok(McEstimate::from_counts(hits, scenario.n_sim))
}

/// Superiority intersection null: z_o, z_r independent standard normal,
/// success when both are positive and the sceptical z exceeds z_γ.
pub fn simulate_superiority_t1e(c: f64, gamma: f64, n_sim: u64, seed: u64) -> Result<McEstimate> {
    check_positive("c", c)?;
    if !(gamma > 0.0 && gamma <= 0.5) || n_sim == 0 {
        return Err(domain("need gamma in (0, 0.5] and n_sim >= 1"));
    }
    let z_g = z_upper(gamma)?;
    let hits = count(n_sim, seed, Execution::default(), |rng| {
        let z_o: f64 = rng.sample(StandardNormal);
        let z_r: f64 = rng.sample(StandardNormal);
        z_o > 0.0 && z_r > 0.0 && sceptical_z(z_o, z_r, c) >= z_g
    });
    Ok(McEstimate::from_counts(hits, n_sim))
}

/// Replication-stage success rate for a fixed original result.
///
/// The original is realised with δ = 1 and θ̂_o = f_o. Under conditional
/// flavor θ̂_r ~ N(`theta_r`, σ_r²) with `theta_r` in margin units (use
/// `f_o` for conditional power, 1 for the conditional Type-I error); under
/// predictive flavor θ̂_r ~ N(θ̂_o, σ_o² + σ_r²) and `theta_r` is ignored.
pub fn simulate_conditional(
    design: &DesignInput,
    rule: Rule,
    c: f64,
    theta_r: f64,
    n_sim: u64,
    seed: u64,
) -> Result<McEstimate> {
    check_positive("c", c)?;
    if n_sim == 0 {
        return Err(domain("n_sim must be at least 1"));
    }
    let z_o_plus = design.z_o_plus();
    let sigma_o = (design.f_o - 1.0) / z_o_plus;
    let sigma_r = sigma_o / c.sqrt();
    let decide = Decider::new(rule, sigma_o, sigma_r, 1.0, design.alpha)?;
    let (centre, spread) = match design.power_flavor {
        PowerFlavor::Conditional => (theta_r, sigma_r),
        PowerFlavor::Predictive => (design.f_o, (sigma_o * sigma_o + sigma_r * sigma_r).sqrt()),
    };
    let hits = count(n_sim, seed, Execution::default(), |rng| {
        let e: f64 = rng.sample(StandardNormal);
        let theta_hat_r = centre + spread * e;
        decide.success(z_o_plus, (theta_hat_r - 1.0) / sigma_r)
    });
    Ok(McEstimate::from_counts(hits, n_sim))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario(theta_o: f64, theta_r: f64, n_sim: u64, seed: u64) -> Scenario {
        Scenario { theta_o, theta_r, delta: 1.0, sigma_o: 0.35, sigma_r: 0.25, n_sim, seed }
    }

    #[test]
    fn deterministic_for_a_seed() {
        let s = scenario(0.0, 0.0, 200_000, 7);
        let a = simulate_rule_with(&s, Rule::Sceptical, 0.05, Execution::Sequential).unwrap();
        let b = simulate_rule_with(&s, Rule::Sceptical, 0.05, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        let c = simulate_rule(&Scenario { seed: 8, ..s }, Rule::Sceptical, 0.05).unwrap();
        assert_ne!(a.rate, c.rate);
    }

    #[test]
    fn estimate_fields() {
        let e = McEstimate::from_counts(25, 100);
        assert_eq!(e.rate, 0.25);
        assert!((e.std_err - (0.25f64 * 0.75 / 100.0).sqrt()).abs() < 1e-15);
        assert!(McEstimate::from_counts(0, 1_000_000).agrees_with(1e-7, 3.0));
    }

    #[test]
    fn invalid_fields_are_listed() {
        let s = Scenario { delta: -1.0, sigma_r: 0.0, n_sim: 0, ..scenario(0.0, 0.0, 1, 1) };
        assert_eq!(s.invalid_fields(), vec!["delta", "sigma_r", "n_sim"]);
        assert!(simulate_rule(&s, Rule::TwoTrials, 0.05).is_err());
    }

    #[test]
    fn lax_level_inflates_superiority_rate() {
        let strict = simulate_superiority_t1e(1.0, 0.1, 100_000, 3).unwrap();
        let lax = simulate_superiority_t1e(1.0, 0.5, 100_000, 3).unwrap();
        assert!(lax.rate > 0.2 && strict.rate < 0.01);
    }
}

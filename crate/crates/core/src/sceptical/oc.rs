use super::calibration::gamma_c;
use super::region::region_for_replication;
use crate::error::{check_positive, Result};
use crate::numkit::{integrate, norm_pdf, Interval, DEFAULT_QUAD_TOL, NORMAL_TRUNCATION};
use crate::tost::PairTruth;
use crate::two_trials::margin_in_se;

/// Probability of sceptical TOST success for the given true effects and
/// standard errors.
///
/// Integrates the conditional probability of the replication success region
/// over the distribution of z_o⁺. Only z_o⁺ in (z_γ - 2δ/σ_o, -z_γ), where
/// both one-sided original statistics clear z_γ, contributes.
pub fn success_probability(truth: &PairTruth, alpha: f64) -> Result<f64> {
    truth.validate()?;
    let c = truth.variance_ratio();
    let z_g = gamma_c(c, alpha)?.z_gamma;
    let two_m_o = 2.0 * truth.delta / truth.sigma_o;
    let two_m_r = 2.0 * truth.delta / truth.sigma_r;
    let mean_o = (truth.theta_o - truth.delta) / truth.sigma_o;
    let mean_r = (truth.theta_r - truth.delta) / truth.sigma_r;

    let lo = (z_g - two_m_o).max(mean_o - NORMAL_TRUNCATION);
    let hi = (-z_g).min(mean_o + NORMAL_TRUNCATION);
    if !(lo < hi) {
        return Ok(0.0);
    }
    let integrand = |z: f64| {
        let region = region_for_replication(z, z + two_m_o, two_m_r, c, z_g);
        region.probability(-mean_r) * norm_pdf(z - mean_o)
    };
    integrate(integrand, Interval::new(lo, hi)?, DEFAULT_QUAD_TOL)
}

fn at_power(beta: f64, c: f64, alpha: f64, theta_o: f64, theta_r: f64) -> Result<f64> {
    check_positive("c", c)?;
    let mu = margin_in_se(beta, alpha)?;
    success_probability(&PairTruth::from_power_scale(mu, c, theta_o, theta_r)?, alpha)
}

/// Success probability when both true effects are zero and the original
/// study has power 1 - β.
pub fn project_power(beta: f64, c: f64, alpha: f64) -> Result<f64> {
    at_power(beta, c, alpha, 0.0, 0.0)
}

/// Success probability when both true effects sit on the margin.
pub fn overall_t1e(beta: f64, c: f64, alpha: f64) -> Result<f64> {
    at_power(beta, c, alpha, 1.0, 1.0)
}

/// Success probability when θ_o = 0 and θ_r = δ.
pub fn partial_t1e(beta: f64, c: f64, alpha: f64) -> Result<f64> {
    at_power(beta, c, alpha, 0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sceptical::gamma_c;
    use crate::two_trials;

    #[test]
    fn dominates_two_trials_project_power() {
        for c in [0.5, 1.0, 2.0, 5.0, 20.0] {
            let s = project_power(0.2, c, 0.05).unwrap();
            let t = two_trials::project_power(0.2, c, 0.05).unwrap();
            assert!(s >= t, "c = {c}: {s} < {t}");
        }
        assert!(project_power(0.2, 50.0, 0.05).unwrap() > 0.8);
    }

    #[test]
    fn overall_t1e_limits() {
        assert!((overall_t1e(0.2, 50.0, 0.05).unwrap() - 0.0025).abs() < 5e-5);
        assert!(overall_t1e(0.2, 0.01, 0.05).unwrap() < 1e-6);
        for c in [0.25, 1.0, 4.0, 16.0] {
            assert!(overall_t1e(0.2, c, 0.05).unwrap() <= 0.0025 + 1e-6);
        }
    }

    #[test]
    fn partial_t1e_below_gamma() {
        for c in [0.5, 2.0, 10.0, 40.0] {
            let p = partial_t1e(0.2, c, 0.05).unwrap();
            assert!(p < gamma_c(c, 0.05).unwrap().gamma);
        }
        assert!(partial_t1e(0.2, 40.0, 0.05).unwrap() > 0.04);
        assert!(partial_t1e(0.2, 0.01, 0.05).unwrap() < 1e-6);
    }
}

//! The two-trials rule: TOST applied to the original and to the replication
//! study, each at level α.

use serde::{Deserialize, Serialize};

use crate::design::{smallest_c_reaching, DesignInput, PowerFlavor};
use crate::error::{check_alpha, check_positive, check_probability, Error, Result};
use crate::numkit::{norm_cdf, norm_sf, z_upper};
use crate::tost::{tost_p, EquivalenceProblem, PairTruth, SuccessRegion};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoTrialsDecision {
    pub p_o_max: f64,
    pub p_r_max: f64,
    pub p_max: f64,
    pub success: bool,
    pub alpha: f64,
}

pub fn decide(problem: &EquivalenceProblem, alpha: f64) -> Result<TwoTrialsDecision> {
    check_alpha(alpha)?;
    let p_o_max = tost_p(problem.original_z()?).p_max;
    let p_r_max = tost_p(problem.replication_z()?).p_max;
    let p_max = p_o_max.max(p_r_max);
    Ok(TwoTrialsDecision { p_o_max, p_r_max, p_max, success: p_max < alpha, alpha })
}

fn singular_guard(f: f64) -> Result<()> {
    if f == 1.0 {
        Err(Error::Singular { f })
    } else {
        Ok(())
    }
}

/// Values of z_r⁺ for which success holds given the original study:
/// `z_α - 2 z_o⁺ √c / (f_o - 1) < z_r⁺ < -z_α`.
pub fn success_region_zr(z_o_plus: f64, f_o: f64, c: f64, alpha: f64) -> Result<SuccessRegion> {
    singular_guard(f_o)?;
    check_positive("c", c)?;
    let z_a = z_upper(alpha)?;
    Ok(SuccessRegion::new(z_a - 2.0 * z_o_plus * c.sqrt() / (f_o - 1.0), -z_a))
}

/// Values of z_o⁺ for which success holds given the replication study.
pub fn success_region_zo(z_r_plus: f64, f_r: f64, c: f64, alpha: f64) -> Result<SuccessRegion> {
    singular_guard(f_r)?;
    check_positive("c", c)?;
    let z_a = z_upper(alpha)?;
    Ok(SuccessRegion::new(z_a - 2.0 * z_r_plus / ((f_r - 1.0) * c.sqrt()), -z_a))
}

/// Largest p_o⁺ for which success remains possible: Φ(z_α min{(f_o - 1)/√c, -1}).
pub fn bound_po_plus(f_o: f64, c: f64, alpha: f64) -> Result<f64> {
    check_f_below_one(f_o)?;
    check_positive("c", c)?;
    let z_a = z_upper(alpha)?;
    Ok(norm_cdf(z_a * ((f_o - 1.0) / c.sqrt()).min(-1.0)))
}

/// Largest p_r⁺ for which success remains possible: Φ(z_α min{(f_r - 1)√c, -1}).
pub fn bound_pr_plus(f_r: f64, c: f64, alpha: f64) -> Result<f64> {
    check_f_below_one(f_r)?;
    check_positive("c", c)?;
    let z_a = z_upper(alpha)?;
    Ok(norm_cdf(z_a * ((f_r - 1.0) * c.sqrt()).min(-1.0)))
}

fn check_f_below_one(f: f64) -> Result<()> {
    if (0.0..1.0).contains(&f) {
        Ok(())
    } else {
        Err(crate::error::domain(format!("f = {f} must lie in [0, 1)")))
    }
}

/// μ = z_{β/2} + z_α: the margin in original standard errors implied by an
/// original power of 1 - β to detect θ = 0.
pub fn margin_in_se(beta: f64, alpha: f64) -> Result<f64> {
    check_probability("beta", beta)?;
    check_alpha(alpha)?;
    Ok(z_upper(beta / 2.0)? + z_upper(alpha)?)
}

/// Power of a TOST with margin `m` standard errors when θ = 0: 2Φ(m - z_α) - 1.
fn tost_power_at_zero(m: f64, z_a: f64) -> f64 {
    (2.0 * norm_cdf(m - z_a) - 1.0).max(0.0)
}

/// Probability of a TOST success with margin `m` standard errors when θ = δ.
fn tost_t1e_at_margin(m: f64, z_a: f64, alpha: f64) -> f64 {
    (alpha - norm_cdf(z_a - 2.0 * m)).max(0.0)
}

/// Probability that both studies succeed when both true effects are zero.
///
/// The replication factor is 2Φ(√c μ - z_α) - 1, the TOST power of a study
/// whose standard error is σ_o / √c.
pub fn project_power(beta: f64, c: f64, alpha: f64) -> Result<f64> {
    check_positive("c", c)?;
    let mu = margin_in_se(beta, alpha)?;
    let z_a = z_upper(alpha)?;
    Ok((1.0 - beta) * tost_power_at_zero(c.sqrt() * mu, z_a))
}

/// Type-I error of the original TOST at θ_o = δ: α - Φ(-2 z_{β/2} - z_α).
pub fn original_t1e(beta: f64, alpha: f64) -> Result<f64> {
    let mu = margin_in_se(beta, alpha)?;
    Ok(tost_t1e_at_margin(mu, z_upper(alpha)?, alpha))
}

/// Type-I error of the replication TOST at θ_r = δ: α - Φ(-2√c μ + z_α).
pub fn replication_t1e(beta: f64, c: f64, alpha: f64) -> Result<f64> {
    check_positive("c", c)?;
    let mu = margin_in_se(beta, alpha)?;
    Ok(tost_t1e_at_margin(c.sqrt() * mu, z_upper(alpha)?, alpha))
}

/// Success probability when both true effects sit on the margin.
pub fn overall_t1e(beta: f64, c: f64, alpha: f64) -> Result<f64> {
    Ok(original_t1e(beta, alpha)? * replication_t1e(beta, c, alpha)?)
}

/// Success probability when θ_o = 0 and θ_r = δ.
pub fn partial_t1e(beta: f64, c: f64, alpha: f64) -> Result<f64> {
    Ok((1.0 - beta) * replication_t1e(beta, c, alpha)?)
}

/// Probability of two-trials success for the given true effects: the
/// product of the two independent TOST success probabilities.
pub fn success_probability(truth: &PairTruth, alpha: f64) -> Result<f64> {
    truth.validate()?;
    let z_a = z_upper(alpha)?;
    let tost = |theta: f64, sigma: f64| {
        let mean = (theta - truth.delta) / sigma;
        let region = SuccessRegion::new(z_a - 2.0 * truth.delta / sigma, -z_a);
        region.probability(-mean)
    };
    Ok(tost(truth.theta_o, truth.sigma_o) * tost(truth.theta_r, truth.sigma_r))
}

fn power_terms(design: &DesignInput, c: f64) -> Result<(f64, f64)> {
    check_positive("c", c)?;
    let z_a = z_upper(design.alpha)?;
    let a = -design.z_o_plus() * c.sqrt() - z_a;
    let b = -design.z_o_minus() * c.sqrt() + z_a;
    Ok((a, b))
}

/// Replication TOST power assuming the true effect equals the original estimate.
pub fn conditional_power(design: &DesignInput, c: f64) -> Result<f64> {
    let (a, b) = power_terms(design, c)?;
    Ok((norm_cdf(a) - norm_cdf(b)).clamp(0.0, 1.0))
}

/// Replication TOST power under θ̂_r ~ N(θ̂_o, σ_o² + σ_r²).
pub fn predictive_power(design: &DesignInput, c: f64) -> Result<f64> {
    let (a, b) = power_terms(design, c)?;
    let s = (c + 1.0).sqrt();
    Ok((norm_cdf(a / s) - norm_cdf(b / s)).clamp(0.0, 1.0))
}

pub fn power(design: &DesignInput, c: f64) -> Result<f64> {
    match design.power_flavor {
        PowerFlavor::Conditional => conditional_power(design, c),
        PowerFlavor::Predictive => predictive_power(design, c),
    }
}

/// Relative sample size reaching the target power.
///
/// Refuses originals that are not themselves significant (p_o⁺ ≥ α), since
/// the two-trials rule can then never succeed.
pub fn required_c(design: &DesignInput) -> Result<f64> {
    required_c_with(design, false)
}

/// As [`required_c`]; `allow_nonsignificant` evaluates the power formula
/// even when the original study already fails.
pub fn required_c_with(design: &DesignInput, allow_nonsignificant: bool) -> Result<f64> {
    if !allow_nonsignificant && design.p_o_plus >= design.alpha {
        return Err(Error::Refused(format!(
            "original p_o+ = {:.4} is not below alpha = {}; the two-trials rule cannot succeed",
            design.p_o_plus, design.alpha
        )));
    }
    smallest_c_reaching(|c| power(design, c), design.target_power)
}

/// Success probability of the replication at θ_r = δ for an original result
/// and relative sample size `c`; zero when the original is not significant.
pub fn conditional_t1e_at(design: &DesignInput, c: f64) -> Result<f64> {
    if design.p_o_plus.max(norm_sf(design.z_o_minus())) >= design.alpha {
        return Ok(0.0);
    }
    let region = success_region_zr(design.z_o_plus(), design.f_o, c, design.alpha)?;
    Ok(region.probability(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tost::StudyResult;
    use approx::assert_abs_diff_eq;

    const Z05: f64 = 1.644_853_626_951_472_2;

    fn pair(to: f64, so: f64, tr: f64, sr: f64, d: f64) -> EquivalenceProblem {
        EquivalenceProblem::new(StudyResult::new(to, so).unwrap(), StudyResult::new(tr, sr).unwrap(), d).unwrap()
    }

    #[test]
    fn decisions() {
        let g = decide(&pair(0.17, 0.18, 0.03, 0.13, 0.36), 0.05).unwrap();
        assert_abs_diff_eq!(g.p_max, 0.14, epsilon = 0.01);
        assert!(!g.success);
        let l = decide(&pair(0.09, 0.06, -0.21, 0.04, 0.18), 0.05).unwrap();
        assert_abs_diff_eq!(l.p_max, 0.78, epsilon = 0.01);
        assert!(!l.success);
        let strong = decide(&pair(0.0, 0.25, 0.0, 0.25, 1.0), 0.05).unwrap();
        assert!(strong.success);
        assert_abs_diff_eq!(strong.p_max, norm_cdf(-4.0), epsilon = 1e-15);
    }

    #[test]
    fn region_examples() {
        let r = success_region_zr(-3.0, 0.5, 1.0, 0.05).unwrap();
        assert_abs_diff_eq!(r.lower, Z05 - 12.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.upper, -Z05, epsilon = 1e-12);
        assert!(r.feasible);

        let c: f64 = 2.0;
        let f_o = 0.3;
        let boundary = Z05 * (f_o - 1.0) / c.sqrt();
        let r = success_region_zr(boundary, f_o, c, 0.05).unwrap();
        assert_abs_diff_eq!(r.lower, r.upper, epsilon = 1e-12);

        // a precise original leaves a wide replication window
        let r = success_region_zr(-1.0, 0.9, 4.0, 0.05).unwrap();
        assert_abs_diff_eq!(r.lower, Z05 - 40.0, epsilon = 1e-12);
        assert!(r.feasible);

        let r = success_region_zo(-3.0, 0.5, 1.0, 0.05).unwrap();
        assert_abs_diff_eq!(r.lower, -10.355_146, epsilon = 1e-6);

        let boundary = Z05 * (f_o - 1.0) * c.sqrt();
        let r = success_region_zo(boundary, f_o, c, 0.05).unwrap();
        assert_abs_diff_eq!(r.lower, r.upper, epsilon = 1e-12);

        // Goetz: z_o+ = -1.056 is above the region's upper edge -z_α
        let r = success_region_zo(-2.54, 0.083, 1.9, 0.05).unwrap();
        assert!(!r.contains(-1.056));
        assert!(matches!(success_region_zr(-1.0, 1.0, 1.0, 0.05), Err(Error::Singular { .. })));
    }

    #[test]
    fn bounds() {
        assert_abs_diff_eq!(bound_po_plus(0.0, 1.0, 0.05).unwrap(), 0.05, epsilon = 1e-14);
        assert_abs_diff_eq!(bound_po_plus(0.9, 4.0, 0.05).unwrap(), 0.05, epsilon = 1e-14);
        assert_abs_diff_eq!(bound_po_plus(0.1, 0.25, 0.05).unwrap(), norm_cdf(-Z05 * 1.8), epsilon = 1e-14);
        assert_abs_diff_eq!(bound_pr_plus(0.0, 1.0, 0.05).unwrap(), 0.05, epsilon = 1e-14);
        assert_abs_diff_eq!(bound_pr_plus(0.1, 4.0, 0.05).unwrap(), norm_cdf(-Z05 * 1.8), epsilon = 1e-14);
        // plateau at α whenever 1 - f_o <= √c
        assert_eq!(bound_po_plus(0.5, 0.25, 0.05).unwrap(), 0.05);
        assert!(bound_po_plus(0.2, 0.25, 0.05).unwrap() < 0.05);
        assert!(bound_po_plus(1.0, 1.0, 0.05).is_err());
    }

    #[test]
    fn bound_matches_region_scan() {
        // scan z_o+ downward until the region opens up
        for &(f_o, c) in &[(0.9, 4.0), (0.5, 2.0), (0.1, 1.0), (0.7, 0.3)] {
            let mut z = -Z05 + 1e-9;
            while !success_region_zr(z, f_o, c, 0.05).unwrap().feasible || z >= -Z05 {
                z -= 1e-4;
            }
            assert_abs_diff_eq!(norm_cdf(z), bound_po_plus(f_o, c, 0.05).unwrap(), epsilon = 1e-4);
        }
    }

    #[test]
    fn oc_values() {
        assert_abs_diff_eq!(project_power(0.2, 1e8, 0.05).unwrap(), 0.8, epsilon = 1e-12);
        assert_abs_diff_eq!(project_power(0.2, 1.0, 0.05).unwrap(), 0.64, epsilon = 1e-12);
        assert_eq!(project_power(0.2, 0.1, 0.05).unwrap(), 0.0);

        let expected = 0.05 - norm_cdf(-2.0 * 1.281_551_565_544_600_5 - Z05);
        assert_abs_diff_eq!(original_t1e(0.2, 0.05).unwrap(), expected, epsilon = 1e-14);
        assert_abs_diff_eq!(original_t1e(1e-9, 0.05).unwrap(), 0.05, epsilon = 1e-12);
        assert!(original_t1e(0.9, 0.05).unwrap() < 0.04);

        assert_abs_diff_eq!(replication_t1e(0.2, 1e6, 0.05).unwrap(), 0.05, epsilon = 1e-12);
        assert_eq!(replication_t1e(0.2, 1e-6, 0.05).unwrap(), 0.0);
        assert_abs_diff_eq!(replication_t1e(0.2, 1.0, 0.05).unwrap(), expected, epsilon = 1e-14);

        assert_abs_diff_eq!(overall_t1e(0.2, 1e6, 0.05).unwrap(), 0.0025, epsilon = 1e-6);
        assert_eq!(overall_t1e(0.2, 1e-6, 0.05).unwrap(), 0.0);
        assert_abs_diff_eq!(overall_t1e(0.2, 1.0, 0.05).unwrap(), expected * expected, epsilon = 1e-15);

        assert_abs_diff_eq!(partial_t1e(0.2, 1e6, 0.05).unwrap(), 0.04, epsilon = 1e-9);
        assert_abs_diff_eq!(partial_t1e(0.5, 1e6, 0.05).unwrap(), 0.025, epsilon = 1e-9);
        assert_eq!(partial_t1e(0.2, 1e-6, 0.05).unwrap(), 0.0);
    }

    fn design(p: f64, f: f64, flavor: PowerFlavor) -> DesignInput {
        DesignInput::new(p, f, 0.05, 0.8, flavor).unwrap()
    }

    #[test]
    fn power_examples() {
        let d = design(0.5, 0.3, PowerFlavor::Conditional);
        for c in [0.5, 1.0, 10.0, 100.0] {
            assert!(conditional_power(&d, c).unwrap() <= 0.05 + 1e-12);
        }
        let d = design(norm_cdf(-3.0), 0.5, PowerFlavor::Conditional);
        assert_abs_diff_eq!(
            conditional_power(&d, 4.0).unwrap(),
            norm_cdf(6.0 - Z05) - norm_cdf(-18.0 + Z05),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            predictive_power(&d, 4.0).unwrap(),
            norm_cdf((6.0 - Z05) / 5f64.sqrt()) - norm_cdf((-18.0 + Z05) / 5f64.sqrt()),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(predictive_power(&d, 4.0).unwrap(), 0.974, epsilon = 1e-3);
    }

    #[test]
    fn predictive_saturates() {
        let d = design(norm_cdf(-3.0), 0.5, PowerFlavor::Predictive);
        // A/√(c+1) → 3, B/√(c+1) → -9
        assert_abs_diff_eq!(predictive_power(&d, 1e12).unwrap(), norm_cdf(3.0) - norm_cdf(-9.0), epsilon = 1e-5);
    }

    #[test]
    fn sizing() {
        let d = design(norm_cdf(-3.0), 0.5, PowerFlavor::Conditional);
        let c = required_c(&d).unwrap();
        assert_abs_diff_eq!(conditional_power(&d, c).unwrap(), 0.8, epsilon = 1e-6);
        assert!(conditional_power(&d, c * 0.99).unwrap() < 0.8);

        let refused = required_c(&design(0.145, 0.472, PowerFlavor::Conditional));
        assert!(matches!(refused, Err(Error::Refused(_))));
        // the power formula alone does not see the failed original
        let d = design(0.145, 0.472, PowerFlavor::Conditional);
        let c = required_c_with(&d, true).unwrap();
        assert_abs_diff_eq!(conditional_power(&d, c).unwrap(), 0.8, epsilon = 1e-6);
    }

    #[test]
    fn conditional_t1e_is_alpha_for_significant_originals() {
        let d = design(0.01, 0.1, PowerFlavor::Conditional);
        let c = required_c(&d).unwrap();
        assert_abs_diff_eq!(conditional_t1e_at(&d, c).unwrap(), 0.05, epsilon = 1e-4);
        let failed = design(0.08, 0.1, PowerFlavor::Conditional);
        assert_eq!(conditional_t1e_at(&failed, 3.0).unwrap(), 0.0);
    }
}

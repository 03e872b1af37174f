use serde::{Deserialize, Serialize};

use super::calibration::controlled_level;
use crate::error::{check_alpha, check_positive, check_probability, Result};
use crate::numkit::{norm_quantile, norm_sf};
use crate::tost::EquivalenceProblem;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScepticalResult {
    pub p_s_plus: f64,
    pub p_s_minus: f64,
    pub p_s_max: f64,
    pub success: bool,
    pub alpha: f64,
}

/// Magnitude of the sceptical z-value: the z_γ at which the success
/// condition holds with equality.
///
/// With t = z_γ² the condition is the quadratic
/// `(c - 1) t² + (z_o² + z_r²) t - z_o² z_r² = 0`; the positive root is taken
/// in a form that stays stable at c = 1.
pub fn sceptical_z(z_o: f64, z_r: f64, c: f64) -> f64 {
    let (a, b) = (z_o * z_o, z_r * z_r);
    let (sum, prod) = (a + b, a * b);
    if prod == 0.0 {
        return 0.0;
    }
    let disc = (sum * sum + 4.0 * (c - 1.0) * prod).max(0.0);
    (2.0 * prod / (sum + disc.sqrt())).sqrt()
}

/// One-sided uncontrolled sceptical level for oriented z-values: below 0.5
/// only when both point towards the alternative.
pub fn raw_sceptical_level(z_o: f64, z_r: f64, c: f64) -> f64 {
    let tail = norm_sf(sceptical_z(z_o, z_r, c));
    if z_o > 0.0 && z_r > 0.0 {
        tail
    } else {
        1.0 - tail
    }
}

/// Controlled one-sided sceptical p-value from z-values oriented so that
/// positive values are evidence against the null.
///
/// Wrong-side evidence is mirrored: the result is one minus the controlled
/// value of the mirrored pair, so it is at least 0.5.
pub fn sceptical_p_from_z(z_o: f64, z_r: f64, c: f64) -> Result<f64> {
    check_positive("c", c)?;
    let tail = norm_sf(sceptical_z(z_o, z_r, c));
    let controlled = controlled_level(tail, c)?;
    Ok(if z_o > 0.0 && z_r > 0.0 { controlled } else { 1.0 - controlled })
}

/// Controlled one-sided sceptical p-value from the two one-sided p-values.
pub fn sceptical_p_one_sided(p_o: f64, p_r: f64, c: f64) -> Result<f64> {
    check_probability("p_o", p_o)?;
    check_probability("p_r", p_r)?;
    // z = Φ⁻¹(1 - p) computed as -Φ⁻¹(p) to keep small p exact
    sceptical_p_from_z(-norm_quantile(p_o)?, -norm_quantile(p_r)?, c)
}

/// Sceptical TOST decision: both controlled sceptical p-values below α.
pub fn decide(problem: &EquivalenceProblem, alpha: f64) -> Result<ScepticalResult> {
    check_alpha(alpha)?;
    let c = problem.variance_ratio();
    let (zo, zr) = (problem.original_z()?, problem.replication_z()?);
    // H0+ evidence is a negative z+, H0- evidence a positive z-
    let p_s_plus = sceptical_p_from_z(-zo.z_plus, -zr.z_plus, c)?;
    let p_s_minus = sceptical_p_from_z(zo.z_minus, zr.z_minus, c)?;
    let p_s_max = p_s_plus.max(p_s_minus);
    Ok(ScepticalResult { p_s_plus, p_s_minus, p_s_max, success: p_s_max < alpha, alpha })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::norm_cdf;
    use crate::sceptical::gamma_c;
    use crate::tost::StudyResult;
    use approx::assert_abs_diff_eq;

    fn pair(to: f64, so: f64, tr: f64, sr: f64, d: f64) -> EquivalenceProblem {
        EquivalenceProblem::new(StudyResult::new(to, so).unwrap(), StudyResult::new(tr, sr).unwrap(), d).unwrap()
    }

    #[test]
    fn sceptical_z_solves_the_success_equality() {
        for &(zo, zr, c) in &[(2.0, 3.0, 1.0), (3.5, 1.9, 0.4), (1.2, 5.0, 7.0)] {
            let z = sceptical_z(zo, zr, c);
            let k = (zo / z) * (zo / z);
            assert_abs_diff_eq!(zr, z * (1.0 + c / (k - 1.0)).sqrt(), epsilon = 1e-10);
        }
        // c = 1: harmonic form
        assert_abs_diff_eq!(sceptical_z(3.0, 4.0, 1.0), (9.0 * 16.0 / 25.0f64).sqrt(), epsilon = 1e-14);
        assert_eq!(sceptical_z(0.0, 4.0, 2.0), 0.0);
    }

    #[test]
    fn table_values() {
        let g = decide(&pair(0.17, 0.18, 0.03, 0.13, 0.36), 0.05).unwrap();
        assert_abs_diff_eq!(g.p_s_plus, 0.10, epsilon = 0.01);
        assert_abs_diff_eq!(g.p_s_minus, 0.003, epsilon = 0.001);
        assert!(!g.success);
        assert!(decide(&pair(0.17, 0.18, 0.03, 0.13, 0.36), 0.12).unwrap().success);

        let l = decide(&pair(0.09, 0.06, -0.21, 0.04, 0.18), 0.05).unwrap();
        assert_abs_diff_eq!(l.p_s_minus, 0.84, epsilon = 0.01);
        assert_abs_diff_eq!(l.p_s_plus, 0.016, epsilon = 0.002);
        assert_eq!(l.p_s_max, l.p_s_minus);
        assert!(l.p_s_max > 0.5);
    }

    #[test]
    fn p_value_path_matches_z_path() {
        let (po, pr, c) = (norm_cdf(-1.3), norm_cdf(-2.1), 1.7);
        assert_abs_diff_eq!(
            sceptical_p_one_sided(po, pr, c).unwrap(),
            sceptical_p_from_z(1.3, 2.1, c).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn controlled_value_inverts_gamma() {
        let (zo, zr, c) = (2.2, 1.9, 2.0);
        let p = sceptical_p_from_z(zo, zr, c).unwrap();
        let g = gamma_c(c, p).unwrap();
        assert_abs_diff_eq!(g.gamma, raw_sceptical_level(zo, zr, c), epsilon = 1e-9);
    }

    #[test]
    fn no_evidence_gives_half() {
        assert_abs_diff_eq!(sceptical_p_from_z(0.0, 2.0, 1.0).unwrap(), 0.5, epsilon = 1e-12);
        assert!(sceptical_p_from_z(-1.0, 2.0, 1.0).unwrap() > 0.5);
        assert!(sceptical_p_from_z(-1.0, -2.0, 1.0).unwrap() > 0.5);
    }

    #[test]
    fn overwhelming_evidence_succeeds() {
        let strong = pair(0.0, 0.1, 0.0, 0.1, 0.5); // z = ±5, p ≈ 3e-7
        assert!(decide(&strong, 0.05).unwrap().success);
    }
}

//! Property checks shared by the proptest suites and the acceptance run.

#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use repliq::numkit::norm_cdf;
use repliq::sceptical::{self, gamma_c, superiority_t1e};
use repliq::tost::{confidence_interval, one_sided_z, tost_p, z_minus_from_plus};
use repliq::{two_trials, EquivalenceProblem, StudyResult};

pub type Check = std::result::Result<(), TestCaseError>;

pub const CASES: u32 = 1000;

pub fn runner() -> TestRunner {
    TestRunner::new(Config { cases: CASES, failure_persistence: None, ..Config::default() })
}

fn fail(msg: String) -> Check {
    Err(TestCaseError::fail(msg))
}

fn skip(msg: &str) -> Check {
    Err(TestCaseError::reject(msg.to_string()))
}

fn pair(theta_o: f64, sigma_o: f64, theta_r: f64, sigma_r: f64, delta: f64) -> EquivalenceProblem {
    EquivalenceProblem::new(
        StudyResult::new(theta_o, sigma_o).unwrap(),
        StudyResult::new(theta_r, sigma_r).unwrap(),
        delta,
    )
    .unwrap()
}

/// Study pair with δ = 1 whose original has the given z⁺ and f.
pub fn realise_from_original(z_o_plus: f64, f_o: f64, c: f64, z_r_plus: f64) -> EquivalenceProblem {
    let s_o = (f_o - 1.0) / z_o_plus;
    let s_r = s_o / c.sqrt();
    pair(f_o, s_o, 1.0 + z_r_plus * s_r, s_r, 1.0)
}

/// Study pair with δ = 1 whose replication has the given z⁺ and f.
pub fn realise_from_replication(z_r_plus: f64, f_r: f64, c: f64, z_o_plus: f64) -> EquivalenceProblem {
    let s_r = (f_r - 1.0) / z_r_plus;
    let s_o = s_r * c.sqrt();
    pair(1.0 + z_o_plus * s_o, s_o, f_r, s_r, 1.0)
}

pub fn study() -> impl Strategy<Value = (f64, f64, f64)> {
    (-2.0..2.0f64, 0.01..2.0f64, 0.05..1.0f64)
}

/// z⁻ recovered from z⁺ and f matches the direct computation.
pub fn z_identity((theta, sigma, delta): (f64, f64, f64)) -> Check {
    let z = one_sided_z(StudyResult::new(theta, sigma).unwrap(), delta).unwrap();
    if (z.f - 1.0).abs() < 1e-6 {
        return skip("estimate on the margin");
    }
    let recovered = z_minus_from_plus(z.z_plus, z.f).unwrap();
    let tol = 1e-9 * (1.0 + z.z_minus.abs());
    if (recovered - z.z_minus).abs() > tol {
        return fail(format!("z- = {} but recovered {recovered}", z.z_minus));
    }
    Ok(())
}

/// TOST at α succeeds exactly when the (1 - 2α) interval lies inside the margin.
pub fn ci_duality(((theta, sigma, delta), alpha): ((f64, f64, f64), f64)) -> Check {
    let s = StudyResult::new(theta, sigma).unwrap();
    let ci = confidence_interval(s, alpha).unwrap();
    let slack = (ci.lo + delta).min(delta - ci.hi);
    if slack.abs() < 1e-9 {
        return skip("interval touches the margin");
    }
    let tost = tost_p(one_sided_z(s, delta).unwrap()).p_max < alpha;
    if tost != (slack > 0.0) {
        return fail(format!("TOST {tost} but interval [{}, {}] vs ±{delta}", ci.lo, ci.hi));
    }
    Ok(())
}

/// Flipping the sign of both estimates changes neither decision.
pub fn reorientation(((to, so, d), tr, sr, alpha): ((f64, f64, f64), f64, f64, f64)) -> Check {
    let p = pair(to, so, tr, sr, d);
    let q = pair(-to, so, -tr, sr, d);
    let (a, b) = (two_trials::decide(&p, alpha).unwrap(), two_trials::decide(&q, alpha).unwrap());
    if (a.p_max - b.p_max).abs() > 1e-12 || a.success != b.success {
        return fail(format!("two-trials {a:?} vs {b:?}"));
    }
    let (a, b) = (sceptical::decide(&p, alpha).unwrap(), sceptical::decide(&q, alpha).unwrap());
    if (a.p_s_max - b.p_s_max).abs() > 1e-10 || a.success != b.success {
        return fail(format!("sceptical {a:?} vs {b:?}"));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy)]
pub struct RegionCase {
    pub z_fixed: f64,
    pub f: f64,
    pub c: f64,
    pub z_free: f64,
}

pub fn region_case() -> impl Strategy<Value = RegionCase> {
    (-6.0..-0.05f64, 0.01..0.99f64, 0.2..10.0f64, -15.0..2.0f64)
        .prop_map(|(z_fixed, f, c, z_free)| RegionCase { z_fixed, f, c, z_free })
}

const ALPHA: f64 = 0.05;

fn near(z: f64, lower: f64, upper: f64) -> bool {
    (z - lower).abs() < 1e-7 || (z - upper).abs() < 1e-7
}

/// Two-trials: replication success region for z_r⁺ agrees with `decide`.
pub fn two_trials_region_zr(k: RegionCase) -> Check {
    let region = two_trials::success_region_zr(k.z_fixed, k.f, k.c, ALPHA).unwrap();
    if near(k.z_free, region.lower, region.upper) {
        return skip("on the region edge");
    }
    let decision = two_trials::decide(&realise_from_original(k.z_fixed, k.f, k.c, k.z_free), ALPHA).unwrap();
    let expected = region.contains(k.z_free) && decision.p_o_max < ALPHA;
    if decision.success != expected {
        return fail(format!("{k:?}: decide {} region {region:?}", decision.success));
    }
    Ok(())
}

/// Two-trials: original success region for z_o⁺ agrees with `decide`.
pub fn two_trials_region_zo(k: RegionCase) -> Check {
    let region = two_trials::success_region_zo(k.z_fixed, k.f, k.c, ALPHA).unwrap();
    if near(k.z_free, region.lower, region.upper) {
        return skip("on the region edge");
    }
    let decision = two_trials::decide(&realise_from_replication(k.z_fixed, k.f, k.c, k.z_free), ALPHA).unwrap();
    let expected = region.contains(k.z_free) && decision.p_r_max < ALPHA;
    if decision.success != expected {
        return fail(format!("{k:?}: decide {} region {region:?}", decision.success));
    }
    Ok(())
}

/// Sceptical TOST: success region for z_r⁺ agrees with `decide`.
pub fn sceptical_region_zr(k: RegionCase) -> Check {
    let region = sceptical::success_region_zr(k.z_fixed, k.f, k.c, ALPHA).unwrap();
    if near(k.z_free, region.lower, region.upper) {
        return skip("on the region edge");
    }
    let decision = sceptical::decide(&realise_from_original(k.z_fixed, k.f, k.c, k.z_free), ALPHA).unwrap();
    if decision.success != region.contains(k.z_free) {
        return fail(format!("{k:?}: decide {decision:?} region {region:?}"));
    }
    Ok(())
}

/// Sceptical TOST: success region for z_o⁺ agrees with `decide`.
pub fn sceptical_region_zo(k: RegionCase) -> Check {
    let region = sceptical::success_region_zo(k.z_fixed, k.f, k.c, ALPHA).unwrap();
    if near(k.z_free, region.lower, region.upper) {
        return skip("on the region edge");
    }
    let decision = sceptical::decide(&realise_from_replication(k.z_fixed, k.f, k.c, k.z_free), ALPHA).unwrap();
    if decision.success != region.contains(k.z_free) {
        return fail(format!("{k:?}: decide {decision:?} region {region:?}"));
    }
    Ok(())
}

/// γ_c reproduces α² for the superiority intersection null and exceeds α.
pub fn calibration((c, alpha): (f64, f64)) -> Check {
    let g = gamma_c(c, alpha).unwrap();
    let residual = (superiority_t1e(g.gamma, c).unwrap() - alpha * alpha).abs();
    if residual > 1e-8 || g.gamma <= alpha {
        return fail(format!("c = {c}, alpha = {alpha}: gamma {} residual {residual}", g.gamma));
    }
    if (norm_cdf(-g.z_gamma) - g.gamma).abs() > 1e-12 {
        return fail(format!("z_gamma {} inconsistent with gamma {}", g.z_gamma, g.gamma));
    }
    Ok(())
}

pub fn calibration_case() -> impl Strategy<Value = (f64, f64)> {
    (0.05..50.0f64, 0.001..0.2f64)
}

pub fn alpha() -> impl Strategy<Value = f64> {
    0.005..0.2f64
}

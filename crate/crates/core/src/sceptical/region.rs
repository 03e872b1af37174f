use serde::{Deserialize, Serialize};

use super::calibration::gamma_c;
use super::sceptical_threshold;
use crate::error::{check_positive, domain, Error, Result};
use crate::numkit::{find_root, norm_cdf, RootBracket};
use crate::tost::{z_minus_from_plus, SuccessRegion};

/// Squared ratios of the one-sided z-values to z_γ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KRatio {
    pub k_plus: f64,
    pub k_minus: f64,
}

impl KRatio {
    pub fn new(z_plus: f64, z_minus: f64, z_gamma: f64) -> Self {
        Self { k_plus: (z_plus / z_gamma).powi(2), k_minus: (z_minus / z_gamma).powi(2) }
    }
}

/// Region for the replication z⁺ given the original (z⁺, z⁻), the fixed
/// offset z_r⁻ - z_r⁺ = 2δ/σ_r, c and z_γ.
pub(crate) fn region_for_replication(z_o_plus: f64, z_o_minus: f64, offset: f64, c: f64, z_g: f64) -> SuccessRegion {
    match (sceptical_threshold(-z_o_plus, z_g, c), sceptical_threshold(z_o_minus, z_g, c)) {
        (Some(up), Some(low)) => SuccessRegion::new(low - offset, -up),
        _ => SuccessRegion::EMPTY,
    }
}

fn singular_guard(f: f64) -> Result<()> {
    if f == 1.0 {
        Err(Error::Singular { f })
    } else {
        Ok(())
    }
}

/// Success region for z_r⁺ given the original result.
///
/// When the original statistic does not clear z_γ on either side the region
/// is [`SuccessRegion::EMPTY`].
pub fn success_region_zr(z_o_plus: f64, f_o: f64, c: f64, alpha: f64) -> Result<SuccessRegion> {
    singular_guard(f_o)?;
    check_positive("c", c)?;
    let z_g = gamma_c(c, alpha)?.z_gamma;
    let z_o_minus = z_minus_from_plus(z_o_plus, f_o)?;
    let offset = 2.0 * z_o_plus * c.sqrt() / (f_o - 1.0);
    Ok(region_for_replication(z_o_plus, z_o_minus, offset, c, z_g))
}

/// Success region for z_o⁺ given the replication result.
pub fn success_region_zo(z_r_plus: f64, f_r: f64, c: f64, alpha: f64) -> Result<SuccessRegion> {
    singular_guard(f_r)?;
    check_positive("c", c)?;
    let z_g = gamma_c(c, alpha)?.z_gamma;
    let z_r_minus = z_minus_from_plus(z_r_plus, f_r)?;
    let offset = 2.0 * z_r_plus / ((f_r - 1.0) * c.sqrt());
    // the success condition is symmetric in the two studies
    Ok(region_for_replication(z_r_plus, z_r_minus, offset, c, z_g))
}

/// Largest z⁺ below -z_γ for which `region(z)` is non-empty.
fn feasibility_onset<R>(region: R, z_g: f64) -> Result<f64>
where
    R: Fn(f64) -> Result<SuccessRegion>,
{
    let gap = |z: f64| region(z).map(|r| r.upper - r.lower);
    let hi = -z_g - 1e-9 * z_g.max(1.0);
    let g_hi = gap(hi)?;
    if g_hi > 0.0 {
        return Ok(-z_g);
    }
    let mut step = 1e-2;
    let mut lo = hi - step;
    let mut g_lo = gap(lo)?;
    while !(g_lo > 0.0) {
        step *= 2.0;
        lo = hi - step;
        if lo < -60.0 {
            return Err(domain("no feasible z found above -60"));
        }
        g_lo = gap(lo)?;
    }
    let mut failure = None;
    let objective = |z: f64| match gap(z) {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            f64::NAN
        }
    };
    let root = find_root(objective, RootBracket::from_values(lo, hi, g_lo, g_hi)?, 1e-12);
    match failure {
        Some(e) => Err(e),
        None => root,
    }
}

fn check_f(f: f64) -> Result<()> {
    if (0.0..1.0).contains(&f) {
        Ok(())
    } else {
        Err(domain(format!("f = {f} must lie in [0, 1)")))
    }
}

/// Largest p_o⁺ for which sceptical TOST success remains possible.
pub fn bound_po_plus(f_o: f64, c: f64, alpha: f64) -> Result<f64> {
    check_f(f_o)?;
    let z_g = gamma_c(c, alpha)?.z_gamma;
    let z = feasibility_onset(|z| success_region_zr(z, f_o, c, alpha), z_g)?;
    Ok(norm_cdf(z))
}

/// Largest p_r⁺ for which sceptical TOST success remains possible.
pub fn bound_pr_plus(f_r: f64, c: f64, alpha: f64) -> Result<f64> {
    check_f(f_r)?;
    let z_g = gamma_c(c, alpha)?.z_gamma;
    let z = feasibility_onset(|z| success_region_zo(z, f_r, c, alpha), z_g)?;
    Ok(norm_cdf(z))
}

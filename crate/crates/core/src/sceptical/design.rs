use super::calibration::gamma_c;
use super::region::success_region_zr;
use super::sceptical_threshold;
use crate::design::{smallest_c_reaching, DesignInput, PowerFlavor};
use crate::error::{check_positive, Result};
use crate::numkit::norm_cdf;

// (C, D) of the sceptical power formulas, or None when success is impossible
fn power_terms(design: &DesignInput, c: f64) -> Result<Option<(f64, f64)>> {
    check_positive("c", c)?;
    let z_g = gamma_c(c, design.alpha)?.z_gamma;
    let (z_plus, z_minus) = (design.z_o_plus(), design.z_o_minus());
    let terms = sceptical_threshold(-z_plus, z_g, c)
        .zip(sceptical_threshold(z_minus, z_g, c))
        .map(|(t_plus, t_minus)| (-z_plus * c.sqrt() - t_plus, -z_minus * c.sqrt() + t_minus));
    Ok(terms)
}

/// Replication success probability assuming the true effect equals the
/// original estimate. Zero when the original cannot clear z_γ.
pub fn conditional_power(design: &DesignInput, c: f64) -> Result<f64> {
    Ok(match power_terms(design, c)? {
        Some((cc, d)) => (norm_cdf(cc) - norm_cdf(d)).clamp(0.0, 1.0),
        None => 0.0,
    })
}

/// Replication success probability under θ̂_r ~ N(θ̂_o, σ_o² + σ_r²).
pub fn predictive_power(design: &DesignInput, c: f64) -> Result<f64> {
    let s = (c + 1.0).sqrt();
    Ok(match power_terms(design, c)? {
        Some((cc, d)) => (norm_cdf(cc / s) - norm_cdf(d / s)).clamp(0.0, 1.0),
        None => 0.0,
    })
}

pub fn power(design: &DesignInput, c: f64) -> Result<f64> {
    match design.power_flavor {
        PowerFlavor::Conditional => conditional_power(design, c),
        PowerFlavor::Predictive => predictive_power(design, c),
    }
}

/// Smallest relative sample size reaching the design's target power.
///
/// γ_c is recalibrated at every candidate c.
pub fn required_c(design: &DesignInput) -> Result<f64> {
    smallest_c_reaching(|c| power(design, c), design.target_power)
}

/// Probability of the replication success region at θ_r = δ, i.e. with
/// z_r⁺ standard normal, for relative sample size `c`.
pub fn conditional_t1e_at(design: &DesignInput, c: f64) -> Result<f64> {
    let region = success_region_zr(design.z_o_plus(), design.f_o, c, design.alpha)?;
    Ok(region.probability(0.0))
}

/// Conditional Type-I error at the relative sample size chosen by
/// [`required_c`].
pub fn conditional_t1e(design: &DesignInput) -> Result<f64> {
    conditional_t1e_at(design, required_c(design)?)
}

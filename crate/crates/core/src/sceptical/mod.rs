//! The sceptical TOST procedure.
//!
//! Each one-sided TOST hypothesis gets a controlled sceptical p-value built
//! from the original and replication p-values for that side and the
//! relative sample size c. Replication success requires both to fall below
//! α. The control calibrates the sceptical level γ_c so that, for
//! superiority, the intersection-null Type-I error equals α² exactly.
//!
//! Success at level γ for a one-sided pair of z-values oriented towards the
//! alternative (z_o, z_r) is the reverse-Bayes condition
//!
//! ```text
//! z_o > z_γ   and   z_r ≥ z_γ √(1 + c / (K - 1)),   K = (z_o / z_γ)²
//! ```
//!
//! which is symmetric under swapping z_o and z_r.

mod calibration;
mod design;
mod oc;
mod pvalue;
mod region;

pub use calibration::{controlled_level, gamma_c, superiority_t1e, GammaC};
pub use design::{
    conditional_power, conditional_t1e, conditional_t1e_at, power, predictive_power, required_c,
};
pub use oc::{overall_t1e, partial_t1e, project_power, success_probability};
pub use pvalue::{
    decide, raw_sceptical_level, sceptical_p_from_z, sceptical_p_one_sided, sceptical_z,
    ScepticalResult,
};
pub use region::{bound_po_plus, bound_pr_plus, success_region_zo, success_region_zr, KRatio};

/// z_γ √(1 + c / (K - 1)) for a statistic `z` oriented towards the
/// alternative; `None` when `z <= z_γ`, where success is impossible.
pub(crate) fn sceptical_threshold(z: f64, z_gamma: f64, c: f64) -> Option<f64> {
    if !(z > z_gamma) {
        return None;
    }
    // c / (K - 1) = c z_γ² / ((z - z_γ)(z + z_γ))
    let ratio = c * z_gamma * z_gamma / ((z - z_gamma) * (z + z_gamma));
    Some(z_gamma * (1.0 + ratio).sqrt())
}

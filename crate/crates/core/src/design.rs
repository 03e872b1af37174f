//! Replication design inputs and the relative-sample-size search shared by
//! both methods.

use serde::{Deserialize, Serialize};

use crate::error::{check_alpha, check_probability, domain, Error, Result};
use crate::numkit::{find_root, norm_cdf, norm_quantile, RootBracket};
use crate::tost::{one_sided_z, z_minus_from_plus, StudyResult};

/// Which power definition drives the replication sample size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PowerFlavor {
    /// Treats the original estimate as the true effect.
    Conditional,
    /// Averages over the original estimate's uncertainty.
    Predictive,
}

/// Summary of a completed original study plus the design targets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignInput {
    pub p_o_plus: f64,
    pub f_o: f64,
    pub alpha: f64,
    pub target_power: f64,
    pub power_flavor: PowerFlavor,
}

impl DesignInput {
    pub fn new(p_o_plus: f64, f_o: f64, alpha: f64, target_power: f64, power_flavor: PowerFlavor) -> Result<Self> {
        check_probability("p_o_plus", p_o_plus)?;
        check_alpha(alpha)?;
        check_probability("target_power", target_power)?;
        if !(0.0..1.0).contains(&f_o) {
            return Err(domain(format!("f_o = {f_o} must lie in [0, 1); reorient the study pair first")));
        }
        Ok(Self { p_o_plus, f_o, alpha, target_power, power_flavor })
    }

    /// Builds the design from an original estimate, orienting it to be positive.
    pub fn from_study(
        original: StudyResult,
        margin: f64,
        alpha: f64,
        target_power: f64,
        power_flavor: PowerFlavor,
    ) -> Result<Self> {
        let oriented = StudyResult::new(original.estimate.abs(), original.std_err)?;
        let z = one_sided_z(oriented, margin)?;
        Self::new(norm_cdf(z.z_plus), z.f, alpha, target_power, power_flavor)
    }

    pub fn z_o_plus(&self) -> f64 {
        norm_quantile(self.p_o_plus).expect("validated p_o_plus")
    }

    pub fn z_o_minus(&self) -> f64 {
        z_minus_from_plus(self.z_o_plus(), self.f_o).expect("f_o < 1 by construction")
    }

    pub fn with_target(self, target_power: f64) -> Result<Self> {
        Self::new(self.p_o_plus, self.f_o, self.alpha, target_power, self.power_flavor)
    }

    pub fn with_flavor(self, power_flavor: PowerFlavor) -> Self {
        Self { power_flavor, ..self }
    }
}

/// Search range for the relative sample size; extended upward on demand.
pub const C_MIN: f64 = 1e-4;
pub const C_MAX: f64 = 1e4;
const C_HARD_MAX: f64 = 1e8;
const POINTS_PER_DECADE: usize = 24;

/// Smallest c in the search range with `power(c) >= target`.
///
/// The range is scanned on a log grid; the first crossing is polished by
/// Brent's method in log c. When no grid point reaches the target the
/// supremum of the power curve is estimated and reported in
/// [`Error::Infeasible`].
pub fn smallest_c_reaching<P>(power: P, target: f64) -> Result<f64>
where
    P: Fn(f64) -> Result<f64>,
{
    check_probability("target_power", target)?;
    let mut lo_exp = C_MIN.log10();
    let mut hi_exp = C_MAX.log10();
    let mut best = (f64::NEG_INFINITY, C_MIN.ln());
    let mut prev: Option<(f64, f64)> = None;

    loop {
        let steps = ((hi_exp - lo_exp) * POINTS_PER_DECADE as f64).round() as usize;
        for k in 0..=steps {
            if prev.is_some() && k == 0 {
                continue;
            }
            let u = (lo_exp + (hi_exp - lo_exp) * k as f64 / steps as f64) * std::f64::consts::LN_10;
            let value = power(u.exp())?;
            if value > best.0 {
                best = (value, u);
            }
            if value >= target {
                return match prev {
                    None => Ok(u.exp()),
                    Some((u_prev, v_prev)) => polish(&power, target, (u_prev, v_prev), (u, value)),
                };
            }
            prev = Some((u, value));
        }
        // keep extending unless the curve has turned down before the right edge
        let (_, v_last) = prev.expect("grid is non-empty");
        if v_last < best.0 - 1e-12 || hi_exp >= C_HARD_MAX.log10() {
            break;
        }
        lo_exp = hi_exp;
        hi_exp = (hi_exp + 2.0).min(C_HARD_MAX.log10());
    }
    let supremum = refine_max(&power, best.1)?;
    Err(Error::Infeasible { target, supremum })
}

fn polish<P>(power: &P, target: f64, lo: (f64, f64), hi: (f64, f64)) -> Result<f64>
where
    P: Fn(f64) -> Result<f64>,
{
    let mut failure = None;
    let objective = |u: f64| match power(u.exp()) {
        Ok(v) => v - target,
        Err(e) => {
            failure.get_or_insert(e);
            f64::NAN
        }
    };
    let bracket = RootBracket::from_values(lo.0, hi.0, lo.1 - target, hi.1 - target)?;
    let root = find_root(objective, bracket, 1e-12);
    match (root, failure) {
        (_, Some(e)) => Err(e),
        (Ok(u), None) => Ok(u.exp()),
        (Err(e), None) => Err(e),
    }
}

// golden-section refinement of the grid maximum, one grid step either side
fn refine_max<P>(power: &P, u_best: f64) -> Result<f64>
where
    P: Fn(f64) -> Result<f64>,
{
    let step = std::f64::consts::LN_10 / POINTS_PER_DECADE as f64;
    let (mut a, mut b) = (u_best - step, u_best + step);
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let mut f1 = power(x1.exp())?;
    let mut f2 = power(x2.exp())?;
    let mut best = power(u_best.exp())?.max(f1).max(f2);
    for _ in 0..60 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = power(x2.exp())?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = power(x1.exp())?;
        }
        best = best.max(f1).max(f2);
    }
    Ok(best)
}

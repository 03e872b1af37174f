use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use super::sceptical_threshold;
use crate::error::{check_alpha, check_positive, Error, Result};
use crate::numkit::{find_root, integrate, norm_pdf, norm_sf, z_upper, Interval, RootBracket, NORMAL_TRUNCATION};

const T1E_TOL: f64 = 1e-14;
const CACHE_LIMIT: usize = 1 << 16;

/// The controlled sceptical level for relative sample size `c` and level `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaC {
    pub c: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub z_gamma: f64,
}

/// Intersection-null success probability of the one-sided sceptical
/// criterion at level `gamma`, with z_o, z_r independent standard normal.
pub fn superiority_t1e(gamma: f64, c: f64) -> Result<f64> {
    check_positive("c", c)?;
    if !(0.0..=0.5).contains(&gamma) {
        return Err(crate::error::domain(format!("sceptical level {gamma} must lie in [0, 0.5]")));
    }
    if gamma == 0.0 {
        return Ok(0.0);
    }
    if gamma == 0.5 {
        // z_γ = 0: success iff both z are positive
        return Ok(0.25);
    }
    let z_g = z_upper(gamma)?;
    let integrand = |z_o: f64| match sceptical_threshold(z_o, z_g, c) {
        Some(t) => norm_pdf(z_o) * norm_sf(t),
        None => 0.0,
    };
    let limits = Interval::new(z_g, z_g.max(0.0) + NORMAL_TRUNCATION + 1.0)?;
    integrate(integrand, limits, T1E_TOL)
}

fn cache() -> &'static RwLock<HashMap<(u64, u64), GammaC>> {
    static CACHE: OnceLock<RwLock<HashMap<(u64, u64), GammaC>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Solves `superiority_t1e(γ, c) = α²` for γ in (α, 0.5).
///
/// Results are memoised on the exact bits of `(c, alpha)`.
pub fn gamma_c(c: f64, alpha: f64) -> Result<GammaC> {
    check_positive("c", c)?;
    check_alpha(alpha)?;
    let key = (c.to_bits(), alpha.to_bits());
    if let Some(hit) = cache().read().expect("gamma cache poisoned").get(&key) {
        return Ok(*hit);
    }
    let value = calibrate(c, alpha)?;
    let mut map = cache().write().expect("gamma cache poisoned");
    if map.len() >= CACHE_LIMIT {
        map.clear();
    }
    map.insert(key, value);
    Ok(value)
}

fn calibrate(c: f64, alpha: f64) -> Result<GammaC> {
    let target = alpha * alpha;
    let f_lo = superiority_t1e(alpha, c)? - target;
    let f_hi = superiority_t1e(0.5, c)? - target;
    let bracket = RootBracket::from_values(alpha, 0.5, f_lo, f_hi)
        .map_err(|e| Error::Calibration(format!("gamma not bracketed in ({alpha}, 0.5) for c = {c}: {e}")))?;
    let mut failure = None;
    let objective = |g: f64| match superiority_t1e(g, c) {
        Ok(v) => v - target,
        Err(e) => {
            failure.get_or_insert(e);
            f64::NAN
        }
    };
    let gamma = find_root(objective, bracket, 1e-15);
    if let Some(e) = failure {
        return Err(e);
    }
    let gamma = gamma.map_err(|e| Error::Calibration(e.to_string()))?;
    let residual = (superiority_t1e(gamma, c)? - target).abs();
    if residual > 1e-10 {
        return Err(Error::Calibration(format!("residual {residual:e} at gamma = {gamma}")));
    }
    Ok(GammaC { c, alpha, gamma, z_gamma: z_upper(gamma)? })
}

/// Inverse of [`gamma_c`] in α: the level α′ with γ_c(c, α′) = `gamma`,
/// i.e. √(superiority_t1e(γ, c)).
pub fn controlled_level(gamma: f64, c: f64) -> Result<f64> {
    Ok(superiority_t1e(gamma, c)?.sqrt())
}

//! Study summaries, margins and the four one-sided TOST statistics.

use serde::{Deserialize, Serialize};

use crate::error::{check_positive, domain, Error, Result};
use crate::numkit::{norm_cdf, norm_sf, z_upper, Interval};

/// Strict margin on the Fisher z scale (Cohen's d = 0.36).
pub const STRICT_MARGIN: f64 = 0.18;
/// Liberal margin on the Fisher z scale (Cohen's d = 0.74).
pub const LIBERAL_MARGIN: f64 = 0.36;

/// A normally distributed effect estimate and its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StudyResult {
    pub estimate: f64,
    pub std_err: f64,
}

impl StudyResult {
    pub fn new(estimate: f64, std_err: f64) -> Result<Self> {
        if !estimate.is_finite() {
            return Err(domain(format!("estimate {estimate} is not finite")));
        }
        check_positive("std_err", std_err)?;
        Ok(Self { estimate, std_err })
    }

    fn negated(self) -> Self {
        Self { estimate: -self.estimate, ..self }
    }
}

/// An original/replication pair assessed against the margin `[-margin, margin]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceProblem {
    pub original: StudyResult,
    pub replication: StudyResult,
    pub margin: f64,
}

impl EquivalenceProblem {
    pub fn new(original: StudyResult, replication: StudyResult, margin: f64) -> Result<Self> {
        check_positive("margin", margin)?;
        // re-validate in case the studies were built as literals
        StudyResult::new(original.estimate, original.std_err)?;
        StudyResult::new(replication.estimate, replication.std_err)?;
        Ok(Self { original, replication, margin })
    }

    /// Relative sample size c = σ_o² / σ_r².
    pub fn variance_ratio(&self) -> f64 {
        (self.original.std_err / self.replication.std_err).powi(2)
    }

    /// Negates both estimates when the original estimate is negative.
    ///
    /// With a symmetric margin this only swaps the roles of the two
    /// one-sided hypotheses; every maximum p-value is unchanged.
    pub fn orient_positive(&self) -> Self {
        if self.original.estimate < 0.0 {
            Self {
                original: self.original.negated(),
                replication: self.replication.negated(),
                margin: self.margin,
            }
        } else {
            *self
        }
    }

    pub fn original_z(&self) -> Result<OneSidedZ> {
        one_sided_z(self.original, self.margin)
    }

    pub fn replication_z(&self) -> Result<OneSidedZ> {
        one_sided_z(self.replication, self.margin)
    }
}

/// z-values for H0+ (θ ≥ δ) and H0- (θ ≤ -δ), and f = θ̂/δ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OneSidedZ {
    pub z_plus: f64,
    pub z_minus: f64,
    pub f: f64,
}

pub fn one_sided_z(study: StudyResult, delta: f64) -> Result<OneSidedZ> {
    check_positive("margin", delta)?;
    check_positive("std_err", study.std_err)?;
    Ok(OneSidedZ {
        z_plus: (study.estimate - delta) / study.std_err,
        z_minus: (study.estimate + delta) / study.std_err,
        f: study.estimate / delta,
    })
}

/// z⁻ = z⁺ (f + 1) / (f - 1).
pub fn z_minus_from_plus(z_plus: f64, f: f64) -> Result<f64> {
    if f == 1.0 {
        return Err(Error::Singular { f });
    }
    Ok(z_plus * (f + 1.0) / (f - 1.0))
}

/// The two one-sided p-values of a TOST and their maximum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TostPValues {
    pub p_plus: f64,
    pub p_minus: f64,
    pub p_max: f64,
}

pub fn tost_p(z: OneSidedZ) -> TostPValues {
    let p_plus = norm_cdf(z.z_plus);
    let p_minus = norm_sf(z.z_minus);
    TostPValues { p_plus, p_minus, p_max: p_plus.max(p_minus) }
}

/// The (1 - 2α) confidence interval θ̂ ± z_α σ.
pub fn confidence_interval(study: StudyResult, alpha: f64) -> Result<Interval> {
    crate::error::check_alpha(alpha)?;
    let half = z_upper(alpha)? * study.std_err;
    Interval::new(study.estimate - half, study.estimate + half)
}

/// A correlation coefficient and the sample size it was estimated from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationStudy {
    pub r: f64,
    pub n: u64,
}

/// Fisher z-transformation: estimate atanh(r), standard error 1/√(n - 3).
pub fn fisher_transform(cs: CorrelationStudy) -> Result<StudyResult> {
    if !(cs.r.abs() < 1.0) {
        return Err(domain(format!("correlation r = {} must satisfy |r| < 1", cs.r)));
    }
    if cs.n <= 3 {
        return Err(domain(format!("sample size n = {} must exceed 3", cs.n)));
    }
    StudyResult::new(cs.r.atanh(), 1.0 / ((cs.n - 3) as f64).sqrt())
}

/// True effects and standard errors of a hypothetical study pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairTruth {
    pub theta_o: f64,
    pub theta_r: f64,
    pub delta: f64,
    pub sigma_o: f64,
    pub sigma_r: f64,
}

impl PairTruth {
    pub fn validate(&self) -> Result<()> {
        check_positive("delta", self.delta)?;
        check_positive("sigma_o", self.sigma_o)?;
        check_positive("sigma_r", self.sigma_r)?;
        if !(self.theta_o.is_finite() && self.theta_r.is_finite()) {
            return Err(domain("true effects must be finite"));
        }
        Ok(())
    }

    pub fn variance_ratio(&self) -> f64 {
        (self.sigma_o / self.sigma_r).powi(2)
    }

    /// Pair on the margin scale: δ = 1, σ_o = 1/μ, σ_r = σ_o/√c, with the
    /// true effects given as multiples of δ.
    pub fn from_power_scale(mu: f64, c: f64, theta_o: f64, theta_r: f64) -> Result<Self> {
        check_positive("mu", mu)?;
        check_positive("c", c)?;
        let sigma_o = 1.0 / mu;
        let truth = Self { theta_o, theta_r, delta: 1.0, sigma_o, sigma_r: sigma_o / c.sqrt() };
        truth.validate()?;
        Ok(truth)
    }
}

/// Feasible interval for a z-statistic under a success criterion.
///
/// An empty region is reported with `lower = +inf`, `upper = -inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuccessRegion {
    pub lower: f64,
    pub upper: f64,
    pub feasible: bool,
}

impl SuccessRegion {
    pub const EMPTY: SuccessRegion = SuccessRegion {
        lower: f64::INFINITY,
        upper: f64::NEG_INFINITY,
        feasible: false,
    };

    pub fn new(lower: f64, upper: f64) -> Self {
        Self { lower, upper, feasible: lower < upper }
    }

    pub fn contains(&self, z: f64) -> bool {
        self.feasible && self.lower < z && z < self.upper
    }

    /// Probability of the region for a unit-variance normal statistic with
    /// mean `-shift`.
    pub fn probability(&self, shift: f64) -> f64 {
        if !self.feasible {
            return 0.0;
        }
        (norm_cdf(self.upper + shift) - norm_cdf(self.lower + shift)).max(0.0)
    }
}

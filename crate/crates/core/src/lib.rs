//! Analysis and design of replication studies with an equivalence design.
//!
//! Two success criteria are provided: the two-trials rule (TOST applied to
//! the original and to the replication study) and the sceptical TOST
//! procedure built on controlled sceptical p-values. For both, the crate
//! computes decisions, success regions, necessary bounds on the one-sided
//! p-values, operating characteristics (project power, overall and partial
//! Type-I error) and replication sample sizes from conditional or predictive
//! power. A seeded Monte Carlo simulator cross-checks every analytic formula.
//!
//! Effects live on a normal scale (e.g. Fisher z for correlations) with a
//! symmetric margin `[-delta, delta]`.

// negated comparisons below deliberately reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod design;
pub mod error;
pub mod exec;
pub mod mc;
pub mod numkit;
pub mod sceptical;
pub mod tost;
pub mod two_trials;

pub use design::{DesignInput, PowerFlavor};
pub use error::{Error, Result};
pub use exec::Execution;
pub use tost::{
    CorrelationStudy, EquivalenceProblem, OneSidedZ, PairTruth, StudyResult, SuccessRegion, TostPValues,
    LIBERAL_MARGIN, STRICT_MARGIN,
};

/// One-sided significance level used throughout unless overridden.
pub const DEFAULT_ALPHA: f64 = 0.05;

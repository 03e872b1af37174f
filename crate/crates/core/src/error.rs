use thiserror::Error;

/// Errors raised by the numerical kernel and the replication methods.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// A formula with `(f - 1)` in a denominator was evaluated at `f = 1`.
    #[error("singular input: f = {f} sits on the equivalence margin")]
    Singular { f: f64 },

    #[error("root not bracketed: f({lo}) = {f_lo}, f({hi}) = {f_hi}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("root finder did not converge within {iterations} iterations")]
    MaxIterations { iterations: usize },

    #[error("quadrature did not reach tolerance {abs_tol:e} (error estimate {estimate:e}) after {intervals} subintervals")]
    Quadrature { abs_tol: f64, estimate: f64, intervals: usize },

    #[error("calibration failed: {0}")]
    Calibration(String),

    /// The requested power cannot be reached for any relative sample size.
    #[error("infeasible design: target power {target} exceeds the attainable supremum {supremum:.6}")]
    Infeasible { target: f64, supremum: f64 },

    /// The method declines to size a replication for this original result.
    #[error("design refused: {0}")]
    Refused(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn check_probability(name: &str, p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("{name} = {p} must lie in (0, 1)")))
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 0.5 {
        Ok(())
    } else {
        Err(domain(format!("alpha = {alpha} must lie in (0, 0.5)")))
    }
}

pub(crate) fn check_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{name} = {x} must be positive and finite")))
    }
}

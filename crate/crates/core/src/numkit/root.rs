use crate::error::{domain, Error, Result};

/// Default bracket-width tolerance for root finding.
pub const DEFAULT_ROOT_TOL: f64 = 1e-10;

const MAX_ITERATIONS: usize = 200;

/// A bracket `[lo, hi]` across which the objective changes sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootBracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl RootBracket {
    /// Evaluates `f` at both ends and checks for a sign change.
    pub fn new<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64) -> Result<Self> {
        let (f_lo, f_hi) = (f(lo), f(hi));
        Self::from_values(lo, hi, f_lo, f_hi)
    }

    pub fn from_values(lo: f64, hi: f64, f_lo: f64, f_hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(domain(format!("invalid bracket [{lo}, {hi}]")));
        }
        if f_lo.is_nan() || f_hi.is_nan() || f_lo.signum() * f_hi.signum() > 0.0 && f_lo != 0.0 && f_hi != 0.0 {
            return Err(Error::NoSignChange { lo, hi, f_lo, f_hi });
        }
        Ok(Self { lo, hi, f_lo, f_hi })
    }
}

/// Brent's method on a sign-changing bracket, to bracket width `tol`.
pub fn find_root<F: FnMut(f64) -> f64>(f: F, bracket: RootBracket, tol: f64) -> Result<f64> {
    find_root_with(f, bracket, tol, MAX_ITERATIONS)
}

pub fn find_root_with<F: FnMut(f64) -> f64>(
    mut f: F,
    bracket: RootBracket,
    tol: f64,
    max_iterations: usize,
) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(domain(format!("root tolerance {tol} must be positive")));
    }
    let RootBracket { lo: mut a, hi: mut b, f_lo: mut fa, f_hi: mut fb } = bracket;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;

    for _ in 0..max_iterations {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // inverse quadratic interpolation, or secant when a == c
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * xm * s, 1.0 - s)
            } else {
                let q = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0)),
                    (q - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
        if fb.is_nan() {
            return Err(domain(format!("objective is NaN at {b}")));
        }
    }
    Err(Error::MaxIterations { iterations: max_iterations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::norm_cdf;
    use approx::assert_abs_diff_eq;

    fn solve<F: Fn(f64) -> f64 + Copy>(f: F, lo: f64, hi: f64) -> f64 {
        find_root(f, RootBracket::new(f, lo, hi).unwrap(), 1e-12).unwrap()
    }

    #[test]
    fn reference_roots() {
        assert_abs_diff_eq!(solve(|x| x - 2.0, 0.0, 5.0), 2.0, epsilon = 1e-10);
        assert_abs_diff_eq!(solve(|x| norm_cdf(x) - 0.95, 0.0, 3.0), 1.644_853_626_951_472, epsilon = 1e-9);
        assert_abs_diff_eq!(solve(|x| x * x - 2.0, 1.0, 2.0), std::f64::consts::SQRT_2, epsilon = 1e-10);
    }

    #[test]
    fn rejects_bracket_without_sign_change() {
        let err = RootBracket::new(|x| x * x + 1.0, -1.0, 1.0).unwrap_err();
        assert!(matches!(err, Error::NoSignChange { .. }));
    }

    #[test]
    fn endpoint_roots_are_returned() {
        assert_eq!(solve(|x| x, 0.0, 1.0), 0.0);
    }

    #[test]
    fn iteration_cap_is_reported() {
        let f = |x: f64| x.powi(3) - 0.3;
        let bracket = RootBracket::new(f, -10.0, 10.0).unwrap();
        assert!(matches!(find_root_with(f, bracket, 1e-15, 2), Err(Error::MaxIterations { .. })));
    }
}

//! Numerical kernel: standard normal functions, a bracketing root finder and
//! adaptive Gauss-Kronrod quadrature.
//!
//! Every routine here is a pure function of its inputs.

mod normal;
mod quad;
mod root;

pub use normal::{norm_cdf, norm_pdf, norm_quantile, norm_sf, z_upper};
pub use quad::{integrate, integrate_with, Interval, QuadConfig, DEFAULT_QUAD_TOL, NORMAL_TRUNCATION};
pub use root::{find_root, find_root_with, RootBracket, DEFAULT_ROOT_TOL};

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{domain, Error, Result};

/// Absolute tolerance used by the operating-characteristic integrals.
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;

/// Half-infinite or infinite limits against a standard normal weight are cut
/// here; the omitted tail mass is below 1e-15.
pub const NORMAL_TRUNCATION: f64 = 8.0;

/// Closed integration interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(domain(format!("interval [{lo}, {hi}] must be finite")));
        }
        if lo > hi {
            return Err(domain(format!("interval [{lo}, {hi}] has lo > hi")));
        }
        Ok(Self { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Whether `x` lies strictly inside.
    pub fn contains_open(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self { abs_tol: DEFAULT_QUAD_TOL, max_subdivisions: 4000 }
    }
}

// G7-K15 abscissae and weights on [-1, 1], positive half.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Segment {
    let centre = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(centre);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    Segment { lo, hi, value, error }
}

/// Integrates `f` over `limits` to absolute tolerance `abs_tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, limits: Interval, abs_tol: f64) -> Result<f64> {
    integrate_with(f, limits, QuadConfig { abs_tol, ..QuadConfig::default() })
}

/// Globally adaptive G7-K15: the segment with the largest error estimate is
/// bisected until the summed estimate drops below the tolerance.
pub fn integrate_with<F: Fn(f64) -> f64>(f: F, limits: Interval, config: QuadConfig) -> Result<f64> {
    if !(config.abs_tol > 0.0) {
        return Err(domain(format!("abs_tol = {} must be positive", config.abs_tol)));
    }
    if limits.width() == 0.0 {
        return Ok(0.0);
    }
    let first = kronrod15(&f, limits.lo, limits.hi);
    if !first.value.is_finite() {
        return Err(domain("integrand is not finite on the interval"));
    }
    let mut error = first.error;
    let mut heap = BinaryHeap::from([first]);

    while error > config.abs_tol {
        if heap.len() >= config.max_subdivisions {
            return Err(Error::Quadrature {
                abs_tol: config.abs_tol,
                estimate: error,
                intervals: heap.len(),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // segment can no longer be split in floating point
            return Err(Error::Quadrature {
                abs_tol: config.abs_tol,
                estimate: error,
                intervals: heap.len() + 1,
            });
        }
        let left = kronrod15(&f, worst.lo, mid);
        let right = kronrod15(&f, mid, worst.hi);
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    Ok(heap.iter().map(|s| s.value).sum())
}

//! Globally adaptive Gauss-Kronrod quadrature.
//!
//! 7-point Gauss / 15-point Kronrod pair with worst-interval-first
//! bisection. Endpoint square-root behaviour (the detector integrands
//! vanish like sqrt(t - a) at the lower limit) is handled by repeated
//! subdivision of the offending cell.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

// Kronrod abscissae for [-1, 1]; odd entries are the embedded Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];
#[allow(clippy::excessive_precision)]
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

/// One Gauss-Kronrod 15 pass over [a, b]: returns (integral, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let f_center = f(center);
    let mut res_gauss = f_center * WG[3];
    let mut res_kronrod = f_center * WGK[7];

    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        let fsum = f1 + f2;
        if j % 2 != 0 {
            res_gauss += WG[j / 2] * fsum;
        }
        res_kronrod += WGK[j] * fsum;
    }

    let integral = res_kronrod * half;
    let err = ((res_kronrod - res_gauss) * half).abs();
    (integral, err)
}

const MAX_INTERVALS: usize = 50_000;

struct Cell {
    err: f64,
    a: f64,
    b: f64,
    integral: f64,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Integrate `f` over [a, b] to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    integrate_with_breakpoints(f, &[a, b], tol)
}

/// Integrate over [pts[0], pts.last()], seeding the adaptive queue with the
/// given initial subdivision. Breakpoints let callers pre-resolve sharply
/// peaked integrands (e.g. weights like exp(-M*u) with large M) whose
/// features a single coarse pass would miss entirely.
pub fn integrate_with_breakpoints<F: Fn(f64) -> f64>(f: F, pts: &[f64], tol: f64) -> Result<f64> {
    assert!(pts.len() >= 2, "need at least two breakpoints");
    let mut heap: BinaryHeap<Cell> = BinaryHeap::new();
    let mut err_sum = 0.0;

    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a == b {
            continue;
        }
        let (integral, err) = gk15(&f, a, b);
        err_sum += err;
        heap.push(Cell {
            err,
            a,
            b,
            integral,
        });
    }

    let mut splits: u32 = 0;
    while err_sum > tol {
        if heap.len() >= MAX_INTERVALS {
            return Err(Error::QuadratureNonConvergence {
                achieved: err_sum,
                requested: tol,
            });
        }
        splits += 1;
        if splits.is_multiple_of(256) {
            // refresh the running error total; incremental updates
            // accumulate cancellation error at tight tolerances
            err_sum = heap.iter().map(|c| c.err).sum();
            if err_sum <= tol {
                break;
            }
        }
        let worst = heap.pop().expect("nonempty interval set");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // worst interval no longer splittable in f64
            return Err(Error::QuadratureNonConvergence {
                achieved: err_sum,
                requested: tol,
            });
        }
        let (s1, e1) = gk15(&f, worst.a, mid);
        let (s2, e2) = gk15(&f, mid, worst.b);
        err_sum += e1 + e2 - worst.err;
        heap.push(Cell {
            err: e1,
            a: worst.a,
            b: mid,
            integral: s1,
        });
        heap.push(Cell {
            err: e2,
            a: mid,
            b: worst.b,
            integral: s2,
        });
    }

    // sum the final cells compensated, smallest magnitude first; a running
    // incremental total would carry the cancellation noise of every split
    let mut cells: Vec<f64> = heap.iter().map(|c| c.integral).collect();
    cells.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    Ok(crate::util::kahan_sum(cells))
}

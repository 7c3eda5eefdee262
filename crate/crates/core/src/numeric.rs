//! Scalar bracketing solvers shared by the factoring and calibration code.

use crate::{Error, Result};

/// Bisection for a sign change of `f` on `[lo, hi]`.
///
/// Stops once the bracket is narrower than `rel_tol` relative to its
/// endpoints, when the floating-point midpoint stops moving, or after
/// `max_iter` halvings. Returns the midpoint of the final bracket.
pub(crate) fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, rel_tol: f64, max_iter: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut f_lo = f(lo)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    let f_hi = f(hi)?;
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::NoBracket { lo, hi });
    }
    for _ in 0..max_iter {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if hi - lo <= rel_tol * lo.abs().max(hi.abs()) {
            break;
        }
    }
    Ok(lo + 0.5 * (hi - lo))
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`,
/// down to a bracket of width `x_tol`.
/// Returns the abscissa and value of the best point evaluated.
pub(crate) fn golden_max<F>(mut f: F, mut a: f64, mut b: f64, x_tol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    // 200 iterations shrink any bracket far below f64 resolution.
    for _ in 0..200 {
        if b - a <= x_tol {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

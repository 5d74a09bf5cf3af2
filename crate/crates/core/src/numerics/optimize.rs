use crate::tolerances::{ROOT_MAX_DOUBLINGS, ROOT_RELATIVE};
use crate::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimum of `f` on `[lo, hi]`.
///
/// Stops once the bracket is narrower than `tol` and returns the bracket
/// midpoint with `f` evaluated there. For a function that is not unimodal on
/// the interval this finds a local minimum only.
pub fn minimize_unimodal(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() || !(tol > 0.0) {
        return Err(Error::InvalidBracket { lo, hi });
    }
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    Ok((x, f(x)))
}

/// Finds `x >= lo` with `f(x) = target` for nondecreasing `f`.
///
/// The upper end starts at `hi_initial` and doubles its distance from `lo`
/// until `f` reaches `target`; bisection then narrows the bracket to a
/// relative width of 1e-9.
pub fn solve_increasing(
    f: impl Fn(f64) -> f64,
    target: f64,
    lo: f64,
    hi_initial: f64,
) -> Result<f64> {
    if !(hi_initial > lo) {
        return Err(Error::InvalidBracket { lo, hi: hi_initial });
    }
    let f_lo = f(lo);
    if f_lo > target {
        return Err(Error::NoBracket {
            target,
            doublings: 0,
        });
    }
    if f_lo == target {
        return Ok(lo);
    }
    let mut a = lo;
    let mut b = hi_initial;
    let mut doublings = 0;
    while f(b) < target {
        if doublings == ROOT_MAX_DOUBLINGS {
            return Err(Error::NoBracket { target, doublings });
        }
        a = b;
        b = lo + 2.0 * (b - lo);
        doublings += 1;
    }
    while b - a > ROOT_RELATIVE * b.abs().max(1.0) {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if f(mid) < target {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

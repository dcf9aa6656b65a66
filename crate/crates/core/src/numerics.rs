//! Bracketing, bisection and finite-difference stencils used by the
//! trajectory and action modules.

use crate::error::{ModelError, Result};

/// Interval `[lo, hi]` over which a function changes sign (or vanishes at an end).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    /// Sign of the function just left of the root (`+1.0` or `-1.0`).
    pub sign_before: f64,
}

/// Walks `[a, b]` on a uniform grid of spacing at most `step` and returns
/// every sub-interval where `f` changes sign, in increasing `x`.
///
/// Grid points where `f` is exactly zero produce a degenerate bracket
/// `[x, x]` only when the sign on either side differs. Sign changes closer
/// together than `step` can be missed.
pub fn scan_sign_changes<F>(f: F, a: f64, b: f64, step: f64) -> Result<Vec<Bracket>>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(ModelError::invalid(
            "range",
            "requires finite x_min < x_max",
        ));
    }
    if !(step > 0.0) || !step.is_finite() {
        return Err(ModelError::invalid("grid_step", "must be positive"));
    }
    let n = ((b - a) / step).ceil().max(1.0) as usize;
    let h = (b - a) / n as f64;
    let at = |i: usize| if i == n { b } else { a + h * i as f64 };

    let mut out = Vec::new();
    // last non-zero sign seen and the grid point where it was seen
    let mut last: Option<(f64, f64)> = None;
    let mut zero_run: Option<f64> = None;
    for i in 0..=n {
        let x = at(i);
        let v = f(x)?;
        if v.is_nan() {
            return Err(ModelError::NumericalFailure(format!(
                "NaN while scanning at x = {x}"
            )));
        }
        if v == 0.0 {
            zero_run.get_or_insert(x);
            continue;
        }
        let s = v.signum();
        if let Some((prev_s, prev_x)) = last {
            if prev_s != s {
                match zero_run {
                    Some(z) => out.push(Bracket {
                        lo: z,
                        hi: z,
                        sign_before: prev_s,
                    }),
                    None => out.push(Bracket {
                        lo: prev_x,
                        hi: x,
                        sign_before: prev_s,
                    }),
                }
            }
        }
        zero_run = None;
        last = Some((s, x));
    }
    Ok(out)
}

/// Bisection on a bracket until its width is at most `tol`; returns the midpoint.
pub fn bisect<F>(f: F, bracket: Bracket, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let (mut lo, mut hi) = (bracket.lo, bracket.hi);
    if lo == hi {
        return Ok(lo);
    }
    let s_lo = bracket.sign_before;
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid)?;
        if v == 0.0 {
            return Ok(mid);
        }
        if v.signum() == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// All roots of `f` on `[a, b]`: grid bracketing then bisection to `tol`.
pub fn find_roots<F>(f: F, a: f64, b: f64, step: f64, tol: f64) -> Result<Vec<(f64, Bracket)>>
where
    F: Fn(f64) -> Result<f64>,
{
    scan_sign_changes(&f, a, b, step)?
        .into_iter()
        .map(|br| bisect(&f, br, tol).map(|x| (x, br)))
        .collect()
}

/// Fourth-order central first derivative `(-f(x+2h) + 8f(x+h) - 8f(x-h) + f(x-2h)) / 12h`.
pub fn five_point_derivative<F>(f: F, x: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let fp2 = f(x + 2.0 * h)?;
    let fp1 = f(x + h)?;
    let fm1 = f(x - h)?;
    let fm2 = f(x - 2.0 * h)?;
    Ok((-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h))
}

/// Second-order central first derivative `(f(x+h) - f(x-h)) / 2h`.
pub fn central_derivative<F>(f: F, x: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    Ok((f(x + h)? - f(x - h)?) / (2.0 * h))
}

//! Adaptive Simpson quadrature on a finite interval.

use crate::error::{Error, Result};

const INITIAL_PANELS: usize = 32;
const MAX_DEPTH: u32 = 50;

/// Integrates `f` over `[a, b]` to a relative tolerance.
///
/// The interval is first split into a fixed number of panels to get a scale
/// estimate; each panel is then refined adaptively against an absolute
/// tolerance derived from that estimate.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && a <= b) || !(rel_tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "bad quadrature request on [{a}, {b}] with tolerance {rel_tol}"
        )));
    }
    if a == b {
        return Ok(0.0);
    }
    let width = (b - a) / INITIAL_PANELS as f64;
    let panels: Vec<(f64, f64, f64, f64, f64)> = (0..INITIAL_PANELS)
        .map(|i| {
            let lo = a + width * i as f64;
            let hi = if i + 1 == INITIAL_PANELS { b } else { lo + width };
            let (flo, fmid, fhi) = (f(lo), f(0.5 * (lo + hi)), f(hi));
            (lo, hi, flo, fmid, fhi)
        })
        .collect();
    let rough: f64 = panels.iter().map(|&(lo, hi, fl, fm, fh)| simpson(lo, hi, fl, fm, fh)).sum();
    let tol = rel_tol * rough.abs().max(f64::MIN_POSITIVE) / INITIAL_PANELS as f64;

    panels
        .into_iter()
        .map(|(lo, hi, fl, fm, fh)| {
            let whole = simpson(lo, hi, fl, fm, fh);
            refine(&f, lo, hi, fl, fm, fh, whole, tol, MAX_DEPTH)
        })
        .sum()
}

#[inline]
fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if !delta.is_finite() {
        return Err(Error::Quadrature { a, b });
    }
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::Quadrature { a, b });
    }
    Ok(refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
        + refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
}

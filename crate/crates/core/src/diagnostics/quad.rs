//! Adaptive Simpson quadrature.

use crate::error::CoreError;

const MAX_DEPTH: u32 = 48;

fn simpson(a: f64, fa: f64, b: f64, fb: f64, fm: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64, CoreError> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, fa, m, fm, flm);
    let right = simpson(m, fm, b, fb, frm);
    let delta = left + right - whole;
    if libm::fabs(delta) <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth >= MAX_DEPTH {
        return Err(CoreError::NonConvergence {
            what: "adaptive quadrature",
        });
    }
    let l = recurse(f, a, fa, m, fm, flm, left, 0.5 * tol, depth + 1)?;
    let r = recurse(f, m, fm, b, fb, frm, right, 0.5 * tol, depth + 1)?;
    Ok(l + r)
}

/// Integrate `f` over `[a, b]` to absolute tolerance `tol`.
pub(crate) fn integrate(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64, CoreError> {
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, fa, b, fb, fm);
    recurse(f, a, fa, b, fb, fm, whole, tol, 0)
}

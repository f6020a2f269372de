//! Closed-form bound curves for overlaying on empirical per-step data.
//!
//! `eps_t = (a1 + 3) * gamma * ell / t + sqrt(10 ln k) * sqrt(2n / (t k))`
//! and the blocking-probability shape
//! `p_t = o1 / (k (1 - t/n - a5 * gamma * ln k / k)^2)`. The `o1` and `a5`
//! constants are analysis artifacts the curves are parameterized by; the
//! lab overlays these curves, it never asserts them.

use alloc::vec::Vec;

use crate::item::AlgoConstants;
use crate::math;
use crate::params::ModelParams;

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CurvePoint {
    pub t: usize,
    pub c_t: f64,
    pub eps_t: f64,
    /// Infinite where the denominator is nonpositive (past the curve's
    /// domain).
    pub p_t: f64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BoundCurves {
    /// Burn-in time `1212 * gamma * ell` below which the value bound is
    /// silent.
    pub t0: usize,
    pub o1: f64,
    pub a5: f64,
    pub points: Vec<CurvePoint>,
}

pub fn eps_t(params: &ModelParams, constants: &AlgoConstants, t: usize) -> f64 {
    let n = params.n() as f64;
    let k = params.k();
    let gl = (params.gamma() * params.ell()) as f64;
    (constants.a1 + 3.0) * gl / t as f64
        + math::sqrt(10.0 * math::ln(k)) * math::sqrt(2.0 * n / (t as f64 * k))
}

pub fn p_t(params: &ModelParams, o1: f64, a5: f64, t: usize) -> f64 {
    let n = params.n() as f64;
    let k = params.k();
    let denom_core = 1.0 - t as f64 / n - a5 * params.gamma() as f64 * math::ln(k) / k;
    if denom_core <= 0.0 {
        f64::INFINITY
    } else {
        o1 / (k * denom_core * denom_core)
    }
}

/// Evaluate `c_t`, `eps_t`, `p_t` at the given times (all of `1..=n` when
/// `times` is empty).
pub fn bound_curves(
    params: &ModelParams,
    constants: &AlgoConstants,
    o1: f64,
    a5: f64,
    times: &[usize],
) -> BoundCurves {
    let all: Vec<usize>;
    let times = if times.is_empty() {
        all = (1..=params.n()).collect();
        &all
    } else {
        times
    };
    BoundCurves {
        t0: 1212 * params.gamma() * params.ell(),
        o1,
        a5,
        points: times
            .iter()
            .map(|&t| CurvePoint {
                t,
                c_t: params.budget_scale_c(t),
                eps_t: eps_t(params, constants, t),
                p_t: p_t(params, o1, a5, t),
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;

    #[test]
    fn eps_matches_formula_with_no_adversary() {
        // gamma = 0, t = n = 10^4, k = 100:
        // sqrt(10 ln 100) * sqrt(2e4 / 1e6) = 0.959669...
        let p = ModelParams::new(10_000, 100.0, 0, BTreeSet::new(), None).unwrap();
        let c = AlgoConstants::paper();
        let e = eps_t(&p, &c, 10_000);
        assert!((e - 0.9597).abs() < 1e-4, "{e}");
        let direct = math::sqrt(10.0 * math::ln(100.0)) * math::sqrt(2.0 / 100.0);
        assert!((e - direct).abs() < 1e-15);
    }

    #[test]
    fn eps_strictly_decreasing() {
        let p =
            ModelParams::new(2000, 100.0, 2, [0usize, 1].into_iter().collect(), Some(20)).unwrap();
        let c = AlgoConstants::practical();
        let mut prev = f64::INFINITY;
        for t in 1..=2000 {
            let e = eps_t(&p, &c, t);
            assert!(e < prev, "eps not decreasing at t={t}");
            prev = e;
        }
    }

    #[test]
    fn curve_assembly_and_t0() {
        let p =
            ModelParams::new(2000, 100.0, 2, [0usize, 1].into_iter().collect(), Some(20)).unwrap();
        let c = AlgoConstants::practical();
        let curves = bound_curves(&p, &c, 1.0, 0.5, &[40, 400, 1000]);
        assert_eq!(curves.t0, 1212 * 2 * 20);
        assert_eq!(curves.points.len(), 3);
        assert_eq!(curves.points[0].c_t, 0.0); // 40 <= 4*gamma*ell = 160
        assert!(curves.points[2].p_t.is_finite());
        // Past the domain the blocking curve is infinite.
        let late = p_t(&p, 1.0, 10.0, 1999);
        assert!(late.is_infinite());
    }
}

//! The relaxed tentative indicator and the variance-growth diagnostic.
//!
//! `T-bar_t = max(T_t, 1[R_t <= 1])`: tentative, or low enough rank that
//! the bound gives nothing anyway. The cumulative relaxed tentative
//! occupation should have variance growing at most linearly in `t`; the
//! report fits a log-log regression slope over a caller-chosen grid.

use alloc::vec::Vec;

use super::stats;
use crate::algo::Trace;

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RelaxedTentative {
    /// Cumulation starts strictly after this time (the analysis regime).
    pub t_skip: usize,
    /// `(t, sample variance across trials of the cumulative relaxed
    /// tentative occupation up to t)`.
    pub variance_by_t: Vec<(usize, f64)>,
    /// Least-squares slope of `ln var` against `ln t` over the grid points
    /// with positive variance; absent when fewer than two such points.
    pub slope: Option<f64>,
}

/// Relaxed indicator for one record.
fn relaxed(rec: &crate::algo::StepRecord) -> bool {
    rec.tentative || rec.rank.is_some_and(|r| r <= 1.0)
}

/// Sample variance across traces of `sum_{t' in RO, t_skip < t' <= t}
/// W_{t'} * T-bar_{t'}` for each grid point `t`.
pub fn relaxed_tentative(traces: &[Trace], grid: &[usize]) -> RelaxedTentative {
    let t_skip = traces
        .first()
        .map(|tr| 8 * tr.params.ell() * (tr.params.gamma() + 1))
        .unwrap_or(0);
    let mut variance_by_t = Vec::with_capacity(grid.len());
    for &t in grid {
        let sums: Vec<f64> = traces
            .iter()
            .map(|tr| {
                tr.records
                    .iter()
                    .filter(|r| r.is_ro && r.time > t_skip && r.time <= t)
                    .filter(|r| relaxed(r))
                    .map(|r| r.item.weight)
                    .sum()
            })
            .collect();
        variance_by_t.push((t, stats::sample_variance(&sums)));
    }

    let pts: Vec<(f64, f64)> = variance_by_t
        .iter()
        .filter(|&&(t, v)| t > 0 && v > 0.0)
        .map(|&(t, v)| (crate::math::ln(t as f64), crate::math::ln(v)))
        .collect();
    let slope = if pts.len() >= 2 {
        let mx = stats::mean(&pts.iter().map(|p| p.0).collect::<Vec<_>>());
        let my = stats::mean(&pts.iter().map(|p| p.1).collect::<Vec<_>>());
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        if sxx > 0.0 {
            Some(sxy / sxx)
        } else {
            None
        }
    } else {
        None
    };
    RelaxedTentative {
        t_skip,
        variance_by_t,
        slope,
    }
}

/// Log-spaced grid of `points` times in `[lo, hi]`.
pub fn log_grid(lo: usize, hi: usize, points: usize) -> Vec<usize> {
    assert!(lo >= 1 && hi >= lo && points >= 1);
    let (a, b) = (crate::math::ln(lo as f64), crate::math::ln(hi as f64));
    let mut out: Vec<usize> = (0..points)
        .map(|i| {
            let f = if points == 1 {
                0.0
            } else {
                i as f64 / (points - 1) as f64
            };
            crate::math::round(crate::math::exp(a + f * (b - a))) as usize
        })
        .collect();
    out.dedup();
    out
}

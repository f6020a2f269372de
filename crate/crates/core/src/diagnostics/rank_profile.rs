//! Empirical tentative-selection frequency by weighted-rank bucket,
//! compared against the `psi` bound.

use alloc::vec::Vec;

use super::stats;
use crate::algo::Trace;
use crate::rank::psi;

/// One rank interval `[lo, hi)` (the last is unbounded): observation count,
/// tentative count, the applicable `psi` bound, and the flag raised when
/// the empirical frequency exceeds the bound by more than three binomial
/// standard errors.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RankBucket {
    pub lo: f64,
    pub hi: f64,
    pub total: u64,
    pub tentative: u64,
    pub frequency: f64,
    pub bound: f64,
    pub flagged: bool,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RankProfile {
    /// Only random-order steps at `t >= 8 ell (gamma + 1)` are counted (the
    /// regime the selection bound addresses).
    pub t_min: usize,
    pub buckets: Vec<RankBucket>,
}

/// Bucket edges mirror the `psi` cases — deciles of `[0, 1)` (bound 1, for
/// profiling), `[1, 50]`, and `(50, inf)` — so a frequency flag in any
/// bounded bucket is a genuine bound violation, never discretization slop.
pub fn rank_profile(traces: &[Trace]) -> RankProfile {
    let (k, t_min) = match traces.first() {
        Some(tr) => {
            let p = &tr.params;
            (p.k(), 8 * p.ell() * (p.gamma() + 1))
        }
        None => {
            return RankProfile {
                t_min: 0,
                buckets: Vec::new(),
            }
        }
    };

    // (lo, hi, bound); hi = infinity on the tail bucket.
    let mut edges: Vec<(f64, f64, f64)> = Vec::new();
    for d in 0..10 {
        edges.push((d as f64 / 10.0, (d + 1) as f64 / 10.0, 1.0));
    }
    edges.push((1.0, 50.0, psi(1.0, k)));
    // sup over (50, inf) is the limit at 50 from above.
    edges.push((50.0, f64::INFINITY, psi(50.0 + 1e-9, k)));

    let mut total = alloc::vec![0u64; edges.len()];
    let mut tentative = alloc::vec![0u64; edges.len()];
    for tr in traces {
        for rec in &tr.records {
            if rec.time < t_min || !rec.is_ro {
                continue;
            }
            let Some(rank) = rec.rank else { continue };
            let idx = edges
                .iter()
                .position(|&(lo, hi, _)| {
                    if hi.is_infinite() {
                        rank > lo
                    } else if lo == 1.0 {
                        // The middle bucket is closed: [1, 50].
                        (lo..=hi).contains(&rank)
                    } else {
                        (lo..hi).contains(&rank)
                    }
                })
                .expect("rank >= 0 is always bucketed");
            total[idx] += 1;
            if rec.tentative {
                tentative[idx] += 1;
            }
        }
    }

    let buckets = edges
        .iter()
        .enumerate()
        .filter(|&(i, _)| total[i] > 0)
        .map(|(i, &(lo, hi, bound))| {
            let frequency = tentative[i] as f64 / total[i] as f64;
            let sigma = stats::binomial_sigma(bound, total[i]);
            RankBucket {
                lo,
                hi,
                total: total[i],
                tentative: tentative[i],
                frequency,
                bound,
                flagged: bound < 1.0 && frequency > bound + 3.0 * sigma,
            }
        })
        .collect();
    RankProfile { t_min, buckets }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::{build_schedule, AdversaryStrategy};
    use crate::algo::run;
    use crate::item::{AlgoConstants, Item};
    use crate::params::ModelParams;
    use crate::rng::Rng;
    use alloc::collections::BTreeSet;
    use alloc::vec;

    #[test]
    fn low_rank_bucket_never_flagged() {
        // Generous constants: everything below rank 1 is tentatively
        // picked; bound there is 1, so no flag regardless.
        let mut rng = Rng::new(5);
        let pool: Vec<Item> = (0..40)
            .map(|_| Item {
                value: rng.open_closed(2.0),
                weight: rng.open_closed(1.0),
            })
            .collect();
        let p = ModelParams::new(40, 8.0, 0, BTreeSet::new(), Some(2)).unwrap();
        let c = AlgoConstants::paper();
        let traces: Vec<_> = (0..8)
            .map(|seed| {
                let s =
                    build_schedule(&pool, &p, &AdversaryStrategy::Static(vec![]), seed).unwrap();
                run(&s, &c).unwrap()
            })
            .collect();
        let prof = rank_profile(&traces);
        assert_eq!(prof.t_min, 16);
        for b in &prof.buckets {
            if b.hi <= 1.0 {
                assert_eq!(b.bound, 1.0);
                assert!(!b.flagged);
            }
        }
        // The [1, 50] bound is 2/k.
        if let Some(mid) = prof.buckets.iter().find(|b| b.lo == 1.0) {
            assert_eq!(mid.bound, 2.0 / 8.0);
        }
    }

    #[test]
    fn empty_input() {
        let prof = rank_profile(&[]);
        assert!(prof.buckets.is_empty());
    }
}

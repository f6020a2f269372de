//! Competitive-ratio statistics over a batch of traces.

use alloc::vec::Vec;

use super::stats;
use crate::algo::Trace;
use crate::item::Item;
use crate::offline::opt_ro;

/// Mean random-order value across trials, normalized by the offline
/// fractional optimum over the pool. `ratio_*` are absent when the
/// benchmark is zero (empty or fully covered pool).
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RatioReport {
    pub trials: usize,
    pub ro_value_mean: f64,
    pub ro_value_ci95: f64,
    pub opt_ro: f64,
    pub ratio_mean: Option<f64>,
    pub ratio_ci95: Option<f64>,
}

/// All traces must come from the same pool and parameters; the benchmark
/// is computed once from the pool.
pub fn competitive_ratio(traces: &[Trace], pool: &[Item], k: f64) -> RatioReport {
    let values: Vec<f64> = traces.iter().map(Trace::ro_value).collect();
    let opt = opt_ro(pool, k).expect("valid pool and k").total_value;
    let mean = stats::mean(&values);
    let ci = stats::ci95_half(&values);
    let (ratio_mean, ratio_ci95) = if opt > 0.0 {
        (Some(mean / opt), Some(ci / opt))
    } else {
        (None, None)
    };
    RatioReport {
        trials: traces.len(),
        ro_value_mean: mean,
        ro_value_ci95: ci,
        opt_ro: opt,
        ratio_mean,
        ratio_ci95,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::{build_schedule, AdversaryStrategy};
    use crate::algo::run;
    use crate::item::AlgoConstants;
    use crate::params::ModelParams;
    use alloc::collections::BTreeSet;
    use alloc::vec;

    #[test]
    fn unit_pool_full_pick_ratio_is_one() {
        // k >= n with slack constants: everything picked, |RO| = opt = k.
        let pool = vec![
            Item {
                value: 1.0,
                weight: 1.0
            };
            6
        ];
        let p = ModelParams::new(6, 6.0, 0, BTreeSet::new(), Some(3)).unwrap();
        let c = AlgoConstants::new(1e9, 1e9, false).unwrap();
        let traces: Vec<_> = (0..4)
            .map(|seed| {
                let s =
                    build_schedule(&pool, &p, &AdversaryStrategy::Static(vec![]), seed).unwrap();
                run(&s, &c).unwrap()
            })
            .collect();
        let r = competitive_ratio(&traces, &pool, 6.0);
        assert_eq!(r.trials, 4);
        assert_eq!(r.opt_ro, 6.0);
        assert_eq!(r.ratio_mean, Some(1.0));
        assert_eq!(r.ratio_ci95, Some(0.0));
    }

    #[test]
    fn zero_picks_and_empty_benchmark() {
        // Identical values: nothing ever exceeds the sample maximum, so the
        // threshold baseline picks nothing.
        let pool = vec![
            Item {
                value: 1.0,
                weight: 1.0
            };
            4
        ];
        let p = ModelParams::new(4, 1.0, 0, BTreeSet::new(), Some(2)).unwrap();
        let s = build_schedule(&pool, &p, &AdversaryStrategy::Static(vec![]), 0).unwrap();
        let tr = crate::algo::run_baseline_topk_filter(&s).unwrap();
        let r = competitive_ratio(core::slice::from_ref(&tr), &pool, 1.0);
        assert_eq!(r.ratio_mean, Some(0.0));

        // opt_ro = 0 on an empty pool: not applicable.
        let r = competitive_ratio(&[], &[], 1.0);
        assert_eq!(r.ratio_mean, None);
        assert_eq!(r.ratio_ci95, None);
    }
}

//! The offline benchmark: fractional knapsack over the random-order pool.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::CoreError;
use crate::item::Item;
use crate::rank::sort_pool;

/// A fractional selection: per-entry fractions in `[0, 1]` plus bookkeeping
/// totals. The alignment of `fractions` is whatever the producing operation
/// documents (input pool order for [`opt_ro`], instance entry order for the
/// LP solvers).
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FractionalSolution {
    pub fractions: Vec<f64>,
    pub total_value: f64,
    pub total_weight: f64,
}

/// Exact fractional-knapsack optimum: take items in density order at
/// fraction 1 until the budget binds, then one fractional item. Fractions
/// are aligned with the input pool order.
pub fn opt_ro(pool: &[Item], k: f64) -> Result<FractionalSolution, CoreError> {
    if !(k.is_finite() && k >= 0.0) {
        return Err(CoreError::InvalidParameter {
            what: "k",
            detail: format!("must be finite and >= 0, got {k}"),
        });
    }
    let (sorted, perm) = sort_pool(pool);
    let mut fractions = vec![0.0; pool.len()];
    let mut remaining = k;
    let mut total_value = 0.0;
    let mut total_weight = 0.0;
    for (pos, it) in sorted.iter().enumerate() {
        if remaining <= 0.0 {
            break;
        }
        let by_budget = remaining / it.weight;
        let take = if by_budget < 1.0 { by_budget } else { 1.0 };
        fractions[perm[pos]] = take;
        let mass = it.weight * take;
        remaining -= mass;
        total_value += it.value * take;
        total_weight += mass;
    }
    Ok(FractionalSolution {
        fractions,
        total_value,
        total_weight,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn item(v: f64, w: f64) -> Item {
        Item::new(v, w).unwrap()
    }

    #[test]
    fn greedy_examples() {
        let pool = vec![item(4.0, 1.0), item(3.0, 1.0), item(1.0, 1.0)];
        let s = opt_ro(&pool, 2.0).unwrap();
        assert_eq!(s.total_value, 7.0);
        assert_eq!(s.fractions, vec![1.0, 1.0, 0.0]);

        let s = opt_ro(&pool, 2.5).unwrap();
        assert_eq!(s.total_value, 7.5);
        assert_eq!(s.fractions, vec![1.0, 1.0, 0.5]);

        let s = opt_ro(&pool, 0.0).unwrap();
        assert_eq!(s.total_value, 0.0);
        assert_eq!(s.total_weight, 0.0);

        assert!(opt_ro(&pool, -1.0).is_err());
    }

    // Independent oracle: the fractional optimum is attained by filling some
    // density-sorted prefix fully plus at most one fractional breakpoint
    // item; enumerate every prefix.
    fn breakpoint_enumeration(pool: &[Item], k: f64) -> f64 {
        let (sorted, _) = sort_pool(pool);
        let mut best = 0.0f64;
        for cut in 0..=sorted.len() {
            let mut weight = 0.0;
            let mut value = 0.0;
            let mut feasible = true;
            for it in &sorted[..cut] {
                weight += it.weight;
                value += it.value;
                if weight > k + 1e-12 {
                    feasible = false;
                    break;
                }
            }
            if !feasible {
                continue;
            }
            let mut cand = value;
            if cut < sorted.len() {
                let it = sorted[cut];
                let frac = ((k - weight) / it.weight).clamp(0.0, 1.0);
                cand += it.value * frac;
            }
            if cand > best {
                best = cand;
            }
        }
        best
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn matches_breakpoint_enumeration(
            vs in proptest::collection::vec((0.05f64..10.0, 0.05f64..=1.0), 1..=12),
            k in 0.0f64..6.0,
        ) {
            let pool: Vec<Item> = vs.iter().map(|&(v, w)| item(v, w)).collect();
            let got = opt_ro(&pool, k).unwrap();
            let want = breakpoint_enumeration(&pool, k);
            prop_assert!((got.total_value - want).abs() <= 1e-9,
                "opt_ro {} vs enumeration {}", got.total_value, want);
            // Totals consistent with fractions.
            let v: f64 = pool.iter().zip(&got.fractions).map(|(it, x)| it.value * x).sum();
            let w: f64 = pool.iter().zip(&got.fractions).map(|(it, x)| it.weight * x).sum();
            prop_assert!((v - got.total_value).abs() <= 1e-9);
            prop_assert!((w - got.total_weight).abs() <= 1e-9);
            prop_assert!(got.total_weight <= k + 1e-9);
            for &x in &got.fractions {
                prop_assert!((0.0..=1.0).contains(&x));
            }
        }
    }
}

//! Density order, weighted ranks, and the tentative-selection bound `psi`.

use alloc::format;
use alloc::vec::Vec;

use crate::error::CoreError;
use crate::item::Item;
use crate::math;

/// Sort a pool by strictly decreasing value density, ties broken by the
/// original index. The deterministic tie-break is the concrete realization
/// of the infinitesimal density perturbations the model assumes, so runs
/// are reproducible.
///
/// Returns the sorted pool and the permutation `perm` with
/// `perm[sorted_pos] = original_index`.
pub fn sort_pool(pool: &[Item]) -> (Vec<Item>, Vec<usize>) {
    let mut idx: Vec<usize> = (0..pool.len()).collect();
    idx.sort_unstable_by(|&a, &b| {
        pool[b]
            .density()
            .total_cmp(&pool[a].density())
            .then(a.cmp(&b))
    });
    let sorted = idx.iter().map(|&i| pool[i]).collect();
    (sorted, idx)
}

/// Weighted ranks of a density-sorted pool: `rank(i) = (1/k) * sum of the
/// weights strictly before i`, plus the sentinel one past the end. Ranks
/// measure how much the knapsack must grow before the fractional optimum
/// starts taking the item; consecutive ranks differ by `w_i / k <= 1/k`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RankTable {
    ranks: Vec<f64>,
    sentinel: f64,
}

impl RankTable {
    pub fn rank(&self, sorted_index: usize) -> f64 {
        self.ranks[sorted_index]
    }

    pub fn ranks(&self) -> &[f64] {
        &self.ranks
    }

    /// `(1/k) * total pool weight`.
    pub fn sentinel(&self) -> f64 {
        self.sentinel
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }
}

/// Build the rank table of a density-sorted pool.
pub fn weighted_ranks(sorted_pool: &[Item], k: f64) -> Result<RankTable, CoreError> {
    if !(k.is_finite() && k > 0.0) {
        return Err(CoreError::InvalidParameter {
            what: "k",
            detail: format!("must be finite and > 0, got {k}"),
        });
    }
    let mut ranks = Vec::with_capacity(sorted_pool.len());
    let mut acc = 0.0;
    for it in sorted_pool {
        ranks.push(acc);
        acc += it.weight / k;
    }
    Ok(RankTable {
        ranks,
        sentinel: acc,
    })
}

/// Upper bound on the probability of a tentative selection as a function of
/// the weighted rank: 1 below rank 1, `2/k` on `[1, 50]`, and
/// `4k * exp(-(gamma/20) ln k)` beyond. Nonincreasing in `gamma` for every
/// `k >= 4`.
pub fn psi(gamma: f64, k: f64) -> f64 {
    if gamma < 1.0 {
        1.0
    } else if gamma <= 50.0 {
        2.0 / k
    } else {
        4.0 * k * math::exp(-(gamma / 20.0) * math::ln(k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn item(v: f64, w: f64) -> Item {
        Item::new(v, w).unwrap()
    }

    #[test]
    fn sort_examples() {
        // Densities 2, 3, 1.
        let pool = vec![item(2.0, 1.0), item(2.7, 0.9), item(1.0, 1.0)];
        let (sorted, perm) = sort_pool(&pool);
        assert_eq!(sorted, vec![item(2.7, 0.9), item(2.0, 1.0), item(1.0, 1.0)]);
        assert_eq!(perm, vec![1, 0, 2]);

        // Equal density: original order preserved.
        let tied = vec![item(1.0, 1.0), item(0.5, 0.5)];
        let (sorted, perm) = sort_pool(&tied);
        assert_eq!(sorted, tied);
        assert_eq!(perm, vec![0, 1]);

        let empty: Vec<Item> = vec![];
        assert_eq!(sort_pool(&empty).0, empty);
    }

    #[test]
    fn rank_examples() {
        let pool = vec![item(3.0, 1.0), item(1.0, 0.5), item(0.5, 1.0)];
        let t = weighted_ranks(&pool, 2.0).unwrap();
        assert_eq!(t.ranks(), &[0.0, 0.5, 0.75]);
        assert_eq!(t.sentinel(), 1.25);

        let single = vec![item(1.0, 1.0)];
        let t = weighted_ranks(&single, 3.0).unwrap();
        assert_eq!(t.ranks(), &[0.0]);
        assert_eq!(t.sentinel(), 1.0 / 3.0);

        let units: Vec<Item> = (0..8).map(|i| item(8.0 - i as f64, 1.0)).collect();
        let t = weighted_ranks(&units, 4.0).unwrap();
        assert_eq!(t.ranks(), &[0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75]);

        assert!(weighted_ranks(&units, 0.0).is_err());
        assert!(weighted_ranks(&units, -1.0).is_err());
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi(0.5, 100.0), 1.0);
        assert_eq!(psi(25.0, 100.0), 0.02);
        // 4 * 100 * 100^-3 = 4e-4
        assert!((psi(60.0, 100.0) - 4e-4).abs() < 1e-18);
    }

    #[test]
    fn psi_below_one_past_rank_one() {
        for k in [80.0, 100.0, 1e4] {
            let mut g = 1.0;
            while g < 200.0 {
                assert!(psi(g, k) <= 1.0, "psi({g}, {k}) > 1");
                g += 0.37;
            }
        }
    }

    proptest! {
        // psi nonincreasing on a dense grid of [0, 200] for k >= 4.
        #[test]
        fn psi_nonincreasing(k in 4.0f64..1e6) {
            let mut prev = f64::INFINITY;
            for i in 0..=2000 {
                let g = 200.0 * i as f64 / 2000.0;
                let v = psi(g, k);
                prop_assert!(v <= prev + 1e-15, "psi not monotone at gamma={g}, k={k}");
                prev = v;
            }
        }

        // Consecutive ranks differ by w_i/k, and by at most 1/k.
        #[test]
        fn rank_increments(
            ws in proptest::collection::vec(0.01f64..=1.0, 1..40),
            k in 0.5f64..50.0,
        ) {
            let pool: Vec<Item> = ws.iter().enumerate()
                .map(|(i, &w)| item(1.0 + i as f64, w))
                .collect();
            let (sorted, _) = sort_pool(&pool);
            let t = weighted_ranks(&sorted, k).unwrap();
            let mut all = t.ranks().to_vec();
            all.push(t.sentinel());
            prop_assert_eq!(all[0], 0.0);
            for i in 0..sorted.len() {
                let d = all[i + 1] - all[i];
                let expect = sorted[i].weight / k;
                prop_assert!((d - expect).abs() <= 1e-12 * (1.0 + all[i + 1].abs()));
                prop_assert!(d <= 1.0 / k + 1e-12);
            }
        }

        // sort_pool emits a permutation in strictly compatible order.
        #[test]
        fn sort_is_permutation(
            vs in proptest::collection::vec((0.1f64..10.0, 0.05f64..=1.0), 0..30)
        ) {
            let pool: Vec<Item> = vs.iter().map(|&(v, w)| item(v, w)).collect();
            let (sorted, perm) = sort_pool(&pool);
            let mut seen = vec![false; pool.len()];
            for (pos, &orig) in perm.iter().enumerate() {
                prop_assert!(!seen[orig]);
                seen[orig] = true;
                prop_assert_eq!(sorted[pos], pool[orig]);
            }
            for w in sorted.windows(2) {
                prop_assert!(w[0].density() >= w[1].density());
            }
        }
    }
}

//! Schedule construction: the uniformly permuted random-order pool on free
//! times, adversary-chosen items on covered times, plus the named burst
//! generators and an adaptive-adversary hook.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use crate::algo::StepRecord;
use crate::error::CoreError;
use crate::item::Item;
use crate::params::ModelParams;
use crate::rank::{sort_pool, weighted_ranks, RankTable};
use crate::rng::Rng;

/// One time step of a realized arrival sequence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Slot {
    /// A pool item; `ro_index` is its position in the density-sorted pool
    /// (which is also its tie token and its row in the rank table).
    Ro { item: Item, ro_index: usize },
    /// A fixed adversarial emission.
    AdvStatic { item: Item },
    /// An adversarial emission produced at run time by an [`AdaptiveRule`].
    AdvAdaptive,
}

impl Slot {
    pub fn is_ro(&self) -> bool {
        matches!(self, Slot::Ro { .. })
    }
}

/// The realized arrival sequence: which item appears at which time, with
/// random-order/adversarial labels. Random-order labels sit exactly on the
/// uncovered times and carry the pool in a seed-determined uniform order.
#[derive(Clone, Debug)]
pub struct Schedule {
    pub params: ModelParams,
    pub seed: u64,
    pub slots: Vec<Slot>,
    /// The pool in canonical (density-sorted) order.
    pub sorted_pool: Vec<Item>,
    /// `sort_perm[sorted_pos] = index in the pool as given`.
    pub sort_perm: Vec<usize>,
    pub rank_table: RankTable,
}

impl Schedule {
    /// All random-order arrivals as `(time, item)`, ascending in time.
    pub fn ro_arrivals(&self) -> Vec<(usize, Item)> {
        self.slots
            .iter()
            .enumerate()
            .filter_map(|(i, s)| match s {
                Slot::Ro { item, .. } => Some((i + 1, *item)),
                _ => None,
            })
            .collect()
    }

    pub fn is_fully_static(&self) -> bool {
        !self.slots.iter().any(|s| matches!(s, Slot::AdvAdaptive))
    }

    /// Structural invariants: length `n`, labels matching the cover, and
    /// the random-order multiset equal to the pool with each index used
    /// exactly once.
    pub fn validate(&self) -> Result<(), CoreError> {
        let n = self.params.n();
        if self.slots.len() != n {
            return Err(CoreError::InvalidParameter {
                what: "schedule",
                detail: format!("has {} slots, expected {n}", self.slots.len()),
            });
        }
        let mut used = alloc::vec![false; self.sorted_pool.len()];
        for (i, slot) in self.slots.iter().enumerate() {
            let t = i + 1;
            match slot {
                Slot::Ro { item, ro_index } => {
                    if self.params.is_covered_time(t) {
                        return Err(CoreError::InvalidParameter {
                            what: "schedule",
                            detail: format!("random-order label inside covered window at t={t}"),
                        });
                    }
                    if *ro_index >= used.len() || used[*ro_index] {
                        return Err(CoreError::InvalidParameter {
                            what: "schedule",
                            detail: format!("pool index {ro_index} reused or out of range"),
                        });
                    }
                    used[*ro_index] = true;
                    if *item != self.sorted_pool[*ro_index] {
                        return Err(CoreError::InvalidParameter {
                            what: "schedule",
                            detail: format!("item at t={t} disagrees with pool entry {ro_index}"),
                        });
                    }
                }
                Slot::AdvStatic { .. } | Slot::AdvAdaptive => {
                    if !self.params.is_covered_time(t) {
                        return Err(CoreError::InvalidParameter {
                            what: "schedule",
                            detail: format!("adversarial label outside the cover at t={t}"),
                        });
                    }
                }
            }
        }
        if used.iter().any(|u| !u) {
            return Err(CoreError::InvalidParameter {
                what: "schedule",
                detail: "pool item never scheduled".into(),
            });
        }
        Ok(())
    }
}

/// Either a fixed list of emissions for the covered times (in time order)
/// or a marker that an [`AdaptiveRule`] will emit at run time.
#[derive(Clone, Debug)]
pub enum AdversaryStrategy {
    Static(Vec<Item>),
    Adaptive,
}

/// What an adaptive adversary is allowed to observe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObservationMode {
    /// The realized random-order assignment (including the future) plus the
    /// algorithm's history — the strongest allowed adversary.
    FullSchedule,
    /// Only the algorithm's history of arrivals and decisions.
    HistoryOnly,
}

/// What an adaptive rule sees when asked to emit at time `t`: the
/// algorithm's public per-step records so far, and (in full-schedule mode)
/// the realized random-order arrivals. LP internals are never exposed.
pub struct AdaptiveContext<'a> {
    pub t: usize,
    pub history: &'a [StepRecord],
    pub ro_arrivals: Option<&'a [(usize, Item)]>,
}

/// An adaptive adversarial emission rule. Must be deterministic for runs
/// to be reproducible.
pub trait AdaptiveRule {
    fn emit(&self, ctx: &AdaptiveContext<'_>) -> Item;
}

/// Place the random-order pool on the uncovered times in a seed-determined
/// uniform order (Fisher–Yates) and the strategy's emissions on the covered
/// times.
pub fn build_schedule(
    pool: &[Item],
    params: &ModelParams,
    strategy: &AdversaryStrategy,
    seed: u64,
) -> Result<Schedule, CoreError> {
    for (i, it) in pool.iter().enumerate() {
        it.validate().map_err(|e| CoreError::InvalidParameter {
            what: "pool",
            detail: format!("item {i}: {e}"),
        })?;
    }
    let n = params.n();
    let covered = params.covered_time_count();
    let free = n - covered;
    if pool.len() != free {
        return Err(CoreError::PoolSizeMismatch {
            expected: free,
            got: pool.len(),
        });
    }

    let (sorted_pool, sort_perm) = sort_pool(pool);
    let rank_table = weighted_ranks(&sorted_pool, params.k())?;

    let mut order: Vec<usize> = (0..free).collect();
    Rng::new(seed).shuffle(&mut order);

    let static_items = match strategy {
        AdversaryStrategy::Static(items) => {
            if items.len() != covered {
                return Err(CoreError::StrategyMismatch {
                    expected: covered,
                    got: items.len(),
                });
            }
            for (i, it) in items.iter().enumerate() {
                it.validate().map_err(|e| CoreError::InvalidParameter {
                    what: "adversary emission",
                    detail: format!("emission {i}: {e}"),
                })?;
            }
            Some(items)
        }
        AdversaryStrategy::Adaptive => None,
    };

    let mut slots = Vec::with_capacity(n);
    let mut next_ro = 0;
    let mut next_adv = 0;
    for t in 1..=n {
        if params.is_covered_time(t) {
            match static_items {
                Some(items) => {
                    slots.push(Slot::AdvStatic {
                        item: items[next_adv],
                    });
                    next_adv += 1;
                }
                None => slots.push(Slot::AdvAdaptive),
            }
        } else {
            let ro_index = order[next_ro];
            next_ro += 1;
            slots.push(Slot::Ro {
                item: sorted_pool[ro_index],
                ro_index,
            });
        }
    }

    let schedule = Schedule {
        params: params.clone(),
        seed,
        slots,
        sorted_pool,
        sort_perm,
        rank_table,
    };
    debug_assert!(schedule.validate().is_ok());
    Ok(schedule)
}

/// The first `count` windows.
pub fn cover_front(count: usize) -> BTreeSet<usize> {
    (0..count).collect()
}

/// `count` windows spread evenly over the partition.
pub fn cover_scattered(count: usize, window_count: usize) -> BTreeSet<usize> {
    assert!(count <= window_count);
    (0..count)
        .map(|i| i * window_count / count.max(1))
        .collect()
}

/// Values used by the "infinitesimal" adversarial constructions: small
/// enough to be dominated by any unit-density item, spaced enough to avoid
/// float ties.
pub const INFINITESIMAL: f64 = 1e-6;
pub const INFINITESIMAL_STEP: f64 = 1e-3;

fn require_front_cover_for_k(params: &ModelParams) -> Result<(), CoreError> {
    let k = params.k();
    let need = (k / params.ell() as f64).max(0.0);
    let need_windows = libm::ceil(need) as usize;
    let expected = cover_front(need_windows);
    if *params.adv_cover() != expected {
        return Err(CoreError::InvalidParameter {
            what: "adv_cover",
            detail: format!(
                "generator expects the first {need_windows} windows covered, got {:?}",
                params.adv_cover()
            ),
        });
    }
    if (params.covered_time_count() as f64) < k {
        return Err(CoreError::InvalidParameter {
            what: "adv_cover",
            detail: format!(
                "cover holds {} times, fewer than k = {k}",
                params.covered_time_count()
            ),
        });
    }
    Ok(())
}

/// A leading burst of unit-size items with increasing infinitesimal values;
/// the pool is all `(1, 1)`. An unwindowed budget-matching strategy fills
/// its knapsack with the burst and is left with nothing for the pool.
pub fn gen_too_many(params: &ModelParams) -> Result<(Vec<Item>, AdversaryStrategy), CoreError> {
    require_front_cover_for_k(params)?;
    let covered = params.covered_time_count();
    let emissions = (0..covered)
        .map(|j| Item {
            value: INFINITESIMAL * (1.0 + j as f64 * INFINITESIMAL_STEP),
            weight: 1.0,
        })
        .collect();
    let pool = alloc::vec![Item { value: 1.0, weight: 1.0 }; params.n() - covered];
    Ok((pool, AdversaryStrategy::Static(emissions)))
}

/// Same burst geometry, but every adversarial item is worth `1 + eps` —
/// slightly better than the pool — so an LP without window caps spends its
/// whole budget on the burst and never touches the pool.
pub fn gen_too_few(
    params: &ModelParams,
    eps: f64,
) -> Result<(Vec<Item>, AdversaryStrategy), CoreError> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(CoreError::InvalidParameter {
            what: "eps",
            detail: format!("must be > 0, got {eps}"),
        });
    }
    require_front_cover_for_k(params)?;
    let covered = params.covered_time_count();
    let emissions = alloc::vec![Item { value: 1.0 + eps, weight: 1.0 }; covered];
    let pool = alloc::vec![Item { value: 1.0, weight: 1.0 }; params.n() - covered];
    Ok((pool, AdversaryStrategy::Static(emissions)))
}

/// A leading burst of `ceil(k)` very-high-value unit items followed by a
/// random-order pool of small values (uniform in `(0, lo_max]`, unit
/// weight). Sample-then-threshold rules that only ever take top-k items
/// reject the whole pool on this sequence.
pub fn gen_kleinberg_killer(
    params: &ModelParams,
    hi: f64,
    lo_max: f64,
    pool_seed: u64,
) -> Result<(Vec<Item>, AdversaryStrategy), CoreError> {
    if !(hi.is_finite() && lo_max.is_finite() && hi > lo_max && lo_max > 0.0) {
        return Err(CoreError::InvalidParameter {
            what: "kleinberg killer",
            detail: format!("need hi > lo_max > 0, got hi={hi}, lo_max={lo_max}"),
        });
    }
    require_front_cover_for_k(params)?;
    let covered = params.covered_time_count();
    let burst = libm::ceil(params.k()) as usize;
    let emissions = (0..covered)
        .map(|j| Item {
            value: if j < burst { hi } else { 0.5 * lo_max },
            weight: 1.0,
        })
        .collect();
    let mut rng = Rng::new(pool_seed);
    let pool = (0..params.n() - covered)
        .map(|_| Item {
            value: rng.open_closed(lo_max),
            weight: 1.0,
        })
        .collect();
    Ok((pool, AdversaryStrategy::Static(emissions)))
}

/// Adaptive rule: at each adversarial time emit a unit-weight item whose
/// density tops the best random-order density realized so far by a factor
/// `1 + eta` (value `eta` before anything arrived).
#[derive(Clone, Copy, Debug)]
pub struct DensityTopper {
    pub eta: f64,
}

impl Default for DensityTopper {
    fn default() -> Self {
        DensityTopper { eta: 0.05 }
    }
}

/// The default adaptive strategy, topping by 5%.
pub fn gen_density_topper() -> (DensityTopper, AdversaryStrategy) {
    (DensityTopper::default(), AdversaryStrategy::Adaptive)
}

impl AdaptiveRule for DensityTopper {
    fn emit(&self, ctx: &AdaptiveContext<'_>) -> Item {
        let mut best: Option<f64> = None;
        for rec in ctx.history {
            if rec.is_ro {
                let d = rec.item.density();
                if best.is_none_or(|b| d > b) {
                    best = Some(d);
                }
            }
        }
        match best {
            Some(d) => Item {
                value: (1.0 + self.eta) * d,
                weight: 1.0,
            },
            None => Item {
                value: self.eta,
                weight: 1.0,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn params(n: usize, k: f64, gamma: usize, cover: &[usize], ell: usize) -> ModelParams {
        ModelParams::new(n, k, gamma, cover.iter().copied().collect(), Some(ell)).unwrap()
    }

    fn unit_pool(len: usize) -> Vec<Item> {
        vec![
            Item {
                value: 1.0,
                weight: 1.0
            };
            len
        ]
    }

    #[test]
    fn pure_random_order_schedule() {
        let p = params(20, 4.0, 0, &[], 5);
        let pool: Vec<Item> = (0..20)
            .map(|i| Item::new(1.0 + i as f64, 0.5).unwrap())
            .collect();
        let s = build_schedule(&pool, &p, &AdversaryStrategy::Static(vec![]), 9).unwrap();
        s.validate().unwrap();
        assert!(s.slots.iter().all(|x| x.is_ro()));

        // Multiset conservation.
        let mut values: Vec<f64> = s
            .slots
            .iter()
            .map(|x| match x {
                Slot::Ro { item, .. } => item.value,
                _ => unreachable!(),
            })
            .collect();
        values.sort_by(f64::total_cmp);
        let mut want: Vec<f64> = pool.iter().map(|i| i.value).collect();
        want.sort_by(f64::total_cmp);
        assert_eq!(values, want);
    }

    #[test]
    fn static_cover_placement() {
        let p = params(20, 4.0, 1, &[0], 5);
        let emissions: Vec<Item> = (0..5)
            .map(|i| Item::new(10.0 + i as f64, 1.0).unwrap())
            .collect();
        let s = build_schedule(
            &unit_pool(15),
            &p,
            &AdversaryStrategy::Static(emissions.clone()),
            3,
        )
        .unwrap();
        for t in 1..=5 {
            assert_eq!(
                s.slots[t - 1],
                Slot::AdvStatic {
                    item: emissions[t - 1]
                },
                "t={t}"
            );
        }
        assert!(s.slots[5..].iter().all(|x| x.is_ro()));
    }

    #[test]
    fn determinism_and_seed_sensitivity() {
        let p = params(30, 4.0, 0, &[], 5);
        let pool: Vec<Item> = (0..30)
            .map(|i| Item::new(1.0 + i as f64, 1.0).unwrap())
            .collect();
        let a = build_schedule(&pool, &p, &AdversaryStrategy::Static(vec![]), 7).unwrap();
        let b = build_schedule(&pool, &p, &AdversaryStrategy::Static(vec![]), 7).unwrap();
        assert_eq!(a.slots, b.slots);
        let c = build_schedule(&pool, &p, &AdversaryStrategy::Static(vec![]), 8).unwrap();
        assert_ne!(a.slots, c.slots);
    }

    #[test]
    fn size_mismatches_rejected() {
        let p = params(20, 4.0, 1, &[0], 5);
        assert!(matches!(
            build_schedule(
                &unit_pool(20),
                &p,
                &AdversaryStrategy::Static(unit_pool(5)),
                1
            ),
            Err(CoreError::PoolSizeMismatch { .. })
        ));
        assert!(matches!(
            build_schedule(
                &unit_pool(15),
                &p,
                &AdversaryStrategy::Static(unit_pool(4)),
                1
            ),
            Err(CoreError::StrategyMismatch { .. })
        ));
    }

    #[test]
    fn too_many_construction() {
        // k=10, ell=5, gamma=2, n=100: 10 burst items, 90 unit pool items.
        let p = params(100, 10.0, 2, &[0, 1], 5);
        let (pool, strat) = gen_too_many(&p).unwrap();
        assert_eq!(pool.len(), 90);
        assert!(pool.iter().all(|i| i.value == 1.0 && i.weight == 1.0));
        let AdversaryStrategy::Static(items) = strat else {
            panic!("expected static")
        };
        assert_eq!(items.len(), 10);
        for (j, it) in items.iter().enumerate() {
            let want = 1e-6 * (1.0 + j as f64 * 1e-3);
            assert!((it.value - want).abs() < 1e-18);
            assert_eq!(it.weight, 1.0);
        }
        // Values strictly increasing.
        assert!(items.windows(2).all(|w| w[0].value < w[1].value));

        let opt = crate::offline::opt_ro(&pool, 10.0).unwrap();
        assert_eq!(opt.total_value, 10.0);
    }

    #[test]
    fn too_few_construction() {
        let p = params(100, 10.0, 2, &[0, 1], 5);
        let (pool, strat) = gen_too_few(&p, 0.01).unwrap();
        let AdversaryStrategy::Static(items) = strat else {
            panic!()
        };
        assert!(items.iter().all(|i| i.value == 1.01 && i.weight == 1.0));
        assert_eq!(
            crate::offline::opt_ro(&pool, 10.0).unwrap().total_value,
            10.0
        );
        assert!(gen_too_few(&p, 0.0).is_err());
        assert!(gen_too_few(&p, -0.5).is_err());
    }

    #[test]
    fn killer_construction() {
        let p = params(1000, 10.0, 1, &[0], 10);
        let (pool, strat) = gen_kleinberg_killer(&p, 100.0, 1.0, 5).unwrap();
        let AdversaryStrategy::Static(items) = strat else {
            panic!()
        };
        assert_eq!(items.len(), 10);
        assert!(items.iter().all(|i| i.value == 100.0));
        assert_eq!(pool.len(), 990);
        assert!(pool
            .iter()
            .all(|i| i.value > 0.0 && i.value <= 1.0 && i.weight == 1.0));
        assert!(gen_kleinberg_killer(&p, 1.0, 1.0, 5).is_err());
    }

    #[test]
    fn cover_must_match_generator_shape() {
        // Cover not at the front: rejected.
        let p = params(100, 10.0, 2, &[1, 2], 5);
        assert!(gen_too_many(&p).is_err());
        // Cover too small for k.
        let p = params(100, 10.0, 1, &[0], 5);
        assert!(gen_too_many(&p).is_err());
    }

    #[test]
    fn density_topper_rule() {
        let rule = DensityTopper::default();
        let ctx = AdaptiveContext {
            t: 1,
            history: &[],
            ro_arrivals: None,
        };
        let first = rule.emit(&ctx);
        assert_eq!(
            first,
            Item {
                value: 0.05,
                weight: 1.0
            }
        );
        // After a (v=2, w=0.5) random-order arrival: density 4 -> 1.05 * 4.
        let rec = crate::algo::StepRecord {
            time: 1,
            is_ro: true,
            item: Item {
                value: 2.0,
                weight: 0.5,
            },
            rank: Some(0.0),
            tie: 0,
            tentative: true,
            full_pick: true,
            blocked_main: false,
            blocked_outer: false,
            picked: true,
            occupation: 0.5,
            tentative_occupation: 0.5,
        };
        let ctx = AdaptiveContext {
            t: 2,
            history: core::slice::from_ref(&rec),
            ro_arrivals: None,
        };
        let next = rule.emit(&ctx);
        assert!((next.value - 4.2).abs() < 1e-12);
        assert_eq!(next.weight, 1.0);
    }

    // Permutation uniformity through the schedule builder: 20,000 seeds,
    // 4 pool items, each of the 24 arrival orders within 4 sigma of 1/24.
    #[test]
    fn schedule_permutation_uniformity() {
        const TRIALS: usize = 20_000;
        let p = params(4, 4.0, 0, &[], 2);
        // Distinct densities so ro_index identifies the item.
        let pool: Vec<Item> = (0..4)
            .map(|i| Item::new(4.0 - i as f64, 1.0).unwrap())
            .collect();
        let mut counts = [0usize; 24];
        for seed in 0..TRIALS as u64 {
            let s = build_schedule(&pool, &p, &AdversaryStrategy::Static(vec![]), seed).unwrap();
            let order: Vec<usize> = s
                .slots
                .iter()
                .map(|slot| match slot {
                    Slot::Ro { ro_index, .. } => *ro_index,
                    _ => unreachable!(),
                })
                .collect();
            let mut code = 0usize;
            let mut pool_left: Vec<usize> = (0..4).collect();
            for (pos, &x) in order.iter().enumerate() {
                let idx = pool_left.iter().position(|&q| q == x).unwrap();
                code += idx * [6, 2, 1, 1][pos];
                pool_left.remove(idx);
            }
            counts[code] += 1;
        }
        let prob = 1.0 / 24.0;
        let sigma = libm::sqrt(prob * (1.0 - prob) / TRIALS as f64);
        for (i, &c) in counts.iter().enumerate() {
            let freq = c as f64 / TRIALS as f64;
            assert!(
                libm::fabs(freq - prob) <= 4.0 * sigma,
                "order {i}: frequency {freq} outside 4 sigma of {prob}"
            );
        }
    }

    #[test]
    fn scattered_cover_shape() {
        let c = cover_scattered(3, 12);
        assert_eq!(c, [0usize, 4, 8].into_iter().collect());
        assert_eq!(cover_front(2), [0usize, 1].into_iter().collect());
    }
}

//! The per-step linear program: one global budget plus disjoint per-window
//! caps and box bounds — a laminar family, so a density greedy solves it
//! exactly. An independent simplex ([`LpInstance::solve_reference`]) guards
//! that claim at desk scale.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::CoreError;
use crate::item::{AlgoConstants, Item};
use crate::math;
use crate::offline::FractionalSolution;
use crate::params::ModelParams;
use crate::simplex;

/// "Strictly positive" threshold for LP fractions. The greedy produces
/// exact rationals of the inputs, so genuine mass is far above this.
pub const POSITIVE_TOL: f64 = 1e-12;

/// One LP column: the item that arrived at `time`, its window, and the
/// stable tie token that makes the density order strict.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LpEntry {
    pub time: usize,
    pub value: f64,
    pub weight: f64,
    /// Tie token: density-sorted pool index for random-order items,
    /// `pool_len + emission index` for adversarial ones. Lower wins ties.
    pub tie: usize,
    pub window: usize,
    pub density: f64,
}

impl LpEntry {
    pub fn new(time: usize, item: Item, tie: usize, window: usize) -> Self {
        LpEntry {
            time,
            value: item.value,
            weight: item.weight,
            tie,
            window,
            density: item.value / item.weight,
        }
    }
}

/// The canonical strict order: higher density first, then lower tie token
/// (the deterministic stand-in for infinitesimal perturbations), then time.
pub fn better_order(a: &LpEntry, b: &LpEntry) -> Ordering {
    b.density
        .total_cmp(&a.density)
        .then(a.tie.cmp(&b.tie))
        .then(a.time.cmp(&b.time))
}

/// `a` strictly better than `b` under the canonical order.
pub fn strictly_better(a: &LpEntry, b: &LpEntry) -> bool {
    better_order(a, b) == Ordering::Less
}

/// Largest fraction of an entry of weight `w` that fits both its window's
/// remaining cap and the remaining budget.
#[inline]
pub(crate) fn greedy_take(w: f64, cap_rem: f64, budget_rem: f64) -> f64 {
    let mut x = 1.0;
    let by_cap = cap_rem / w;
    if by_cap < x {
        x = by_cap;
    }
    let by_budget = budget_rem / w;
    if by_budget < x {
        x = by_budget;
    }
    if x > 0.0 {
        x
    } else {
        0.0
    }
}

/// A fractional-knapsack LP with box bounds, disjoint window caps, and one
/// global budget. Caps may be `f64::INFINITY` (no cap on that window).
#[derive(Clone, Debug)]
pub struct LpInstance {
    entries: Vec<LpEntry>,
    budget: f64,
    window_caps: BTreeMap<usize, f64>,
}

impl LpInstance {
    pub fn new(
        entries: Vec<LpEntry>,
        budget: f64,
        window_caps: BTreeMap<usize, f64>,
    ) -> Result<Self, CoreError> {
        if !(budget.is_finite() && budget >= 0.0) {
            return Err(CoreError::InvalidParameter {
                what: "budget",
                detail: format!("must be finite and >= 0, got {budget}"),
            });
        }
        for (&w, &cap) in &window_caps {
            if cap.is_nan() || cap < 0.0 {
                return Err(CoreError::InvalidParameter {
                    what: "window cap",
                    detail: format!("cap for window {w} must be >= 0, got {cap}"),
                });
            }
        }
        for e in &entries {
            Item::new(e.value, e.weight)?;
            if !window_caps.contains_key(&e.window) {
                return Err(CoreError::InvalidParameter {
                    what: "entries",
                    detail: format!(
                        "entry at time {} references uncapped window {}",
                        e.time, e.window
                    ),
                });
            }
        }
        Ok(LpInstance {
            entries,
            budget,
            window_caps,
        })
    }

    pub fn entries(&self) -> &[LpEntry] {
        &self.entries
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn window_caps(&self) -> &BTreeMap<usize, f64> {
        &self.window_caps
    }

    /// Density-greedy solve: entries in the canonical strict order, each
    /// taking the largest fraction that fits its window cap and the budget.
    /// Exact for this laminar constraint family. Fractions align with
    /// `entries()` order.
    pub fn solve_greedy(&self) -> FractionalSolution {
        let mut order: Vec<usize> = (0..self.entries.len()).collect();
        order.sort_unstable_by(|&i, &j| better_order(&self.entries[i], &self.entries[j]));
        let mut caps = self.window_caps.clone();
        let mut budget_rem = self.budget;
        let mut fractions = vec![0.0; self.entries.len()];
        let mut total_value = 0.0;
        let mut total_weight = 0.0;
        for &i in &order {
            if budget_rem <= 0.0 {
                break;
            }
            let e = &self.entries[i];
            let cap = caps.get_mut(&e.window).expect("validated window");
            let take = greedy_take(e.weight, *cap, budget_rem);
            if take > 0.0 {
                fractions[i] = take;
                let mass = e.weight * take;
                *cap -= mass;
                budget_rem -= mass;
                total_value += e.value * take;
                total_weight += mass;
            }
        }
        FractionalSolution {
            fractions,
            total_value,
            total_weight,
        }
    }

    /// Exact reference optimum via primal simplex over the explicit row
    /// system; guarded to at most 20 entries. The value matches the true LP
    /// optimum to 1e-9 at desk scale.
    pub fn solve_reference(&self) -> Result<FractionalSolution, CoreError> {
        const LIMIT: usize = 20;
        if self.entries.len() > LIMIT {
            return Err(CoreError::SizeLimit {
                what: "solve_reference",
                limit: LIMIT,
                got: self.entries.len(),
            });
        }
        simplex::solve(self)
    }

    /// Box, cap, and budget feasibility within `tol`.
    pub fn is_feasible(&self, sol: &FractionalSolution, tol: f64) -> bool {
        if sol.fractions.len() != self.entries.len() {
            return false;
        }
        let mut loads: BTreeMap<usize, f64> = BTreeMap::new();
        let mut total = 0.0;
        for (e, &x) in self.entries.iter().zip(&sol.fractions) {
            if !(-tol..=1.0 + tol).contains(&x) {
                return false;
            }
            *loads.entry(e.window).or_insert(0.0) += e.weight * x;
            total += e.weight * x;
        }
        if total > self.budget + tol {
            return false;
        }
        loads.iter().all(|(w, &m)| m <= self.window_caps[w] + tol)
    }

    pub fn fraction_at_time(&self, sol: &FractionalSolution, t: usize) -> Option<f64> {
        self.entries
            .iter()
            .position(|e| e.time == t)
            .map(|i| sol.fractions[i])
    }
}

/// Tentative and full-pick indicators for the entry at time `t`:
/// `X_t > 0` (within [`POSITIVE_TOL`]) and `X_t >= 1` (same tolerance).
pub fn tentative_indicators(inst: &LpInstance, sol: &FractionalSolution, t: usize) -> (bool, bool) {
    let x = inst
        .fraction_at_time(sol, t)
        .expect("no entry at the queried time");
    (x > POSITIVE_TOL, x >= 1.0 - POSITIVE_TOL)
}

/// Budget of the step-`t` LP: `c_t * (t/n) * k` (with `c_t = 1` when
/// scaling is off).
pub fn inner_budget(params: &ModelParams, constants: &AlgoConstants, t: usize) -> f64 {
    let base = params.k() * t as f64 / params.n() as f64;
    let c = if constants.scale_budget {
        params.budget_scale_c(t)
    } else {
        1.0
    };
    c * base
}

/// Per-window cap of the step LP: `a1 * (ell/n) * k`.
pub fn inner_window_cap(params: &ModelParams, constants: &AlgoConstants) -> f64 {
    constants.a1 * params.window_cap_unit()
}

/// Outer (blocking) window cap: `a4 * (ell/n) * k`.
pub fn outer_window_cap(params: &ModelParams, constants: &AlgoConstants) -> f64 {
    constants.a4 * params.window_cap_unit()
}

/// Budget of the unwindowed primal baseline: `ceil((t/n) * k)`.
pub fn primal_budget(params: &ModelParams, t: usize) -> f64 {
    math::ceil(params.k() * t as f64 / params.n() as f64)
}

/// Random laminar instance for the greedy/reference equivalence suites:
/// up to `max_entries` consecutive-time entries, windows of random width,
/// random caps in `[0, 3)` and budget in `[0, 4)`.
pub fn random_instance(rng: &mut crate::rng::Rng, max_entries: usize) -> LpInstance {
    assert!(max_entries >= 1);
    let n_e = 1 + rng.below(max_entries as u64) as usize;
    let ell = 1 + rng.below(4) as usize;
    let mut entries = Vec::with_capacity(n_e);
    let mut windows = alloc::collections::BTreeSet::new();
    for t in 1..=n_e {
        let w = (t - 1) / ell;
        windows.insert(w);
        entries.push(LpEntry::new(
            t,
            Item {
                value: rng.open_closed(10.0),
                weight: rng.open_closed(1.0),
            },
            rng.below(1000) as usize,
            w,
        ));
    }
    let caps: BTreeMap<usize, f64> = windows.into_iter().map(|w| (w, rng.f64() * 3.0)).collect();
    LpInstance::new(entries, rng.f64() * 4.0, caps).expect("generated instance is valid")
}

/// Build the step-`t` LP over the given prefix entries (times `<= t`),
/// with the scaled budget and one cap per truncated window.
pub fn lp_for_prefix(
    params: &ModelParams,
    constants: &AlgoConstants,
    seen: &[LpEntry],
    t: usize,
) -> LpInstance {
    debug_assert!(seen.iter().all(|e| e.time <= t));
    let cap = inner_window_cap(params, constants);
    let caps: BTreeMap<usize, f64> = params
        .truncated_windows(t)
        .iter()
        .enumerate()
        .map(|(w, _)| (w, cap))
        .collect();
    LpInstance::new(seen.to_vec(), inner_budget(params, constants, t), caps)
        .expect("prefix instance is valid by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;
    use proptest::prelude::*;

    fn entry(time: usize, v: f64, w: f64, tie: usize, window: usize) -> LpEntry {
        LpEntry::new(time, Item::new(v, w).unwrap(), tie, window)
    }

    fn caps(pairs: &[(usize, f64)]) -> BTreeMap<usize, f64> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn two_entry_example() {
        // Budget 1, per-window cap 0.3, windows {1}, {2}: both capped at 0.3.
        let inst = LpInstance::new(
            vec![entry(1, 10.0, 1.0, 0, 0), entry(2, 1.0, 1.0, 1, 1)],
            1.0,
            caps(&[(0, 0.3), (1, 0.3)]),
        )
        .unwrap();
        let g = inst.solve_greedy();
        assert_eq!(g.fractions, vec![0.3, 0.3]);
        assert!((g.total_value - 3.3).abs() < 1e-12);

        let r = inst.solve_reference().unwrap();
        assert!((r.total_value - 3.3).abs() < 1e-9);
    }

    #[test]
    fn zero_budget_and_slack_cases() {
        let inst =
            LpInstance::new(vec![entry(1, 5.0, 0.5, 0, 0)], 0.0, caps(&[(0, 10.0)])).unwrap();
        assert_eq!(inst.solve_greedy().total_value, 0.0);

        let inst =
            LpInstance::new(vec![entry(1, 5.0, 0.5, 0, 0)], 10.0, caps(&[(0, 10.0)])).unwrap();
        let g = inst.solve_greedy();
        assert_eq!(g.fractions, vec![1.0]);
        assert_eq!(g.total_value, 5.0);

        // All constraints slack in the reference solver: everything at 1.
        let inst = LpInstance::new(
            vec![entry(1, 2.0, 0.4, 0, 0), entry(2, 1.0, 0.6, 1, 0)],
            5.0,
            caps(&[(0, 5.0)]),
        )
        .unwrap();
        let r = inst.solve_reference().unwrap();
        assert!((r.total_value - 3.0).abs() < 1e-9);
        assert!(r.fractions.iter().all(|&x| (x - 1.0).abs() < 1e-9));
    }

    #[test]
    fn reference_size_guard() {
        let entries: Vec<LpEntry> = (0..21).map(|i| entry(i + 1, 1.0, 0.5, i, 0)).collect();
        let inst = LpInstance::new(entries, 3.0, caps(&[(0, 5.0)])).unwrap();
        assert!(matches!(
            inst.solve_reference(),
            Err(CoreError::SizeLimit { .. })
        ));
    }

    #[test]
    fn indicator_thresholds() {
        let inst =
            LpInstance::new(vec![entry(1, 1.0, 1.0, 0, 0)], 0.3, caps(&[(0, 10.0)])).unwrap();
        let sol = inst.solve_greedy();
        assert_eq!(tentative_indicators(&inst, &sol, 1), (true, false));

        let full = FractionalSolution {
            fractions: vec![1.0],
            total_value: 1.0,
            total_weight: 1.0,
        };
        assert_eq!(tentative_indicators(&inst, &full, 1), (true, true));
        let none = FractionalSolution {
            fractions: vec![0.0],
            total_value: 0.0,
            total_weight: 0.0,
        };
        assert_eq!(tentative_indicators(&inst, &none, 1), (false, false));
    }

    // Greedy equals the simplex reference on random laminar instances.
    #[test]
    fn greedy_matches_reference_randomized() {
        let mut rng = Rng::new(0xBA20_57E9);
        for case in 0..500 {
            let inst = random_instance(&mut rng, 12);
            let g = inst.solve_greedy();
            let r = inst.solve_reference().unwrap();
            assert!(
                (g.total_value - r.total_value).abs() <= 1e-9,
                "case {case}: greedy {} vs reference {}",
                g.total_value,
                r.total_value
            );
            assert!(inst.is_feasible(&g, 1e-9), "case {case}: greedy infeasible");
            assert!(
                inst.is_feasible(&r, 1e-9),
                "case {case}: reference infeasible"
            );
        }
    }

    // Saturation: greedy fills min(budget, sum_B min(cap_B, mass_B)) exactly.
    #[test]
    fn greedy_saturates_attainable_mass() {
        let mut rng = Rng::new(77);
        for _ in 0..300 {
            let inst = random_instance(&mut rng, 10);
            let g = inst.solve_greedy();
            let mut attainable = 0.0;
            for (&w, &cap) in inst.window_caps() {
                let mass: f64 = inst
                    .entries()
                    .iter()
                    .filter(|e| e.window == w)
                    .map(|e| e.weight)
                    .sum();
                attainable += mass.min(cap);
            }
            let attainable = attainable.min(inst.budget());
            assert!(
                (g.total_weight - attainable).abs() <= 1e-9,
                "greedy mass {} vs attainable {}",
                g.total_weight,
                attainable
            );
        }
    }

    proptest! {
        // Monotone exchange: raising an entry's density never lowers its
        // greedy fraction.
        #[test]
        fn monotone_exchange(
            seed in 0u64..5_000,
            bump in 1.01f64..4.0,
        ) {
            let mut rng = Rng::new(seed);
            let inst = random_instance(&mut rng, 10);
            let pick = rng.below(inst.entries().len() as u64) as usize;
            let before = inst.solve_greedy().fractions[pick];

            let mut entries = inst.entries().to_vec();
            entries[pick].value *= bump;
            entries[pick].density = entries[pick].value / entries[pick].weight;
            let bumped = LpInstance::new(entries, inst.budget(), inst.window_caps().clone()).unwrap();
            let after = bumped.solve_greedy().fractions[pick];
            prop_assert!(after >= before - 1e-12, "fraction dropped {before} -> {after}");
        }
    }
}

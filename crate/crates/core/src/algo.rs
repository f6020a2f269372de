//! The online algorithm and its fragile baselines.
//!
//! Per step `t` the algorithm solves the prefix LP (scaled budget
//! `c_t * (t/n) * k`, per-window caps `a1 * (ell/n) * k`), *tentatively*
//! picks when the LP puts positive mass on the current item, and makes the
//! pick permanent only if two blocking checks pass: total occupation at
//! most `k - 1`, and occupation of the last window of the previous prefix
//! at most `a4 * (ell/n) * k - 1`. Picks are always integral.
//!
//! [`run`] is an optimized engine: all scheduled entries are pre-sorted
//! once in the canonical strict order and each step greedily scans the
//! arrived prefix of that order, stopping at the current entry or at budget
//! exhaustion. This is operation-for-operation the same arithmetic
//! [`crate::lp::LpInstance::solve_greedy`] performs on the prefix instance,
//! so recorded flags match offline re-solves bit for bit ([`step`] is that
//! reference fold; the consistency tests assert equality).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::adversary::{AdaptiveContext, AdaptiveRule, ObservationMode, Schedule, Slot};
use crate::error::CoreError;
use crate::item::{AlgoConstants, Item};
use crate::lp::{
    self, better_order, greedy_take, inner_budget, outer_window_cap, primal_budget, LpEntry,
    POSITIVE_TOL,
};
use crate::math;
use crate::params::ModelParams;

/// Which selection rule produced a trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum AlgorithmKind {
    /// Windowed LP with budget scaling and both blocking checks.
    Baro,
    /// Unwindowed primal baseline: budget `ceil(t k / n)`, main check only.
    Primal,
    /// Sample-then-threshold rule that only takes top-k items.
    TopkFilter,
}

/// Everything recorded about one time step.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct StepRecord {
    pub time: usize,
    pub is_ro: bool,
    pub item: Item,
    /// Weighted rank of the arriving pool item; absent on adversarial steps.
    pub rank: Option<f64>,
    /// Canonical tie token (pool index, or pool size + emission index).
    pub tie: usize,
    pub tentative: bool,
    pub full_pick: bool,
    pub blocked_main: bool,
    pub blocked_outer: bool,
    pub picked: bool,
    /// `weight * picked`.
    pub occupation: f64,
    /// `weight * tentative`.
    pub tentative_occupation: f64,
}

/// A full run: one record per time step plus the configuration that
/// produced it. Immutable once built; cheap to ship across threads.
#[derive(Clone, Debug)]
pub struct Trace {
    pub algorithm: AlgorithmKind,
    pub params: ModelParams,
    pub constants: AlgoConstants,
    pub seed: u64,
    pub records: Vec<StepRecord>,
}

impl Trace {
    /// Value collected on random-order steps (the quantity the benchmark
    /// ratio is built from).
    pub fn ro_value(&self) -> f64 {
        self.records
            .iter()
            .filter(|r| r.is_ro && r.picked)
            .fold(0.0, |acc, r| acc + r.item.value)
    }

    pub fn total_occupation(&self) -> f64 {
        let mut acc = 0.0;
        for r in &self.records {
            acc += r.occupation;
        }
        acc
    }

    /// Hard invariants: record count, per-record consistency, knapsack
    /// feasibility, and (when the outer check is active) window safety.
    pub fn validate(&self) -> Result<(), String> {
        let p = &self.params;
        if self.records.len() != p.n() {
            return Err(format!(
                "trace has {} records, expected {}",
                self.records.len(),
                p.n()
            ));
        }
        let mut total = 0.0;
        let mut window: BTreeMap<usize, f64> = BTreeMap::new();
        for (i, r) in self.records.iter().enumerate() {
            if r.time != i + 1 {
                return Err(format!("record {i} has time {}", r.time));
            }
            if r.is_ro != p.is_free_time(r.time) {
                return Err(format!("label mismatch at t={}", r.time));
            }
            if r.picked && !(r.tentative && !r.blocked_main && !r.blocked_outer) {
                return Err(format!("pick implication violated at t={}", r.time));
            }
            let want_occ = if r.picked { r.item.weight } else { 0.0 };
            if r.occupation != want_occ {
                return Err(format!("occupation mismatch at t={}", r.time));
            }
            let want_tocc = if r.tentative { r.item.weight } else { 0.0 };
            if r.tentative_occupation != want_tocc {
                return Err(format!("tentative occupation mismatch at t={}", r.time));
            }
            total += r.occupation;
            *window.entry(p.window_of(r.time)).or_insert(0.0) += r.occupation;
        }
        if total > p.k() {
            return Err(format!("total occupation {total} exceeds k = {}", p.k()));
        }
        if self.algorithm == AlgorithmKind::Baro {
            let cap = outer_window_cap(p, &self.constants);
            // A single first-of-window pick is only bounded by the item
            // size, so the guarantee is max(cap, 1).
            let bound = if cap.is_finite() {
                cap.max(1.0)
            } else {
                f64::INFINITY
            };
            for (w, occ) in window {
                if occ > bound {
                    return Err(format!("window {w} occupation {occ} exceeds {bound}"));
                }
            }
        }
        Ok(())
    }
}

/// One arrival as fed to the reference [`step`] fold.
#[derive(Clone, Copy, Debug)]
pub struct Arrival {
    pub item: Item,
    pub is_ro: bool,
    pub rank: Option<f64>,
    pub tie: usize,
}

/// Mutable state of the reference fold: everything seen, occupation
/// tallies, and the records so far.
#[derive(Clone, Debug, Default)]
pub struct AlgoState {
    pub t_done: usize,
    pub total_occupation: f64,
    pub window_occupation: BTreeMap<usize, f64>,
    pub seen: Vec<LpEntry>,
    pub records: Vec<StepRecord>,
}

impl AlgoState {
    pub fn new() -> Self {
        Self::default()
    }
}

/// Reference implementation of one step: rebuild the prefix LP from state,
/// solve it with the greedy, apply the blocking checks, and pick
/// integrally. O(t log t) per call; [`run`] is the fast equivalent.
pub fn step(
    state: &mut AlgoState,
    arrival: Arrival,
    params: &ModelParams,
    constants: &AlgoConstants,
) -> StepRecord {
    let t = state.t_done + 1;
    debug_assert!(t <= params.n());
    let entry = LpEntry::new(t, arrival.item, arrival.tie, params.window_of(t));
    state.seen.push(entry);

    let inst = lp::lp_for_prefix(params, constants, &state.seen, t);
    let sol = inst.solve_greedy();
    let (tentative, full_pick) = lp::tentative_indicators(&inst, &sol, t);

    let blocked_main = state.total_occupation > params.k() - 1.0;
    let blocked_outer = if t >= 2 {
        let b_last = params.window_of(t - 1);
        let occ = state.window_occupation.get(&b_last).copied().unwrap_or(0.0);
        occ > outer_window_cap(params, constants) - 1.0
    } else {
        false
    };
    let picked = tentative && !blocked_main && !blocked_outer;
    let occupation = if picked { arrival.item.weight } else { 0.0 };

    let record = StepRecord {
        time: t,
        is_ro: arrival.is_ro,
        item: arrival.item,
        rank: arrival.rank,
        tie: arrival.tie,
        tentative,
        full_pick,
        blocked_main,
        blocked_outer,
        picked,
        occupation,
        tentative_occupation: if tentative { arrival.item.weight } else { 0.0 },
    };
    state.t_done = t;
    state.total_occupation += occupation;
    *state
        .window_occupation
        .entry(params.window_of(t))
        .or_insert(0.0) += occupation;
    state.records.push(record);
    record
}

enum EngineMode {
    Baro,
    Primal,
}

/// Arrived-entry iteration order. Static schedules pre-sort every entry
/// once; adaptive ones insert as items materialize.
enum ArrivalOrder {
    Pre {
        order: Vec<u32>,
        pos_of: Vec<u32>,
        arrived: Vec<bool>,
    },
    Dyn {
        order: Vec<u32>,
    },
}

impl ArrivalOrder {
    fn mark(&mut self, id: u32, entries: &[LpEntry]) {
        match self {
            ArrivalOrder::Pre {
                pos_of, arrived, ..
            } => arrived[pos_of[id as usize] as usize] = true,
            ArrivalOrder::Dyn { order } => {
                let e = &entries[id as usize];
                let at = order.partition_point(|&other| {
                    better_order(&entries[other as usize], e) == core::cmp::Ordering::Less
                });
                order.insert(at, id);
            }
        }
    }
}

/// The greedy prefix scan: identical arithmetic to `solve_greedy` on the
/// arrived entries, stopping at the current entry (whose fraction is the
/// only one the step needs) or at budget exhaustion.
#[allow(clippy::too_many_arguments)]
fn scan_current_fraction(
    arrival_order: &ArrivalOrder,
    entries: &[LpEntry],
    caps_rem: &mut [f64],
    caps_stamp: &mut [u32],
    stamp: u32,
    cap_value: f64,
    mut budget_rem: f64,
    current: u32,
) -> f64 {
    let (order, arrived): (&[u32], Option<&[bool]>) = match arrival_order {
        ArrivalOrder::Pre { order, arrived, .. } => (order, Some(arrived)),
        ArrivalOrder::Dyn { order } => (order, None),
    };
    for (pos, &id) in order.iter().enumerate() {
        if let Some(a) = arrived {
            if !a[pos] {
                continue;
            }
        }
        if budget_rem <= 0.0 {
            return 0.0;
        }
        let e = &entries[id as usize];
        let w = e.window;
        if caps_stamp[w] != stamp {
            caps_stamp[w] = stamp;
            caps_rem[w] = cap_value;
        }
        let take = greedy_take(e.weight, caps_rem[w], budget_rem);
        if id == current {
            return take;
        }
        if take > 0.0 {
            let mass = e.weight * take;
            caps_rem[w] -= mass;
            budget_rem -= mass;
        }
    }
    debug_assert!(false, "current entry not reached in scan");
    0.0
}

fn run_engine(
    schedule: &Schedule,
    constants: &AlgoConstants,
    mode: EngineMode,
    kind: AlgorithmKind,
    adaptive: Option<(&dyn AdaptiveRule, ObservationMode)>,
) -> Result<Trace, CoreError> {
    let params = &schedule.params;
    let n = params.n();
    let k = params.k();
    let pool_len = schedule.sorted_pool.len();
    let wcount = params.window_count();

    let cap_value = match mode {
        EngineMode::Baro => lp::inner_window_cap(params, constants),
        EngineMode::Primal => f64::INFINITY,
    };
    let outer_cap = outer_window_cap(params, constants);

    // Materialize entries up front where possible.
    let mut entries: Vec<LpEntry> = Vec::with_capacity(n);
    let mut metas: Vec<(bool, Option<f64>)> = Vec::with_capacity(n);
    let static_schedule = schedule.is_fully_static();
    if static_schedule {
        let mut adv_seen = 0usize;
        for (i, slot) in schedule.slots.iter().enumerate() {
            let t = i + 1;
            let (item, is_ro, rank, tie) = match *slot {
                Slot::Ro { item, ro_index } => (
                    item,
                    true,
                    Some(schedule.rank_table.rank(ro_index)),
                    ro_index,
                ),
                Slot::AdvStatic { item } => {
                    let tie = pool_len + adv_seen;
                    adv_seen += 1;
                    (item, false, None, tie)
                }
                Slot::AdvAdaptive => unreachable!(),
            };
            entries.push(LpEntry::new(t, item, tie, params.window_of(t)));
            metas.push((is_ro, rank));
        }
    } else if adaptive.is_none() {
        return Err(CoreError::InvalidParameter {
            what: "schedule",
            detail: "adaptive slots present; use run_adaptive".into(),
        });
    }

    let mut arrival_order = if static_schedule {
        let mut order: Vec<u32> = (0..n as u32).collect();
        order.sort_unstable_by(|&i, &j| better_order(&entries[i as usize], &entries[j as usize]));
        let mut pos_of = vec![0u32; n];
        for (pos, &id) in order.iter().enumerate() {
            pos_of[id as usize] = pos as u32;
        }
        ArrivalOrder::Pre {
            order,
            pos_of,
            arrived: vec![false; n],
        }
    } else {
        ArrivalOrder::Dyn {
            order: Vec::with_capacity(n),
        }
    };

    let ro_arrivals = if adaptive.is_some() {
        schedule.ro_arrivals()
    } else {
        Vec::new()
    };

    let mut caps_rem = vec![0.0f64; wcount];
    let mut caps_stamp = vec![u32::MAX; wcount];
    let mut total_occ = 0.0f64;
    let mut window_occ = vec![0.0f64; wcount];
    let mut records: Vec<StepRecord> = Vec::with_capacity(n);
    let mut adv_seen = 0usize;

    for t in 1..=n {
        let id = (t - 1) as u32;
        if !static_schedule {
            let (item, is_ro, rank, tie) = match schedule.slots[t - 1] {
                Slot::Ro { item, ro_index } => (
                    item,
                    true,
                    Some(schedule.rank_table.rank(ro_index)),
                    ro_index,
                ),
                Slot::AdvStatic { item } => {
                    let tie = pool_len + adv_seen;
                    adv_seen += 1;
                    (item, false, None, tie)
                }
                Slot::AdvAdaptive => {
                    let (rule, obs) = adaptive.expect("checked above");
                    let ctx = AdaptiveContext {
                        t,
                        history: &records,
                        ro_arrivals: match obs {
                            ObservationMode::FullSchedule => Some(&ro_arrivals),
                            ObservationMode::HistoryOnly => None,
                        },
                    };
                    let item = rule.emit(&ctx);
                    item.validate().map_err(|e| CoreError::InvalidParameter {
                        what: "adaptive emission",
                        detail: format!("at t={t}: {e}"),
                    })?;
                    let tie = pool_len + adv_seen;
                    adv_seen += 1;
                    (item, false, None, tie)
                }
            };
            entries.push(LpEntry::new(t, item, tie, params.window_of(t)));
            metas.push((is_ro, rank));
        }
        arrival_order.mark(id, &entries);

        let budget = match mode {
            EngineMode::Baro => inner_budget(params, constants, t),
            EngineMode::Primal => primal_budget(params, t),
        };
        let x_t = scan_current_fraction(
            &arrival_order,
            &entries,
            &mut caps_rem,
            &mut caps_stamp,
            t as u32,
            cap_value,
            budget,
            id,
        );
        let tentative = x_t > POSITIVE_TOL;
        let full_pick = x_t >= 1.0 - POSITIVE_TOL;
        let blocked_main = total_occ > k - 1.0;
        let blocked_outer = match mode {
            EngineMode::Baro if t >= 2 => window_occ[params.window_of(t - 1)] > outer_cap - 1.0,
            _ => false,
        };
        let picked = tentative && !blocked_main && !blocked_outer;

        let e = &entries[t - 1];
        let occupation = if picked { e.weight } else { 0.0 };
        total_occ += occupation;
        window_occ[e.window] += occupation;
        let (is_ro, rank) = metas[t - 1];
        records.push(StepRecord {
            time: t,
            is_ro,
            item: Item {
                value: e.value,
                weight: e.weight,
            },
            rank,
            tie: e.tie,
            tentative,
            full_pick,
            blocked_main,
            blocked_outer,
            picked,
            occupation,
            tentative_occupation: if tentative { e.weight } else { 0.0 },
        });
    }

    Ok(Trace {
        algorithm: kind,
        params: params.clone(),
        constants: *constants,
        seed: schedule.seed,
        records,
    })
}

/// Run the windowed algorithm over a fully static schedule.
pub fn run(schedule: &Schedule, constants: &AlgoConstants) -> Result<Trace, CoreError> {
    run_engine(
        schedule,
        constants,
        EngineMode::Baro,
        AlgorithmKind::Baro,
        None,
    )
}

/// Run against an adaptive adversary; the rule is invoked lazily at each
/// adversarial time with the algorithm's history (and, in full-schedule
/// mode, the realized random-order arrivals).
pub fn run_adaptive(
    schedule: &Schedule,
    rule: &dyn AdaptiveRule,
    observation: ObservationMode,
    constants: &AlgoConstants,
) -> Result<Trace, CoreError> {
    run_engine(
        schedule,
        constants,
        EngineMode::Baro,
        AlgorithmKind::Baro,
        Some((rule, observation)),
    )
}

/// The unwindowed primal baseline: LP budget `ceil(t k / n)`, no window
/// constraints, pick whenever the LP takes the current item and the main
/// budget has room.
pub fn run_baseline_primal(schedule: &Schedule) -> Result<Trace, CoreError> {
    run_engine(
        schedule,
        &AlgoConstants::unbounded(),
        EngineMode::Primal,
        AlgorithmKind::Primal,
        None,
    )
}

/// Sample-then-threshold baseline: reject the first `floor(n/e)` arrivals,
/// then pick an item iff it is among the `floor(k)` highest values seen so
/// far and exceeds the sample maximum, with unit-capacity accounting (at
/// most `k` picks).
pub fn run_baseline_topk_filter(schedule: &Schedule) -> Result<Trace, CoreError> {
    if !schedule.is_fully_static() {
        return Err(CoreError::InvalidParameter {
            what: "schedule",
            detail: "top-k filter baseline needs a static schedule".into(),
        });
    }
    let params = &schedule.params;
    let n = params.n();
    let k = params.k();
    let sample_len = math::floor(n as f64 / core::f64::consts::E) as usize;
    let member_count = (math::floor(k) as usize).max(1);
    let pool_len = schedule.sorted_pool.len();

    let mut top: Vec<f64> = Vec::with_capacity(member_count + 1);
    let mut sample_max = f64::NEG_INFINITY;
    let mut picks = 0usize;
    let mut adv_seen = 0usize;
    let mut records = Vec::with_capacity(n);
    for t in 1..=n {
        let (item, is_ro, rank, tie) = match schedule.slots[t - 1] {
            Slot::Ro { item, ro_index } => (
                item,
                true,
                Some(schedule.rank_table.rank(ro_index)),
                ro_index,
            ),
            Slot::AdvStatic { item } => {
                let tie = pool_len + adv_seen;
                adv_seen += 1;
                (item, false, None, tie)
            }
            Slot::AdvAdaptive => unreachable!("checked static"),
        };

        // Keep the running top values (descending, truncated).
        let at = top.partition_point(|&v| v > item.value);
        top.insert(at, item.value);
        let in_top = at < member_count;
        top.truncate(member_count);

        let tentative = t > sample_len && in_top && item.value > sample_max;
        if t <= sample_len && item.value > sample_max {
            sample_max = item.value;
        }
        let blocked_main = picks as f64 > k - 1.0;
        let picked = tentative && !blocked_main;
        if picked {
            picks += 1;
        }
        records.push(StepRecord {
            time: t,
            is_ro,
            item,
            rank,
            tie,
            tentative,
            full_pick: tentative,
            blocked_main,
            blocked_outer: false,
            picked,
            occupation: if picked { item.weight } else { 0.0 },
            tentative_occupation: if tentative { item.weight } else { 0.0 },
        });
    }
    Ok(Trace {
        algorithm: AlgorithmKind::TopkFilter,
        params: params.clone(),
        constants: AlgoConstants::unbounded(),
        seed: schedule.seed,
        records,
    })
}

//! Per-window occupation distribution and the per-step blocking frequency.

use alloc::vec;
use alloc::vec::Vec;

use crate::algo::Trace;

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct WindowOccupation {
    pub window: usize,
    pub mean_tentative_mass: f64,
    pub max_tentative_mass: f64,
    pub mean_picked_mass: f64,
    pub max_picked_mass: f64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct OccupationProfile {
    pub trials: usize,
    pub per_window: Vec<WindowOccupation>,
    /// `blocked_frequency[t-1]` = fraction of trials where either blocking
    /// check failed at time `t` (whether or not the step was tentative).
    pub blocked_frequency: Vec<f64>,
}

/// All traces must share parameters.
pub fn occupation_profile(traces: &[Trace]) -> OccupationProfile {
    let Some(first) = traces.first() else {
        return OccupationProfile {
            trials: 0,
            per_window: Vec::new(),
            blocked_frequency: Vec::new(),
        };
    };
    let p = &first.params;
    let n = p.n();
    let wc = p.window_count();
    let trials = traces.len() as f64;

    let mut tent_sum = vec![0.0f64; wc];
    let mut tent_max = vec![0.0f64; wc];
    let mut pick_sum = vec![0.0f64; wc];
    let mut pick_max = vec![0.0f64; wc];
    let mut blocked = vec![0u64; n];
    for tr in traces {
        let mut tent = vec![0.0f64; wc];
        let mut pick = vec![0.0f64; wc];
        for rec in &tr.records {
            let w = p.window_of(rec.time);
            tent[w] += rec.tentative_occupation;
            pick[w] += rec.occupation;
            if rec.blocked_main || rec.blocked_outer {
                blocked[rec.time - 1] += 1;
            }
        }
        for w in 0..wc {
            tent_sum[w] += tent[w];
            pick_sum[w] += pick[w];
            if tent[w] > tent_max[w] {
                tent_max[w] = tent[w];
            }
            if pick[w] > pick_max[w] {
                pick_max[w] = pick[w];
            }
        }
    }

    OccupationProfile {
        trials: traces.len(),
        per_window: (0..wc)
            .map(|w| WindowOccupation {
                window: w,
                mean_tentative_mass: tent_sum[w] / trials,
                max_tentative_mass: tent_max[w],
                mean_picked_mass: pick_sum[w] / trials,
                max_picked_mass: pick_max[w],
            })
            .collect(),
        blocked_frequency: blocked.iter().map(|&b| b as f64 / trials).collect(),
    }
}

//! Model configuration: horizon, knapsack size, window geometry, and the
//! adversarial window cover.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::CoreError;
use crate::math;

/// Horizon `n`, knapsack size `k`, window length `ell`, the number of
/// adversarial windows `gamma`, and the concrete window cover.
///
/// Windows partition `[1, n]` into consecutive intervals of length `ell`
/// (the last possibly shorter) and are indexed from 0. A *covered* window
/// is adversarial: every time step inside it receives an adversary-chosen
/// item; every uncovered ("free") time step receives the next element of
/// the uniformly permuted pool.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModelParams {
    n: usize,
    k: f64,
    ell: usize,
    gamma: usize,
    adv_cover: BTreeSet<usize>,
}

impl ModelParams {
    /// Hard invariants only: `n >= 1`, `k > 0`, `ell >= 1`, `|cover| <=
    /// gamma`, cover indices in range, and `2 * gamma * ell <= n` (at most
    /// half the horizon can be adversarial). The analysis-regime guards
    /// (`k >= 80`, `n >= 2k`, `gamma >= sqrt(k)`) are warnings; see
    /// [`Self::paper_regime_warnings`] and [`Self::validate_strict`].
    pub fn new(
        n: usize,
        k: f64,
        gamma: usize,
        adv_cover: BTreeSet<usize>,
        ell_override: Option<usize>,
    ) -> Result<Self, CoreError> {
        if n == 0 {
            return Err(CoreError::InvalidParameter {
                what: "n",
                detail: "horizon must be >= 1".into(),
            });
        }
        if !(k.is_finite() && k > 0.0) {
            return Err(CoreError::InvalidParameter {
                what: "k",
                detail: format!("knapsack size must be finite and > 0, got {k}"),
            });
        }
        let ell = match ell_override {
            Some(0) => {
                return Err(CoreError::InvalidParameter {
                    what: "ell",
                    detail: "window size must be >= 1".into(),
                })
            }
            Some(l) => l,
            None => Self::default_ell(n, k),
        };
        if gamma.saturating_mul(ell).saturating_mul(2) > n {
            return Err(CoreError::InvalidParameter {
                what: "gamma",
                detail: format!("2 * gamma * ell = {} exceeds n = {n}", 2 * gamma * ell),
            });
        }
        let window_count = n.div_ceil(ell);
        if adv_cover.len() > gamma {
            return Err(CoreError::InvalidParameter {
                what: "adv_cover",
                detail: format!("cover has {} windows, gamma = {gamma}", adv_cover.len()),
            });
        }
        if let Some(&w) = adv_cover.iter().next_back() {
            if w >= window_count {
                return Err(CoreError::InvalidParameter {
                    what: "adv_cover",
                    detail: format!("window index {w} out of range (count {window_count})"),
                });
            }
        }
        Ok(ModelParams {
            n,
            k,
            ell,
            gamma,
            adv_cover,
        })
    }

    /// Default window size `ceil(n ln k / k)`, clamped to at least 1.
    pub fn default_ell(n: usize, k: f64) -> usize {
        let raw = math::ceil(n as f64 * math::ln(k) / k);
        if raw >= 1.0 {
            raw as usize
        } else {
            1
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn gamma(&self) -> usize {
        self.gamma
    }

    pub fn adv_cover(&self) -> &BTreeSet<usize> {
        &self.adv_cover
    }

    pub fn window_count(&self) -> usize {
        self.n.div_ceil(self.ell)
    }

    /// 0-based index of the window containing time `t` (1-based).
    pub fn window_of(&self, t: usize) -> usize {
        debug_assert!(t >= 1 && t <= self.n);
        (t - 1) / self.ell
    }

    /// Inclusive time bounds of window `w`.
    pub fn window_bounds(&self, w: usize) -> (usize, usize) {
        let lo = w * self.ell + 1;
        let hi = ((w + 1) * self.ell).min(self.n);
        (lo, hi)
    }

    /// The full partition of `[1, n]`.
    pub fn windows(&self) -> Vec<(usize, usize)> {
        (0..self.window_count())
            .map(|w| self.window_bounds(w))
            .collect()
    }

    /// The partition truncated to the prefix `[1, t]`; the last window is
    /// clipped at `t`.
    pub fn truncated_windows(&self, t: usize) -> Vec<(usize, usize)> {
        truncate_windows(self.n, self.ell, t)
    }

    pub fn is_covered_time(&self, t: usize) -> bool {
        self.adv_cover.contains(&self.window_of(t))
    }

    pub fn is_free_time(&self, t: usize) -> bool {
        !self.is_covered_time(t)
    }

    /// Total number of time steps inside covered windows.
    pub fn covered_time_count(&self) -> usize {
        self.adv_cover
            .iter()
            .map(|&w| {
                let (lo, hi) = self.window_bounds(w);
                hi - lo + 1
            })
            .sum()
    }

    /// `|Free_t|`: free times in the prefix `[1, t]`.
    pub fn free_count(&self, t: usize) -> usize {
        debug_assert!(t <= self.n);
        let covered: usize = self
            .adv_cover
            .iter()
            .map(|&w| {
                let (lo, hi) = self.window_bounds(w);
                if lo > t {
                    0
                } else {
                    hi.min(t) - lo + 1
                }
            })
            .sum();
        t - covered
    }

    /// Random-order times in the prefix. The cover *is* the adversarial
    /// set here, so this coincides with [`Self::free_count`].
    pub fn ro_count(&self, t: usize) -> usize {
        self.free_count(t)
    }

    /// The free times in `[1, t]`, ascending.
    pub fn free_times(&self, t: usize) -> Vec<usize> {
        (1..=t).filter(|&s| self.is_free_time(s)).collect()
    }

    /// Budget scaling `c_t = max(0, 1 - 4*gamma*ell/t)`. The clamp covers
    /// the early prefix the analysis never visits: a nonpositive scaled
    /// budget means "select nothing yet".
    pub fn budget_scale_c(&self, t: usize) -> f64 {
        debug_assert!(t >= 1);
        let raw = 1.0 - 4.0 * (self.gamma * self.ell) as f64 / t as f64;
        if raw > 0.0 {
            raw
        } else {
            0.0
        }
    }

    /// `ell * k / n`, the unit all window caps are multiples of.
    pub fn window_cap_unit(&self) -> f64 {
        self.ell as f64 * self.k / self.n as f64
    }

    /// Analysis-regime conditions that are deliberately not hard errors, so
    /// desk-scale exploration below the regime stays possible.
    pub fn paper_regime_warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.k < 80.0 {
            out.push(format!("k = {} below the analysis regime k >= 80", self.k));
        }
        if (self.n as f64) < 2.0 * self.k {
            out.push(format!("n = {} below the analysis regime n >= 2k", self.n));
        }
        if self.gamma > 0 && (self.gamma as f64) < math::sqrt(self.k) {
            out.push(format!(
                "gamma = {} below the analysis regime gamma >= sqrt(k) = {:.2}",
                self.gamma,
                math::sqrt(self.k)
            ));
        }
        out
    }

    /// Errors out on any analysis-regime violation.
    pub fn validate_strict(&self) -> Result<(), CoreError> {
        let warnings = self.paper_regime_warnings();
        if let Some(first) = warnings.into_iter().next() {
            return Err(CoreError::InvalidParameter {
                what: "paper regime",
                detail: first,
            });
        }
        Ok(())
    }
}

/// Disjoint consecutive intervals of length `ell` covering `[1, n]`, the
/// last possibly shorter.
pub fn window_partition(n: usize, ell: usize) -> Vec<(usize, usize)> {
    assert!(n >= 1 && ell >= 1);
    let mut out = Vec::with_capacity(n.div_ceil(ell));
    let mut lo = 1;
    while lo <= n {
        let hi = (lo + ell - 1).min(n);
        out.push((lo, hi));
        lo = hi + 1;
    }
    out
}

/// The partition clipped to the prefix `[1, t]`.
pub fn truncate_windows(n: usize, ell: usize, t: usize) -> Vec<(usize, usize)> {
    assert!(t <= n);
    window_partition(n, ell)
        .into_iter()
        .filter(|&(lo, _)| lo <= t)
        .map(|(lo, hi)| (lo, hi.min(t)))
        .collect()
}

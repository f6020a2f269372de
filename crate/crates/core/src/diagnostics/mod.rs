//! Trace aggregation, exact oracles for the deterministic LP lemmas, and
//! numeric checks of the concentration inequalities behind the analysis.
//!
//! Stochastic bound checks all use the same slack convention: the observed
//! frequency may exceed an asserted probability bound by at most three
//! binomial standard errors (the bounds hold for true probabilities, the
//! lab only sees samples). Deterministic checks get fixed tolerances.

mod curves;
mod inequalities;
mod occupation;
mod oracles;
mod quad;
mod rank_profile;
mod ratio;
mod relaxed;

pub use curves::{bound_curves, BoundCurves, CurvePoint};
pub use inequalities::{
    check_chebyshev_sum, check_moment_bound, check_psi_integral, check_sampling_comparison,
    check_wo_replacement_tail, ChebyshevCheck, MomentCheck, PsiIntegralCheck, SamplingCheck,
    TailCheck,
};
pub use occupation::{occupation_profile, OccupationProfile, WindowOccupation};
pub use oracles::{
    full_pick_oracle, random_scenario, saturation_oracle, FullPickOutcome, PrefixScenario,
    SaturationOutcome,
};
pub use rank_profile::{rank_profile, RankBucket, RankProfile};
pub use ratio::{competitive_ratio, RatioReport};
pub use relaxed::{log_grid, relaxed_tentative, RelaxedTentative};

pub(crate) mod stats {
    use crate::math;

    pub fn mean(xs: &[f64]) -> f64 {
        if xs.is_empty() {
            return 0.0;
        }
        xs.iter().sum::<f64>() / xs.len() as f64
    }

    /// Unbiased sample variance (0 for fewer than two points).
    pub fn sample_variance(xs: &[f64]) -> f64 {
        if xs.len() < 2 {
            return 0.0;
        }
        let m = mean(xs);
        xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
    }

    /// Half-width of the normal-approximation 95% confidence interval for
    /// the mean.
    pub fn ci95_half(xs: &[f64]) -> f64 {
        if xs.len() < 2 {
            return 0.0;
        }
        1.96 * math::sqrt(sample_variance(xs) / xs.len() as f64)
    }

    /// Binomial standard error of a frequency bound `p` over `count`
    /// observations.
    pub fn binomial_sigma(p: f64, count: u64) -> f64 {
        if count == 0 {
            return 0.0;
        }
        let p = p.clamp(0.0, 1.0);
        math::sqrt(p * (1.0 - p) / count as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::stats;

    #[test]
    fn stats_basics() {
        assert_eq!(stats::mean(&[]), 0.0);
        assert_eq!(stats::mean(&[2.0, 4.0]), 3.0);
        assert_eq!(stats::sample_variance(&[1.0]), 0.0);
        assert!((stats::sample_variance(&[1.0, 3.0]) - 2.0).abs() < 1e-12);
        assert_eq!(stats::binomial_sigma(0.5, 0), 0.0);
        assert!((stats::binomial_sigma(0.5, 100) - 0.05).abs() < 1e-12);
    }
}

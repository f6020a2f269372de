//! Numeric checks of the concentration inequalities the analysis relies
//! on. Every one of them is mathematically true, so any violation (beyond
//! Monte-Carlo slack where sampling is involved) means an implementation
//! bug.

use alloc::format;
use alloc::vec::Vec;

use super::quad;
use super::stats;
use crate::error::CoreError;
use crate::math;
use crate::rng::Rng;

/// Tail of a sum of draws without replacement versus the Bernstein-type
/// bound `2 exp(-tau^2 / (4 mu + tau))`.
#[derive(Clone, Debug, PartialEq)]
pub struct TailCheck {
    pub empirical: f64,
    pub bound: f64,
    pub sigma: f64,
    pub ok: bool,
}

/// Monte-Carlo estimate of `Pr(|sum of s draws - mu| >= tau)` for draws
/// without replacement from `u` (values in `[0, 1]`), against the analytic
/// bound. `ok` allows three standard errors of sampling slack.
pub fn check_wo_replacement_tail(
    u: &[f64],
    s: usize,
    tau: f64,
    trials: usize,
    seed: u64,
) -> Result<TailCheck, CoreError> {
    if s > u.len() {
        return Err(CoreError::InvalidParameter {
            what: "s",
            detail: format!("cannot draw {s} from {} values", u.len()),
        });
    }
    if u.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
        return Err(CoreError::InvalidParameter {
            what: "u",
            detail: "values must lie in [0, 1]".into(),
        });
    }
    if !(tau >= 0.0) {
        return Err(CoreError::InvalidParameter {
            what: "tau",
            detail: format!("must be >= 0, got {tau}"),
        });
    }
    let mu = s as f64 * stats::mean(u);
    let bound = 2.0 * math::exp(-(tau * tau) / (4.0 * mu + tau));
    let mut rng = Rng::new(seed);
    let mut scratch: Vec<f64> = u.to_vec();
    let mut hits = 0u64;
    for _ in 0..trials {
        // Partial Fisher-Yates: the first s positions are a uniform draw
        // without replacement.
        let len = scratch.len();
        let mut sum = 0.0;
        for i in 0..s {
            let j = i + rng.below((len - i) as u64) as usize;
            scratch.swap(i, j);
            sum += scratch[i];
        }
        if math::abs(sum - mu) >= tau {
            hits += 1;
        }
    }
    let empirical = hits as f64 / trials.max(1) as f64;
    let sigma = stats::binomial_sigma(empirical, trials as u64);
    let ok = empirical <= bound + 3.0 * sigma || bound >= 1.0;
    Ok(TailCheck {
        empirical,
        bound,
        sigma,
        ok,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChebyshevCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// For non-increasing `a`, `b` and non-negative weights `p` with positive
/// total: `sum a_i b_i p_i >= (sum a_i p_i)(sum b_i p_i) / sum p_i`,
/// checked as a cross-multiplied inequality with 1e-12 relative slack.
pub fn check_chebyshev_sum(a: &[f64], b: &[f64], p: &[f64]) -> Result<ChebyshevCheck, CoreError> {
    if a.len() != b.len() || a.len() != p.len() || a.is_empty() {
        return Err(CoreError::InvalidParameter {
            what: "sequences",
            detail: "a, b, p must be non-empty and equally long".into(),
        });
    }
    let non_increasing = |xs: &[f64]| xs.windows(2).all(|w| w[0] >= w[1]);
    if !non_increasing(a) || !non_increasing(b) {
        return Err(CoreError::InvalidParameter {
            what: "sequences",
            detail: "a and b must be non-increasing".into(),
        });
    }
    let p_sum: f64 = p.iter().sum();
    if p.iter().any(|&x| x < 0.0) || !(p_sum > 0.0) {
        return Err(CoreError::InvalidParameter {
            what: "p",
            detail: "weights must be non-negative with positive total".into(),
        });
    }
    let abp: f64 = (0..a.len()).map(|i| a[i] * b[i] * p[i]).sum();
    let ap: f64 = (0..a.len()).map(|i| a[i] * p[i]).sum();
    let bp: f64 = (0..a.len()).map(|i| b[i] * p[i]).sum();
    let lhs = abp * p_sum;
    let rhs = ap * bp;
    let scale = 1.0f64.max(math::abs(lhs)).max(math::abs(rhs));
    Ok(ChebyshevCheck {
        lhs,
        rhs,
        ok: lhs >= rhs - 1e-12 * scale,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SamplingCheck {
    /// Worst conditional without-replacement expectation over the excluded
    /// element.
    pub lhs_max: f64,
    pub with_replacement: f64,
    pub factor: f64,
    pub ok: bool,
}

/// Exhaustive comparison of expectations of a non-negative `f` over
/// `m`-tuples: drawn without replacement (conditioned on one further
/// excluded element) versus with replacement, with the factor
/// `(1 + m/(n-m))^m`. `f` receives element indices `0..n`.
pub fn check_sampling_comparison(
    n: usize,
    m: usize,
    f: &dyn Fn(&[usize]) -> f64,
) -> Result<SamplingCheck, CoreError> {
    if n == 0 || n > 7 || m == 0 || m > 3 {
        return Err(CoreError::InvalidParameter {
            what: "sampling comparison",
            detail: format!("need 1 <= n <= 7 and 1 <= m <= 3, got n={n}, m={m}"),
        });
    }
    if m >= n {
        return Err(CoreError::InvalidParameter {
            what: "m",
            detail: format!("must be < n = {n} (one more element stays excluded), got {m}"),
        });
    }

    // With replacement: all n^m tuples.
    let mut with_sum = 0.0;
    let mut tuple = alloc::vec![0usize; m];
    loop {
        let v = f(&tuple);
        debug_assert!(v >= 0.0, "f must be non-negative");
        with_sum += v;
        // Odometer increment.
        let mut pos = 0;
        loop {
            if pos == m {
                break;
            }
            tuple[pos] += 1;
            if tuple[pos] < n {
                break;
            }
            tuple[pos] = 0;
            pos += 1;
        }
        if pos == m {
            break;
        }
    }
    let with_replacement = with_sum / math::powi(n as f64, m as u32);

    // Without replacement, conditioned on each excluded element x.
    fn distinct_tuples(
        n: usize,
        m: usize,
        excluded: usize,
        prefix: &mut Vec<usize>,
        f: &dyn Fn(&[usize]) -> f64,
        sum: &mut f64,
        count: &mut u64,
    ) {
        if prefix.len() == m {
            *sum += f(prefix);
            *count += 1;
            return;
        }
        for v in 0..n {
            if v == excluded || prefix.contains(&v) {
                continue;
            }
            prefix.push(v);
            distinct_tuples(n, m, excluded, prefix, f, sum, count);
            prefix.pop();
        }
    }
    let mut lhs_max = 0.0f64;
    for x in 0..n {
        let mut sum = 0.0;
        let mut count = 0u64;
        let mut prefix = Vec::with_capacity(m);
        distinct_tuples(n, m, x, &mut prefix, f, &mut sum, &mut count);
        let e = sum / count as f64;
        if e > lhs_max {
            lhs_max = e;
        }
    }

    let factor = math::powi(1.0 + m as f64 / (n - m) as f64, m as u32);
    let scale = 1.0f64.max(lhs_max).max(factor * with_replacement);
    Ok(SamplingCheck {
        lhs_max,
        with_replacement,
        factor,
        ok: lhs_max <= factor * with_replacement + 1e-12 * scale,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentCheck {
    pub empirical: f64,
    pub bound: f64,
    pub sigma: f64,
    pub ok: bool,
}

/// Monte-Carlo estimate of `E (sum of n Bernoulli(p))^m` against the bound
/// `(2 e^2 n p)^m` (independent Bernoullis satisfy the product-moment
/// hypothesis with equality). Requires `2 <= m <= n p`; `p = 0` is the
/// vacuous equality `0 <= 0`.
pub fn check_moment_bound(
    n: usize,
    p: f64,
    m: u32,
    trials: usize,
    seed: u64,
) -> Result<MomentCheck, CoreError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(CoreError::InvalidParameter {
            what: "p",
            detail: format!("must be in [0, 1], got {p}"),
        });
    }
    if p == 0.0 {
        return Ok(MomentCheck {
            empirical: 0.0,
            bound: 0.0,
            sigma: 0.0,
            ok: true,
        });
    }
    if m < 2 || m as f64 > n as f64 * p {
        return Err(CoreError::HypothesisUnmet {
            what: "moment bound",
            detail: format!("need 2 <= m <= n p = {}, got m = {m}", n as f64 * p),
        });
    }
    let mut rng = Rng::new(seed);
    let mut acc = 0.0;
    let mut acc_sq = 0.0;
    for _ in 0..trials {
        let mut count = 0u32;
        for _ in 0..n {
            if rng.bernoulli(p) {
                count += 1;
            }
        }
        let x = math::powi(count as f64, m);
        acc += x;
        acc_sq += x * x;
    }
    let t = trials.max(1) as f64;
    let empirical = acc / t;
    let var = (acc_sq / t - empirical * empirical).max(0.0);
    let sigma = math::sqrt(var / t);
    let e2 = math::exp(2.0);
    let bound = math::powi(2.0 * e2 * n as f64 * p, m);
    Ok(MomentCheck {
        empirical,
        bound,
        sigma,
        ok: empirical <= bound + 3.0 * sigma,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PsiIntegralCheck {
    pub integral: f64,
    pub bound: f64,
    pub ok: bool,
}

/// Quadrature of `int_0^inf psi(z - 1/k) m z^(m-1) dz` — the
/// `m`-dimensional integral of `psi(max_i x_i - 1/k)` reduced through the
/// max-order-statistic density — against `1 + 500^m / k`. The integrand's
/// case breakpoints are integrated piecewise; the exponential tail is
/// truncated where it falls below the tolerance.
pub fn check_psi_integral(k: f64, m: u32) -> Result<PsiIntegralCheck, CoreError> {
    if !(k >= 3.0) || m == 0 {
        return Err(CoreError::InvalidParameter {
            what: "psi integral",
            detail: format!("need k >= 3 and m >= 1, got k={k}, m={m}"),
        });
    }
    // psi jumps at its case boundaries, which defeats adaptive refinement
    // straddling them; integrate each closed-form case on its own piece
    // (the boundary points themselves have measure zero).
    let m_f = m as f64;
    let mono = move |z: f64| m_f * math::powi(z, m - 1);
    let b1 = 1.0 + 1.0 / k;
    let b2 = 50.0 + 1.0 / k;
    // Past z_max the tail integrand has long underflowed to zero.
    let z_max = b2 + 4000.0 / math::ln(k);
    let ln_k = math::ln(k);
    let tol = 1e-8 / 3.0;
    let integral = quad::integrate(&mono, 0.0, b1, tol)?
        + quad::integrate(&|z| 2.0 / k * mono(z), b1, b2, tol)?
        + quad::integrate(
            &|z| 4.0 * k * math::exp(-((z - 1.0 / k) / 20.0) * ln_k) * mono(z),
            b2,
            z_max,
            tol,
        )?;
    let bound = 1.0 + math::powi(500.0, m) / k;
    Ok(PsiIntegralCheck {
        integral,
        bound,
        ok: integral <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn tail_trivial_cases() {
        // Constant population: zero deviation, any positive tau never hit.
        let u = vec![0.5; 40];
        let c = check_wo_replacement_tail(&u, 10, 0.25, 2000, 1).unwrap();
        assert_eq!(c.empirical, 0.0);
        assert!(c.ok);

        // tau = 0: bound 2, trivially satisfied.
        let c = check_wo_replacement_tail(&u, 10, 0.0, 100, 1).unwrap();
        assert_eq!(c.bound, 2.0);
        assert!(c.ok);

        assert!(check_wo_replacement_tail(&u, 41, 1.0, 10, 1).is_err());
    }

    #[test]
    fn tail_uniform_grid_holds() {
        let u: Vec<f64> = (0..100).map(|i| i as f64 / 99.0).collect();
        for tau in [1.0, 2.0, 4.0] {
            let c = check_wo_replacement_tail(&u, 30, tau, 20_000, 7).unwrap();
            assert!(c.ok, "tau={tau}: {c:?}");
        }
    }

    #[test]
    fn chebyshev_equality_cases() {
        // Constant sequences: exact equality.
        let c = check_chebyshev_sum(&[2.0, 2.0, 2.0], &[3.0, 3.0, 3.0], &[1.0, 2.0, 0.5]).unwrap();
        assert!((c.lhs - c.rhs).abs() <= 1e-12 * c.lhs.abs());
        assert!(c.ok);

        // Single element: equality.
        let c = check_chebyshev_sum(&[5.0], &[7.0], &[2.0]).unwrap();
        assert_eq!(c.lhs, c.rhs);

        // Violated preconditions.
        assert!(check_chebyshev_sum(&[1.0, 2.0], &[2.0, 1.0], &[1.0, 1.0]).is_err());
        assert!(check_chebyshev_sum(&[2.0, 1.0], &[2.0, 1.0], &[0.0, 0.0]).is_err());
        assert!(check_chebyshev_sum(&[2.0, 1.0], &[2.0, 1.0], &[-1.0, 2.0]).is_err());
        assert!(check_chebyshev_sum(&[], &[], &[]).is_err());
    }

    #[test]
    fn chebyshev_randomized_zero_violations() {
        let mut rng = Rng::new(42);
        for _ in 0..20_000 {
            let len = 1 + rng.below(8) as usize;
            let mut a: Vec<f64> = (0..len).map(|_| rng.f64() * 10.0 - 3.0).collect();
            let mut b: Vec<f64> = (0..len).map(|_| rng.f64() * 4.0 - 2.0).collect();
            a.sort_by(|x, y| y.total_cmp(x));
            b.sort_by(|x, y| y.total_cmp(x));
            let p: Vec<f64> = (0..len)
                .map(|_| {
                    if rng.bernoulli(0.2) {
                        0.0
                    } else {
                        rng.f64() * 3.0
                    }
                })
                .collect();
            if !(p.iter().sum::<f64>() > 0.0) {
                continue;
            }
            let c = check_chebyshev_sum(&a, &b, &p).unwrap();
            assert!(c.ok, "violation: a={a:?} b={b:?} p={p:?} {c:?}");
        }
    }

    #[test]
    fn sampling_comparison_constant_f() {
        let c = check_sampling_comparison(5, 2, &|_| 1.0).unwrap();
        assert_eq!(c.lhs_max, 1.0);
        assert_eq!(c.with_replacement, 1.0);
        assert!(c.factor >= 1.0);
        assert!(c.ok);
    }

    #[test]
    fn sampling_comparison_distinct_indicator() {
        // f = indicator of all-distinct tuples, n=3, m=2: conditional
        // without-replacement expectation is 1, with-replacement is 2/3,
        // factor (1 + 2/1)^2 = 9.
        let c = check_sampling_comparison(3, 2, &|t| if t[0] != t[1] { 1.0 } else { 0.0 }).unwrap();
        assert_eq!(c.lhs_max, 1.0);
        assert!((c.with_replacement - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(c.factor, 9.0);
        assert!(c.ok);
    }

    #[test]
    fn sampling_comparison_random_f_zero_violations() {
        let mut rng = Rng::new(9);
        for _ in 0..200 {
            let n = 4 + rng.below(4) as usize;
            let m = 1 + rng.below(3.min(n as u64 - 1)) as usize;
            // Random non-negative f as a lookup table over tuples.
            let size = (n as u64).pow(m as u32) as usize;
            let table: Vec<f64> = (0..size).map(|_| rng.f64() * 5.0).collect();
            let f = |t: &[usize]| {
                let mut idx = 0usize;
                for &x in t {
                    idx = idx * n + x;
                }
                table[idx]
            };
            let c = check_sampling_comparison(n, m, &f).unwrap();
            assert!(c.ok, "violation at n={n}, m={m}: {c:?}");
        }
        assert!(check_sampling_comparison(3, 3, &|_| 1.0).is_err());
        assert!(check_sampling_comparison(8, 2, &|_| 1.0).is_err());
    }

    // Exact binomial moment by direct pmf summation: the independent
    // oracle the Monte-Carlo estimate is judged against.
    fn exact_binomial_moment(n: usize, p: f64, m: u32) -> f64 {
        let mut choose = 1.0f64;
        let mut total = 0.0;
        for j in 0..=n {
            if j > 0 {
                choose = choose * (n - j + 1) as f64 / j as f64;
            }
            let pmf = choose * math::powi(p, j as u32) * math::powi(1.0 - p, (n - j) as u32);
            total += pmf * math::powi(j as f64, m);
        }
        total
    }

    #[test]
    fn moment_bound_exact_small_case() {
        // n=10, p=0.5, m=2: E(sum)^2 = Var + mean^2 = 2.5 + 25 = 27.5.
        let exact = exact_binomial_moment(10, 0.5, 2);
        assert!((exact - 27.5).abs() < 1e-12, "{exact}");
        let c = check_moment_bound(10, 0.5, 2, 200_000, 3).unwrap();
        assert!(
            (c.empirical - exact).abs() <= 3.0 * c.sigma + 1e-12,
            "MC {} vs exact {exact} (sigma {})",
            c.empirical,
            c.sigma
        );
        let want_bound = {
            let e2 = math::exp(2.0);
            (2.0 * e2 * 5.0) * (2.0 * e2 * 5.0)
        };
        assert!((c.bound - want_bound).abs() < 1e-9);
        assert!(c.ok);

        // A higher moment against the same oracle.
        let exact = exact_binomial_moment(20, 0.3, 3);
        let c = check_moment_bound(20, 0.3, 3, 200_000, 4).unwrap();
        assert!(
            (c.empirical - exact).abs() <= 3.0 * c.sigma + 1e-12,
            "MC {} vs exact {exact}",
            c.empirical
        );
        assert!(c.ok);
    }

    #[test]
    fn moment_bound_edges() {
        assert!(check_moment_bound(10, 0.0, 2, 10, 1).unwrap().ok);
        assert!(matches!(
            check_moment_bound(10, 0.1, 3, 10, 1),
            Err(CoreError::HypothesisUnmet { .. })
        ));
        assert!(check_moment_bound(10, 2.0, 2, 10, 1).is_err());
    }

    #[test]
    fn psi_integral_examples() {
        // m=1, k=100: integral is 1 + O(1/k), far below 1 + 500/100.
        let c = check_psi_integral(100.0, 1).unwrap();
        assert!(c.ok);
        assert!(c.integral < 2.2, "{}", c.integral);
        // Lower sanity: psi = 1 on [0, 1 - 1/k) alone gives nearly 1.
        assert!(c.integral >= 1.0 - 2.0 / 100.0);

        let c = check_psi_integral(1e4, 2).unwrap();
        assert!(c.ok);
        assert!(c.integral >= 1.0 - 2.0 / 1e4);

        assert!(check_psi_integral(2.0, 1).is_err());
        assert!(check_psi_integral(100.0, 0).is_err());
    }
}

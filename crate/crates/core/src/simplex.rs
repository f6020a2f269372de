//! Reference LP solver for [`crate::lp::LpInstance`]: dense-tableau primal
//! simplex with Bland's rule.
//!
//! Every right-hand side of the instance (budget, caps, box bounds) is
//! nonnegative, so the all-slack basis is feasible and no phase-1 is
//! needed. The solver walks bases until no reduced cost is positive; with
//! at most 20 structural variables the walk is short and exact to well
//! below the 1e-9 agreement the verification suites demand.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::CoreError;
use crate::lp::LpInstance;
use crate::offline::FractionalSolution;

const RC_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-11;
const MAX_PIVOTS: usize = 20_000;

pub(crate) fn solve(inst: &LpInstance) -> Result<FractionalSolution, CoreError> {
    let n = inst.entries().len();
    if n == 0 {
        return Ok(FractionalSolution {
            fractions: Vec::new(),
            total_value: 0.0,
            total_weight: 0.0,
        });
    }

    // Row system: budget, each finite window cap, and one box row per entry.
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut budget_row = vec![0.0; n];
    for (j, e) in inst.entries().iter().enumerate() {
        budget_row[j] = e.weight;
    }
    rows.push((budget_row, inst.budget()));
    for (&w, &cap) in inst.window_caps() {
        if cap.is_finite() {
            let mut row = vec![0.0; n];
            for (j, e) in inst.entries().iter().enumerate() {
                if e.window == w {
                    row[j] = e.weight;
                }
            }
            rows.push((row, cap));
        }
    }
    for j in 0..n {
        let mut row = vec![0.0; n];
        row[j] = 1.0;
        rows.push((row, 1.0));
    }

    let m = rows.len();
    let cols = n + m;
    // tab[i] = [ structural | slacks | rhs ]
    let mut tab: Vec<Vec<f64>> = Vec::with_capacity(m);
    for (i, (row, rhs)) in rows.into_iter().enumerate() {
        let mut full = vec![0.0; cols + 1];
        full[..n].copy_from_slice(&row);
        full[n + i] = 1.0;
        full[cols] = rhs;
        tab.push(full);
    }
    let mut obj = vec![0.0; cols + 1];
    for (j, e) in inst.entries().iter().enumerate() {
        obj[j] = e.value;
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    for _pivot in 0..MAX_PIVOTS {
        // Bland: entering = lowest-index column with positive reduced cost.
        let Some(enter) = (0..cols).find(|&j| obj[j] > RC_TOL) else {
            // Optimal basis reached.
            let mut fractions = vec![0.0; n];
            for (i, &b) in basis.iter().enumerate() {
                if b < n {
                    fractions[b] = tab[i][cols].clamp(0.0, 1.0);
                }
            }
            let mut total_value = 0.0;
            let mut total_weight = 0.0;
            for (e, &x) in inst.entries().iter().zip(&fractions) {
                total_value += e.value * x;
                total_weight += e.weight * x;
            }
            return Ok(FractionalSolution {
                fractions,
                total_value,
                total_weight,
            });
        };

        // Ratio test; Bland tie-break on the leaving basis variable.
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            let a = tab[i][enter];
            if a > PIVOT_TOL {
                let ratio = tab[i][cols] / a;
                match leave {
                    None => leave = Some((i, ratio)),
                    Some((best_i, best_r)) => {
                        if ratio < best_r - PIVOT_TOL
                            || ((ratio - best_r).abs() <= PIVOT_TOL && basis[i] < basis[best_i])
                        {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((r, _)) = leave else {
            // Box rows bound every structural column, so this is a numeric
            // breakdown rather than a genuinely unbounded program.
            return Err(CoreError::NonConvergence {
                what: "solve_reference",
            });
        };

        let piv = tab[r][enter];
        for v in tab[r].iter_mut() {
            *v /= piv;
        }
        let (pivot_row, rest) = {
            let (a, b) = tab.split_at_mut(r);
            let (row, c) = b.split_first_mut().expect("row r exists");
            (row, (a, c))
        };
        for row in rest.0.iter_mut().chain(rest.1.iter_mut()) {
            let f = row[enter];
            if f != 0.0 {
                for (x, &pv) in row.iter_mut().zip(pivot_row.iter()) {
                    *x -= f * pv;
                }
            }
        }
        let f = obj[enter];
        if f != 0.0 {
            for (x, &pv) in obj.iter_mut().zip(pivot_row.iter()) {
                *x -= f * pv;
            }
        }
        basis[r] = enter;
    }

    Err(CoreError::NonConvergence {
        what: "solve_reference",
    })
}

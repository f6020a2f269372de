//! Simulation laboratory for online knapsack selection when arrivals are a
//! uniformly random order interrupted by bursts of adversarial time steps.
//!
//! The model: `n` time steps, a knapsack of size `k`. Time is partitioned
//! into windows of length `ell`; at most `gamma` windows are adversarial and
//! carry arbitrary (possibly adaptive) items, every other step receives the
//! next element of a uniformly permuted item pool. The online algorithm
//! solves, at each step `t`, a small LP over everything seen so far — a
//! scaled global budget plus a per-window cap — and permanently keeps the
//! current item only when the LP puts positive mass on it *and* two blocking
//! checks (total occupation, last-window occupation) leave room. The
//! benchmark is the offline fractional optimum over the random-order pool
//! alone.
//!
//! Layout:
//!
//! - [`item`], [`params`]: domain types — items, horizon/window geometry,
//!   adversarial covers, algorithm constants.
//! - [`rank`]: density order, weighted ranks, and the `psi` selection bound.
//! - [`offline`]: the fractional-knapsack benchmark [`opt_ro`].
//! - [`lp`]: the per-step LP (greedy solver, exact reference solver).
//! - [`algo`]: the online algorithm plus two fragile baselines.
//! - [`adversary`]: seeded schedule construction and burst generators.
//! - [`diagnostics`]: trace aggregation, deterministic oracles, and numeric
//!   checks of the concentration inequalities the analysis uses.
//!
//! Everything is a pure function of its inputs and the seeds that flow in;
//! there is no global state and no platform entropy. The crate is
//! `no_std`-compatible with `alloc` (disable default features), and all
//! transcendentals go through `libm` so results are identical across
//! platforms.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]
// Validation deliberately writes `!(x > 0.0)` so NaN falls into the
// rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod adversary;
pub mod algo;
pub mod diagnostics;
pub mod error;
pub mod item;
pub mod lp;
pub(crate) mod math;
pub mod offline;
pub mod params;
pub mod rank;
pub mod rng;
mod simplex;

pub use error::CoreError;
pub use item::{AlgoConstants, Item};
pub use offline::{opt_ro, FractionalSolution};
pub use params::ModelParams;
pub use rank::{psi, sort_pool, weighted_ranks, RankTable};

//! Deterministic approximate counting with K-approximation sets and functions.
//!
//! The crate provides:
//!
//! * [`stepfunc`]: monotone integer step functions, K-approximation set
//!   construction for both monotone directions, induced approximations and
//!   the shifted-sum composition used by every counting DP.
//! * [`incpoints`]: restriction of a step function to its change points and
//!   the conversion of approximation sets back to the original domain. This
//!   is what makes the strongly polynomial counters independent of the
//!   magnitude of the input numbers.
//! * [`oracles`]: exact reference counters (brute force and pseudo-polynomial
//!   DPs) for all three problems.
//! * [`mtuples`], [`knapsack`], [`contingency`]: the FPTAS counters.
//! * [`cli`]: the `approxcount` command-line surface.
//!
//! All counts are arbitrary-precision integers and every approximation
//! ratio comparison is carried out in exact integer arithmetic.

pub mod cli;
pub mod contingency;
pub mod error;
pub mod incpoints;
pub mod knapsack;
pub mod mtuples;
pub mod oracles;
pub mod report;
pub mod stepfunc;

pub use error::{Error, Result};
pub use oracles::{BigCount, Contingency2Instance, KnapsackInstance, MTuplesInstance};
pub use stepfunc::{ApproxRatio, ApproxSet, Direction, FnOracle, IntInterval, StepFunction};

//! Exact reference counters.
//!
//! Brute-force enumerators and pseudo-polynomial DPs for all three problems.
//! They are the ground truth the approximate counters are tested against,
//! and they back the `exact-*` modes of the CLI. Every entry point checks a
//! work estimate against [`Limits`] before allocating anything.

mod bits;
mod brute;
mod contingency;
mod dp;
mod instances;

pub use bits::{floor_log_plus, level_of, msb, Level};
pub use brute::{brute_contingency, brute_knapsack, brute_mtuples};
pub use contingency::{
    contingency_table, dp_contingency_binding, dp_contingency_sub, dp_contingency_sum,
};
pub use dp::{dp_knapsack, dp_mtuples, knapsack_table, mtuples_table};
pub use instances::{Contingency2Instance, KnapsackInstance, MTuplesInstance, MAX_MAGNITUDE};

pub use crate::stepfunc::BigCount;

use crate::error::{Error, Result};

/// Work caps for the exact counters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of enumerated candidates for brute force.
    pub enumeration: u128,
    /// Maximum number of big-integer cell updates for a DP.
    pub dp_work: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            enumeration: 10_000_000,
            dp_work: 50_000_000,
        }
    }
}

impl Limits {
    pub fn unbounded() -> Self {
        Limits {
            enumeration: u128::MAX,
            dp_work: u128::MAX,
        }
    }

    pub(crate) fn check_enumeration(&self, what: &'static str, size: u128) -> Result<()> {
        check(what, size, self.enumeration)
    }

    pub(crate) fn check_dp(&self, what: &'static str, size: u128) -> Result<()> {
        check(what, size, self.dp_work)
    }
}

fn check(what: &'static str, size: u128, cap: u128) -> Result<()> {
    if size > cap {
        return Err(Error::TooLarge { what, size, cap });
    }
    Ok(())
}

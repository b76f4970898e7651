//! Monotone integer step functions and K-approximation sets.
//!
//! A nondecreasing function on `{A..B}` is compressed by picking a set of
//! breakpoints `W` and answering queries between breakpoints with the value
//! at the right neighbour. A nonincreasing function uses the left neighbour.
//! Either way the induced function never undershoots the original, and when
//! `W` is a K-approximation set it never overshoots by more than a factor K.
//!
//! Compositions are limited to sums and re-compression of an approximation.
//! There is intentionally no difference operator: a difference of two
//! K-approximations is not an approximation of anything.

mod apxset;
mod oracle;
mod ratio;
mod step;

pub use apxset::{apx_set, apx_set_nondecreasing, apx_set_nonincreasing, ApproxSet};
pub use oracle::{shifted_sum, FnOracle};
pub use ratio::{parse_rational, ratio_to_f64, within_factor, ApproxRatio};
pub use step::{induce, StepFunction};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type BigCount = num_bigint::BigUint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Nondecreasing,
    Nonincreasing,
}

/// Closed integer interval `{lo, ..., hi}` with `lo <= hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[allow(clippy::len_without_is_empty)]
pub struct IntInterval {
    lo: i64,
    hi: i64,
}

impl IntInterval {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::invalid(format!("empty interval {{{lo}..{hi}}}")));
        }
        Ok(IntInterval { lo, hi })
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    /// Number of integers in the interval.
    pub fn len(&self) -> u64 {
        (self.hi - self.lo) as u64 + 1
    }

    pub fn is_singleton(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: i64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &IntInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

impl std::fmt::Display for IntInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{{}..{}}}", self.lo, self.hi)
    }
}

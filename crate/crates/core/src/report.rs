//! Run reports shared by the step-function counters.

use std::time::Duration;

use num_rational::BigRational;
use num_traits::One;

use crate::incpoints::IncIndex;
use crate::stepfunc::{ApproxRatio, ApproxSet, BigCount, StepFunction};

/// What one compression stage kept.
#[derive(Debug, Clone)]
pub struct Stage {
    /// Approximation set in the original domain.
    pub set: ApproxSet,
    /// The stage's approximate function, induced by `set`.
    pub induced: StepFunction,
    /// Candidate change points, for the rank-space variants.
    pub inc: Option<IncIndex>,
    /// Approximation set in rank space, for the rank-space variants.
    pub rank_set: Option<ApproxSet>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub count: BigCount,
    pub epsilon: BigRational,
    pub ratio: ApproxRatio,
    /// Evaluations of the stage functions handed to the set builder.
    pub oracle_calls: u64,
    pub per_stage_set_sizes: Vec<usize>,
    pub elapsed: Duration,
    pub stages: Vec<Stage>,
}

impl RunReport {
    /// The running-time analysis assumes `epsilon < 1`; larger values still
    /// give a valid sandwich.
    pub fn outside_proven_range(&self) -> bool {
        self.epsilon >= BigRational::one()
    }
}

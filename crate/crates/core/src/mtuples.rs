//! Approximate counting of m-tuples whose sum reaches a bound.
//!
//! `z_i(j)` counts choices from the first `i` sets with sum at least `j`. It
//! is nonincreasing in `j` and satisfies
//! `z_i(j) = sum_{x in X_i} z_{i-1}(j - x)`, with `z_{i-1}` equal to the
//! number of all partial tuples for negative arguments. Both counters keep
//! a compressed copy of each `z_i` and compose the next stage from it.

use std::time::Instant;

use num_rational::BigRational;

use crate::error::Result;
use crate::incpoints::{convert, IncIndex};
use crate::oracles::MTuplesInstance;
use crate::report::{RunReport, Stage};
use crate::stepfunc::{
    apx_set_nonincreasing, induce, shifted_sum, ApproxRatio, BigCount, Direction, FnOracle,
    IntInterval, StepFunction,
};

pub type MTuplesRunReport = RunReport;

fn first_stage_oracle(set: &[i64], dom: IntInterval) -> FnOracle<'static> {
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    FnOracle::new(dom, Direction::Nonincreasing, move |j| {
        BigCount::from(sorted.len() - sorted.partition_point(|&x| x < j))
    })
}

/// Compresses every stage directly on `{0..B}`; cost grows with `log B`.
pub fn fptas_mtuples(inst: &MTuplesInstance, epsilon: &BigRational) -> Result<MTuplesRunReport> {
    run(inst, epsilon, false)
}

/// Compresses every stage in rank space over the points where the stage can
/// change; cost is independent of the magnitudes of the numbers.
pub fn strong_fptas_mtuples(
    inst: &MTuplesInstance,
    epsilon: &BigRational,
) -> Result<MTuplesRunReport> {
    run(inst, epsilon, true)
}

fn run(inst: &MTuplesInstance, epsilon: &BigRational, rank_space: bool) -> Result<RunReport> {
    let start = Instant::now();
    let ratio = ApproxRatio::new(epsilon, inst.m() as u32)?;
    let dom = IntInterval::new(0, inst.bound())?;
    let sets = inst.sets();
    let mut calls = 0;
    let mut stages: Vec<Stage> = Vec::with_capacity(sets.len());
    let mut tuples = BigCount::from(sets[0].len());

    let z1 = first_stage_oracle(&sets[0], dom);
    let first = if rank_space {
        let shifted = sets[0].iter().map(|&x| x + 1);
        compress_ranked(&z1, IncIndex::collect(shifted, dom), &ratio, &tuples)?
    } else {
        compress_direct(&z1, &ratio, &tuples)?
    };
    calls += z1.calls();
    stages.push(first);

    for set in &sets[1..] {
        tuples *= set.len();
        let prev = stages.last().expect("nonempty");
        let terms = set.iter().map(|&x| (&prev.induced, x)).collect();
        let zbar = shifted_sum(terms, dom)?;
        let stage = if rank_space {
            let shifted = set
                .iter()
                .flat_map(|&x| prev.set.points().iter().map(move |&w| w + x));
            compress_ranked(&zbar, IncIndex::collect(shifted, dom), &ratio, &tuples)?
        } else {
            compress_direct(&zbar, &ratio, &tuples)?
        };
        calls += zbar.calls();
        drop(zbar);
        stages.push(stage);
    }

    let last = &stages.last().expect("nonempty").induced;
    Ok(RunReport {
        count: last.query(inst.bound()).clone(),
        epsilon: epsilon.clone(),
        ratio,
        oracle_calls: calls,
        per_stage_set_sizes: stages.iter().map(|s| s.set.len()).collect(),
        elapsed: start.elapsed(),
        stages,
    })
}

fn finish(induced: StepFunction, below: &BigCount) -> StepFunction {
    induced.with_below(below.clone())
}

fn compress_direct(phi: &FnOracle<'_>, ratio: &ApproxRatio, below: &BigCount) -> Result<Stage> {
    let set = apx_set_nonincreasing(phi, phi.domain(), ratio)?;
    let induced = finish(induce(phi, &set)?, below);
    Ok(Stage {
        set,
        induced,
        inc: None,
        rank_set: None,
    })
}

fn compress_ranked(
    phi: &FnOracle<'_>,
    inc: IncIndex,
    ratio: &ApproxRatio,
    below: &BigCount,
) -> Result<Stage> {
    let conv = convert(phi, &inc, ratio)?;
    Ok(Stage {
        set: conv.set,
        induced: finish(conv.induced, below),
        inc: Some(inc),
        rank_set: Some(conv.rank_set),
    })
}

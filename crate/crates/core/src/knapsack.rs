//! Approximate counting of 0/1 knapsack solutions.
//!
//! `s_i(j)` counts subsets of the first `i` items of weight at most `j`; it
//! is nondecreasing and satisfies `s_i(j) = s_{i-1}(j) + s_{i-1}(j - w_i)`
//! with `s_{i-1}` zero on negative arguments.

use std::time::Instant;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::incpoints::{convert, IncIndex};
use crate::oracles::KnapsackInstance;
use crate::report::{RunReport, Stage};
use crate::stepfunc::{
    apx_set_nondecreasing, induce, shifted_sum, ApproxRatio, ApproxSet, BigCount, Direction,
    IntInterval, StepFunction,
};

pub type KnapsackRunReport = RunReport;

/// Compresses in rank space over the points where a stage can increase;
/// cost is independent of the magnitudes of the weights and capacity.
pub fn strong_fptas_knapsack(
    inst: &KnapsackInstance,
    epsilon: &BigRational,
) -> Result<KnapsackRunReport> {
    run(inst, epsilon, true)
}

/// Compresses every stage directly on `{0..C}`; cost grows with `log C`.
pub fn fptas_knapsack(inst: &KnapsackInstance, epsilon: &BigRational) -> Result<KnapsackRunReport> {
    run(inst, epsilon, false)
}

fn run(inst: &KnapsackInstance, epsilon: &BigRational, rank_space: bool) -> Result<RunReport> {
    let start = Instant::now();
    let ratio = ApproxRatio::new(epsilon, inst.n() as u32)?;
    let dom = IntInterval::new(0, inst.capacity())?;
    let mut calls = 0;

    let empty_only = StepFunction::constant(dom, Direction::Nondecreasing, BigCount::one())
        .with_below(BigCount::zero());
    let mut prev_set = ApproxSet::new(
        if dom.is_singleton() {
            vec![0]
        } else {
            vec![0, dom.hi()]
        },
        dom,
    )?;
    let mut prev = empty_only;
    let mut stages = Vec::with_capacity(inst.n());

    for &w in inst.weights() {
        let sbar = shifted_sum(vec![(&prev, 0), (&prev, w)], dom)?;
        let stage = if rank_space {
            // The shifted copy jumps from 0 at `w`, and each copy can only
            // increase just after one of its breakpoints.
            let points = prev_set.points();
            let candidates = points
                .iter()
                .map(|&x| x + 1)
                .chain(points.iter().map(|&x| x + w + 1))
                .chain([w]);
            let inc = IncIndex::collect(candidates, dom);
            let conv = convert(&sbar, &inc, &ratio)?;
            Stage {
                set: conv.set,
                induced: conv.induced.with_below(BigCount::zero()),
                inc: Some(inc),
                rank_set: Some(conv.rank_set),
            }
        } else {
            let set = apx_set_nondecreasing(&sbar, dom, &ratio)?;
            let induced = induce(&sbar, &set)?.with_below(BigCount::zero());
            Stage {
                set,
                induced,
                inc: None,
                rank_set: None,
            }
        };
        calls += sbar.calls();
        drop(sbar);
        prev = stage.induced.clone();
        prev_set = stage.set.clone();
        stages.push(stage);
    }

    Ok(RunReport {
        count: prev.query(inst.capacity()).clone(),
        epsilon: epsilon.clone(),
        ratio,
        oracle_calls: calls,
        per_stage_set_sizes: stages.iter().map(|s| s.set.len()).collect(),
        elapsed: start.elapsed(),
        stages,
    })
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::oracles::{dp_knapsack, knapsack_table};
    use crate::stepfunc::within_factor;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn inst(w: Vec<i64>, c: i64) -> KnapsackInstance {
        KnapsackInstance::new(w, c).unwrap()
    }

    #[test]
    fn small_instance_both_variants() {
        for f in [strong_fptas_knapsack, fptas_knapsack] {
            let r = f(&inst(vec![1, 2, 3], 3), &q(1, 2)).unwrap();
            assert!(r.count >= BigCount::from(5u32) && r.count <= BigCount::from(7u32));
            assert_eq!(r.per_stage_set_sizes.len(), 3);
        }
    }

    #[test]
    fn single_heavy_item() {
        for f in [strong_fptas_knapsack, fptas_knapsack] {
            assert_eq!(
                f(&inst(vec![5], 4), &q(1, 10)).unwrap().count,
                BigCount::one()
            );
        }
    }

    #[test]
    fn everything_fits() {
        let k = inst(vec![3, 1, 4, 1, 5], 14);
        for f in [strong_fptas_knapsack, fptas_knapsack] {
            assert_eq!(f(&k, &q(1, 10)).unwrap().count, BigCount::from(32u32));
        }
    }

    #[test]
    fn shifted_copy_jump_is_indexed() {
        // One item lighter than the capacity: the count jumps at the weight.
        let r = strong_fptas_knapsack(&inst(vec![3], 10), &q(1, 10)).unwrap();
        let f = &r.stages[0].induced;
        assert_eq!(f.query(2), &BigCount::one());
        assert_eq!(f.query(3), &BigCount::from(2u32));
    }

    #[test]
    fn scaling_leaves_strong_cost_flat() {
        let base = inst(vec![3, 5, 7], 10);
        let big = base.scaled(1_000_000).unwrap();
        let a = strong_fptas_knapsack(&base, &q(1, 4)).unwrap();
        let b = strong_fptas_knapsack(&big, &q(1, 4)).unwrap();
        assert_eq!(a.count, b.count);
        assert!(b.oracle_calls < 2 * a.oracle_calls && a.oracle_calls < 2 * b.oracle_calls);
        let c = fptas_knapsack(&base, &q(1, 4)).unwrap();
        let d = fptas_knapsack(&big, &q(1, 4)).unwrap();
        assert!(d.oracle_calls > c.oracle_calls);
    }

    #[test]
    fn zero_capacity() {
        let r = strong_fptas_knapsack(&inst(vec![2, 2], 0), &q(1, 2)).unwrap();
        assert_eq!(r.count, BigCount::one());
    }

    fn instance() -> impl Strategy<Value = KnapsackInstance> {
        (prop::collection::vec(1i64..50, 1..10), 0i64..300)
            .prop_map(|(w, c)| KnapsackInstance::new(w, c).unwrap())
    }

    fn eps() -> impl Strategy<Value = BigRational> {
        prop::sample::select(vec![q(1, 10), q(1, 2), q(1, 1)])
    }

    proptest! {
        #[test]
        fn loop_invariants_hold(k in instance(), eps in eps(), strong in any::<bool>()) {
            let r = if strong {
                strong_fptas_knapsack(&k, &eps).unwrap()
            } else {
                fptas_knapsack(&k, &eps).unwrap()
            };
            let exact = knapsack_table(&k).unwrap();
            let kk = r.ratio.k().clone();
            let mut bound = BigRational::one();
            let mut prev: Option<&StepFunction> = None;
            for (i, stage) in r.stages.iter().enumerate() {
                bound *= &kk;
                let slack = &bound - BigRational::one();
                let w = k.weights()[i];
                // Uncompressed stage function, rebuilt densely.
                let sbar: Vec<BigCount> = (0..=k.capacity())
                    .map(|j| match prev {
                        None => BigCount::from(1u8) + BigCount::from(u8::from(j >= w)),
                        Some(f) => f.query(j) + f.query(j - w),
                    })
                    .collect();
                for j in 0..=k.capacity() {
                    let approx = stage.induced.query(j);
                    let ju = j as usize;
                    prop_assert!(within_factor(&exact[i + 1][ju], approx, &slack));
                    prop_assert!(r.ratio.bounds(&sbar[ju], approx) && approx >= &sbar[ju]);
                    if j > 0 && sbar[ju] != sbar[ju - 1] {
                        if let Some(inc) = &stage.inc {
                            prop_assert!(inc.points().binary_search(&j).is_ok(), "stage {} misses {}", i, j);
                        }
                    }
                    if j > 0 && approx != stage.induced.query(j - 1) {
                        prop_assert!(stage.set.contains(j - 1), "increase at {} not after a breakpoint", j);
                    }
                }
                prev = Some(&stage.induced);
            }
            let exact_count = dp_knapsack(&k).unwrap();
            prop_assert!(within_factor(&exact_count, &r.count, &eps));
        }
    }
}

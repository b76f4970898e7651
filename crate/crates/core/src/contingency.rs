//! Approximate counting of two-row contingency tables.
//!
//! With `R` the smaller row sum, the count is `A_n(R)` where `A_i(j)` counts
//! ways to put `j` items into cells `1..i` with cell `k` holding at most
//! `s_k`. Every function in the bit-decomposed recursion has the form
//! `j -> sum_{k <= cap} A_{i-1}(j - k)`, which is symmetric around half of
//! `B_{i-1} + cap` and nondecreasing up to that midpoint. Each one is
//! therefore stored by its lower half only and read back by reflection.
//!
//! Per cell `i >= 2` the counter builds, all by additions of shifted copies:
//!
//! * `Z_l = Z_{l-1} + Z_{l-1}(. - 2^{l-1})` with `Z_0 = A_{i-1}`, the cell
//!   capped at `2^l - 1`;
//! * for each set bit `l` of `s_i`, lowest first,
//!   `Y_l = Z_{l-1} + Y_prev(. - 2^{l-1})` with `Y` below the lowest bit
//!   equal to `A_{i-1}`, the cell capped at `s_i mod 2^l`;
//!
//! and `A_i` is `Y` at the top bit.

use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::incpoints::{convert, IncIndex};
use crate::oracles::{level_of, Contingency2Instance};
use crate::stepfunc::{
    apx_set_nondecreasing, induce, ApproxRatio, BigCount, Direction, FnOracle, IntInterval,
    StepFunction,
};

/// A function on the integers that is zero outside `{0..pivot}`, symmetric
/// around `pivot / 2` and nondecreasing up to it; stored by its lower half.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricUnimodal {
    half: StepFunction,
    pivot: i64,
    zero: BigCount,
}

impl SymmetricUnimodal {
    /// `half` must be nondecreasing on `{0..floor(pivot/2)}`.
    pub fn new(half: StepFunction, pivot: i64) -> Result<Self> {
        if pivot < 0 {
            return Err(Error::invalid("reflection pivot must be nonnegative"));
        }
        let want = IntInterval::new(0, pivot / 2)?;
        if half.domain() != want || half.direction() != Direction::Nondecreasing {
            return Err(Error::invalid(format!(
                "half must be nondecreasing on {want} for pivot {pivot}"
            )));
        }
        Ok(SymmetricUnimodal {
            half,
            pivot,
            zero: BigCount::zero(),
        })
    }

    /// The constant `value` on `{0..pivot}`.
    pub fn flat(pivot: i64, value: BigCount) -> Result<Self> {
        let dom = IntInterval::new(0, pivot / 2)?;
        Self::new(
            StepFunction::constant(dom, Direction::Nondecreasing, value),
            pivot,
        )
    }

    pub fn query(&self, j: i64) -> &BigCount {
        if j < 0 || j > self.pivot {
            &self.zero
        } else if j <= self.pivot / 2 {
            self.half.query(j)
        } else {
            self.half.query(self.pivot - j)
        }
    }

    pub fn pivot(&self) -> i64 {
        self.pivot
    }

    pub fn half(&self) -> &StepFunction {
        &self.half
    }

    /// Number of stored breakpoints.
    pub fn pieces(&self) -> usize {
        self.half.len()
    }

    /// Points `x` where the value may differ from the value at `x - 1`.
    pub fn change_points(&self) -> impl Iterator<Item = i64> + '_ {
        let hi = self.pivot / 2;
        let rising = self
            .half
            .points()
            .iter()
            .map(|&w| w + 1)
            .filter(move |&x| x <= hi);
        let falling = self.half.points().iter().map(move |&w| self.pivot - w);
        std::iter::once(0)
            .chain(rising)
            .chain(falling)
            .chain([self.pivot + 1])
    }
}

/// Compresses `phi` on `{0..floor(pivot/2)}`, where it must be
/// nondecreasing, and reflects it around `pivot / 2`.
pub fn compress_contingency(
    phi: &FnOracle<'_>,
    k: &ApproxRatio,
    pivot: i64,
) -> Result<SymmetricUnimodal> {
    let dom = IntInterval::new(0, pivot.max(0) / 2)?;
    let set = apx_set_nondecreasing(phi, dom, k).map_err(|e| match e {
        Error::MonotonicityViolation { at, against } => Error::invalid(format!(
            "function is not nondecreasing on the lower half: values at {at} and {against}"
        )),
        other => other,
    })?;
    SymmetricUnimodal::new(induce(phi, &set)?, pivot)
}

/// One compressed intermediate function.
#[derive(Debug, Clone)]
pub struct CompressedFn {
    /// Column index, 1-based.
    pub cell: usize,
    /// Largest number of items the function lets cell `cell` hold.
    pub cap: i64,
    pub function: SymmetricUnimodal,
    /// Largest value of the uncompressed sum on the lower half.
    pub peak: BigCount,
}

#[derive(Debug, Clone)]
pub struct ContingencyRunReport {
    pub count: BigCount,
    pub epsilon: BigRational,
    /// `None` when no compression was needed.
    pub ratio: Option<ApproxRatio>,
    pub compressed_function_count: usize,
    /// Evaluations of the uncompressed sums.
    pub oracle_calls: u64,
    pub set_sizes: Vec<usize>,
    pub elapsed: Duration,
    pub functions: Vec<CompressedFn>,
}

impl ContingencyRunReport {
    pub fn outside_proven_range(&self) -> bool {
        self.epsilon >= BigRational::one()
    }
}

/// Number of compressions along the longest dependency chain: each cell
/// after the first adds its bit length.
pub fn chain_depth(inst: &Contingency2Instance) -> u32 {
    inst.col_sums()[1..]
        .iter()
        .map(|&s| level_of(s as u64))
        .sum()
}

pub fn fptas_contingency2(
    inst: &Contingency2Instance,
    epsilon: &BigRational,
) -> Result<ContingencyRunReport> {
    let start = Instant::now();
    if epsilon <= &BigRational::zero() {
        return Err(Error::invalid(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let target = inst.reduced_target();
    let depth = chain_depth(inst);
    let mut run = Run {
        ratio: None,
        calls: 0,
        functions: Vec::new(),
    };
    let cols = inst.col_sums();
    let count = if target == 0 {
        BigCount::one()
    } else {
        if depth > 0 {
            run.ratio = Some(ApproxRatio::new(epsilon, depth)?);
        }
        let mut acc = SymmetricUnimodal::flat(cols[0], BigCount::one())?;
        let mut base = cols[0];
        for (idx, &s) in cols.iter().enumerate().skip(1) {
            acc = run.cell(idx + 1, &acc, base, s)?;
            base += s;
        }
        acc.query(target).clone()
    };
    Ok(ContingencyRunReport {
        count,
        epsilon: epsilon.clone(),
        ratio: run.ratio,
        compressed_function_count: run.functions.len(),
        oracle_calls: run.calls,
        set_sizes: run.functions.iter().map(|f| f.function.pieces()).collect(),
        elapsed: start.elapsed(),
        functions: run.functions,
    })
}

struct Run {
    ratio: Option<ApproxRatio>,
    calls: u64,
    functions: Vec<CompressedFn>,
}

impl Run {
    /// Approximate `A_i` from approximate `A_{i-1}` (`prev`, spread over
    /// `base` items).
    fn cell(
        &mut self,
        cell: usize,
        prev: &SymmetricUnimodal,
        base: i64,
        s: i64,
    ) -> Result<SymmetricUnimodal> {
        let top = level_of(s as u64);
        // `capped[l]` caps the cell at 2^l - 1.
        let mut capped: Vec<SymmetricUnimodal> = vec![prev.clone()];
        for l in 1..top {
            let half = 1i64 << (l - 1);
            let below = &capped[l as usize - 1];
            let next = self.compress(cell, &[(below, 0), (below, half)], base, (1 << l) - 1)?;
            capped.push(next);
        }
        let mut bound = prev.clone();
        for l in (1..=top).filter(|l| s >> (l - 1) & 1 == 1) {
            let half = 1i64 << (l - 1);
            let cap = s & ((1i64 << l) - 1);
            let low = &capped[l as usize - 1];
            bound = self.compress(cell, &[(low, 0), (&bound, half)], base, cap)?;
        }
        Ok(bound)
    }

    fn compress(
        &mut self,
        cell: usize,
        terms: &[(&SymmetricUnimodal, i64)],
        base: i64,
        cap: i64,
    ) -> Result<SymmetricUnimodal> {
        let ratio = self.ratio.as_ref().expect("compression implies a ratio");
        let (function, peak) = compress_sum(terms, base + cap, ratio, &mut self.calls)?;
        self.functions.push(CompressedFn {
            cell,
            cap,
            function: function.clone(),
            peak,
        });
        Ok(function)
    }
}

/// Compresses `j -> sum f(j - shift)` on its lower half and reflects.
///
/// The sum is evaluated only where some term can change, so it is handled
/// as an explicit piecewise-constant function. Its running maximum is
/// compressed rather than the sum itself: the exact function is
/// nondecreasing on the lower half and bounded by the sum, so the running
/// maximum stays between the exact function and the sum's bound while being
/// monotone even where the approximate terms do not add up monotonically.
fn compress_sum(
    terms: &[(&SymmetricUnimodal, i64)],
    pivot: i64,
    ratio: &ApproxRatio,
    calls: &mut u64,
) -> Result<(SymmetricUnimodal, BigCount)> {
    let dom = IntInterval::new(0, pivot / 2)?;
    let mut points: Vec<i64> = terms
        .iter()
        .flat_map(|(f, shift)| f.change_points().map(move |c| c + shift))
        .filter(|&c| dom.contains(c))
        .chain([0])
        .collect();
    points.sort_unstable();
    points.dedup();

    let mut running = BigCount::zero();
    let mut envelope = Vec::with_capacity(points.len());
    for &c in &points {
        let v: BigCount = terms.iter().map(|(f, shift)| f.query(c - shift)).sum();
        *calls += 1;
        if v > running {
            running = v;
        }
        envelope.push(running.clone());
    }
    let peak = running;
    let pieces = &points;
    let values = &envelope;
    let env = FnOracle::new(dom, Direction::Nondecreasing, move |x| {
        values[pieces.partition_point(|&p| p <= x) - 1].clone()
    });
    let inc = IncIndex::collect(points.iter().copied(), dom);
    let conv = convert(&env, &inc, ratio)?;
    Ok((SymmetricUnimodal::new(conv.induced, pivot)?, peak))
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::oracles::{contingency_table, dp_contingency_sum};
    use crate::stepfunc::within_factor;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn inst(r: [i64; 2], s: Vec<i64>) -> Contingency2Instance {
        Contingency2Instance::new(r, s).unwrap()
    }

    #[test]
    fn reflection_and_zero_tail() {
        let t: Vec<BigCount> = [1u32, 2, 1].map(BigCount::from).to_vec();
        let phi = FnOracle::from_values(0, Direction::Nondecreasing, &t).unwrap();
        let k = ApproxRatio::from_k(q(3, 2)).unwrap();
        let f = compress_contingency(&phi, &k, 2).unwrap();
        assert_eq!(f.query(0), &BigCount::one());
        assert_eq!(f.query(2), &BigCount::one());
        assert_eq!(f.query(1), &BigCount::from(2u32));
        assert_eq!(f.query(7), &BigCount::zero());
        assert_eq!(f.query(-1), &BigCount::zero());
    }

    #[test]
    fn even_pivot_midpoint_reads_half_top() {
        let t: Vec<BigCount> = [1u32, 3, 6, 7].map(BigCount::from).to_vec();
        let phi = FnOracle::from_values(0, Direction::Nondecreasing, &t).unwrap();
        let k = ApproxRatio::from_k(q(2, 1)).unwrap();
        let f = compress_contingency(&phi, &k, 6).unwrap();
        assert_eq!(f.query(3), &BigCount::from(7u32));
        assert_eq!(f.query(4), f.query(2));
    }

    #[test]
    fn rejects_non_monotone_half() {
        let t: Vec<BigCount> = [5u32, 1, 1, 1, 1].map(BigCount::from).to_vec();
        let phi = FnOracle::from_values(0, Direction::Nondecreasing, &t).unwrap();
        let k = ApproxRatio::from_k(q(2, 1)).unwrap();
        assert!(matches!(
            compress_contingency(&phi, &k, 8),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn small_instances() {
        let r = fptas_contingency2(&inst([2, 2], vec![2, 1, 1]), &q(1, 2)).unwrap();
        assert!(r.count >= BigCount::from(4u32) && r.count <= BigCount::from(6u32));
        let r = fptas_contingency2(&inst([1, 1], vec![1, 1]), &q(1, 10)).unwrap();
        assert_eq!(r.count, BigCount::from(2u32));
        let r = fptas_contingency2(&inst([7, 0], vec![3, 4]), &q(1, 10)).unwrap();
        assert_eq!(r.count, BigCount::one());
        assert_eq!(r.compressed_function_count, 0);
        let r = fptas_contingency2(&inst([3, 4], vec![7]), &q(1, 10)).unwrap();
        assert_eq!(r.count, BigCount::one());
    }

    #[test]
    fn rejects_bad_epsilon() {
        assert!(fptas_contingency2(&inst([1, 1], vec![1, 1]), &q(0, 1)).is_err());
    }

    #[test]
    fn large_columns_stay_cheap() {
        let c = inst(
            [3_000_000_000, 3_000_000_001],
            vec![1_000_000_000, 2_000_000_000, 3_000_000_001],
        );
        let r = fptas_contingency2(&c, &q(1, 2)).unwrap();
        assert!(r.count > BigCount::zero());
        assert!(r.compressed_function_count <= 2 * 3 * 33);
    }

    fn instance() -> impl Strategy<Value = Contingency2Instance> {
        prop::collection::vec(1i64..12, 1..6)
            .prop_flat_map(|cols| {
                let total: i64 = cols.iter().sum();
                (Just(cols), 0..=total)
            })
            .prop_map(|(cols, r1)| {
                let total: i64 = cols.iter().sum();
                Contingency2Instance::new([r1, total - r1], cols).unwrap()
            })
    }

    proptest! {
        #[test]
        fn every_intermediate_sandwiches_its_exact_function(
            c in instance(),
            eps in prop::sample::select(vec![q(1, 10), q(1, 2), q(1, 1)]),
        ) {
            let r = fptas_contingency2(&c, &eps).unwrap();
            let exact = dp_contingency_sum(&c).unwrap();
            prop_assert!(within_factor(&exact, &r.count, &eps), "exact {} got {}", exact, r.count);
            let table = contingency_table(&c).unwrap();
            let slack = eps.clone();
            for f in &r.functions {
                let prev = &table[f.cell - 1];
                let p = f.function.pivot();
                for j in -2..=p + 2 {
                    let want: BigCount = (0..=f.cap)
                        .filter_map(|k| usize::try_from(j - k).ok().and_then(|x| prev.get(x)))
                        .sum();
                    let got = f.function.query(j);
                    prop_assert!(within_factor(&want, got, &slack), "cell {} cap {} j {}: {} vs {}", f.cell, f.cap, j, want, got);
                    prop_assert_eq!(got, f.function.query(p - j));
                }
            }
            let limit = 2 * c.n() * (1 + (c.max_col() as f64).log2().floor() as usize);
            prop_assert!(r.compressed_function_count <= limit);
        }
    }
}

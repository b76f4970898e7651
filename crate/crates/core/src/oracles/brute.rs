use super::{BigCount, Contingency2Instance, KnapsackInstance, Limits, MTuplesInstance};
use crate::error::Result;

/// Counts tuples with sum at least `B` by walking the full product.
pub fn brute_mtuples(inst: &MTuplesInstance) -> Result<BigCount> {
    Limits::default().brute_mtuples(inst)
}

/// Counts feasible subsets by walking all `2^n` of them.
pub fn brute_knapsack(inst: &KnapsackInstance) -> Result<BigCount> {
    Limits::default().brute_knapsack(inst)
}

/// Counts first rows `x` with `0 <= x_k <= s_k` and `sum x = R` by
/// depth-first enumeration.
pub fn brute_contingency(inst: &Contingency2Instance) -> Result<BigCount> {
    Limits::default().brute_contingency(inst)
}

impl Limits {
    pub fn brute_mtuples(&self, inst: &MTuplesInstance) -> Result<BigCount> {
        let size = inst
            .sets()
            .iter()
            .try_fold(1u128, |acc, s| acc.checked_mul(s.len() as u128))
            .unwrap_or(u128::MAX);
        self.check_enumeration("tuple enumeration", size)?;
        let sets = inst.sets();
        let mut idx = vec![0usize; sets.len()];
        let mut count = 0u64;
        loop {
            let sum: i64 = idx.iter().zip(sets).map(|(&k, s)| s[k]).sum();
            if sum >= inst.bound() {
                count += 1;
            }
            // Odometer increment over the index vector.
            let mut pos = 0;
            loop {
                if pos == sets.len() {
                    return Ok(BigCount::from(count));
                }
                idx[pos] += 1;
                if idx[pos] < sets[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    pub fn brute_knapsack(&self, inst: &KnapsackInstance) -> Result<BigCount> {
        let n = inst.n();
        let size = if n >= 127 { u128::MAX } else { 1u128 << n };
        self.check_enumeration("subset enumeration", size)?;
        let count = (0u64..size as u64)
            .filter(|mask| {
                let total: i64 = (0..n)
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| inst.weights()[b])
                    .sum();
                total <= inst.capacity()
            })
            .count();
        Ok(BigCount::from(count))
    }

    pub fn brute_contingency(&self, inst: &Contingency2Instance) -> Result<BigCount> {
        let target = inst.reduced_target();
        let size = inst
            .col_sums()
            .iter()
            .try_fold(1u128, |acc, &s| acc.checked_mul(s.min(target) as u128 + 1))
            .unwrap_or(u128::MAX);
        self.check_enumeration("table enumeration", size)?;
        fn walk(cols: &[i64], left: i64) -> u64 {
            match cols.split_first() {
                None => u64::from(left == 0),
                Some((&s, rest)) => (0..=s.min(left)).map(|x| walk(rest, left - x)).sum(),
            }
        }
        Ok(BigCount::from(walk(inst.col_sums(), target)))
    }
}

use num_traits::One;

use super::{BigCount, KnapsackInstance, Limits, MTuplesInstance};
use crate::error::Result;

/// Exact m-tuples count from the row-by-row DP.
pub fn dp_mtuples(inst: &MTuplesInstance) -> Result<BigCount> {
    Limits::default().dp_mtuples(inst)
}

/// Exact knapsack count from the item-by-item DP.
pub fn dp_knapsack(inst: &KnapsackInstance) -> Result<BigCount> {
    Limits::default().dp_knapsack(inst)
}

/// Rows `z_1..z_m` on `{0..B}`, where `z_i(j)` counts tuples over the first
/// `i` sets with sum at least `j`.
pub fn mtuples_table(inst: &MTuplesInstance) -> Result<Vec<Vec<BigCount>>> {
    Limits::default().mtuples_table(inst)
}

/// Rows `s_0..s_n` on `{0..C}`, where `s_i(j)` counts subsets of the first
/// `i` items with weight at most `j`.
pub fn knapsack_table(inst: &KnapsackInstance) -> Result<Vec<Vec<BigCount>>> {
    Limits::default().knapsack_table(inst)
}

impl Limits {
    pub fn dp_mtuples(&self, inst: &MTuplesInstance) -> Result<BigCount> {
        let table = self.mtuples_table(inst)?;
        Ok(table.last().expect("m >= 1")[inst.bound() as usize].clone())
    }

    pub fn dp_knapsack(&self, inst: &KnapsackInstance) -> Result<BigCount> {
        let table = self.knapsack_table(inst)?;
        Ok(table.last().expect("n >= 1")[inst.capacity() as usize].clone())
    }

    pub fn mtuples_table(&self, inst: &MTuplesInstance) -> Result<Vec<Vec<BigCount>>> {
        let width = inst.bound() as u128 + 1;
        let elements: u128 = inst.sets().iter().map(|s| s.len() as u128).sum();
        self.check_dp("m-tuples DP", width.saturating_mul(elements))?;
        let width = width as usize;
        let sets = inst.sets();
        let first: Vec<BigCount> = (0..width as i64)
            .map(|j| BigCount::from(sets[0].iter().filter(|&&x| x >= j).count()))
            .collect();
        let mut rows = vec![first];
        // Tuples over the first i sets; a negative threshold admits all of them.
        let mut all = BigCount::from(sets[0].len());
        for set in &sets[1..] {
            let prev = rows.last().expect("nonempty");
            let row = (0..width as i64)
                .map(|j| {
                    set.iter()
                        .map(|&x| {
                            if j - x < 0 {
                                &all
                            } else {
                                &prev[(j - x) as usize]
                            }
                        })
                        .sum()
                })
                .collect();
            rows.push(row);
            all *= set.len();
        }
        Ok(rows)
    }

    pub fn knapsack_table(&self, inst: &KnapsackInstance) -> Result<Vec<Vec<BigCount>>> {
        let width = inst.capacity() as u128 + 1;
        self.check_dp("knapsack DP", width.saturating_mul(inst.n() as u128))?;
        let width = width as usize;
        let mut rows = vec![vec![BigCount::one(); width]];
        for &w in inst.weights() {
            let prev = rows.last().expect("nonempty");
            let row = (0..width)
                .map(|j| {
                    let skip = &prev[j];
                    match j.checked_sub(w as usize) {
                        Some(rest) => skip + &prev[rest],
                        None => skip.clone(),
                    }
                })
                .collect();
            rows.push(row);
        }
        Ok(rows)
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::oracles::{brute_knapsack, brute_mtuples};

    fn nums(v: &[u32]) -> Vec<BigCount> {
        v.iter().map(|&x| BigCount::from(x)).collect()
    }

    #[test]
    fn worked_example_rows() {
        let inst = MTuplesInstance::new(vec![vec![1, 3, 7], vec![2, 5], vec![3, 9]], 17).unwrap();
        let t = mtuples_table(&inst).unwrap();
        assert_eq!(
            t[0],
            nums(&[3, 3, 2, 2, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0])
        );
        assert_eq!(
            t[1],
            nums(&[6, 6, 6, 6, 5, 5, 4, 3, 3, 2, 1, 1, 1, 0, 0, 0, 0, 0])
        );
        assert_eq!(
            t[2],
            nums(&[12, 12, 12, 12, 12, 12, 12, 11, 11, 10, 9, 9, 8, 6, 6, 5, 3, 3])
        );
        assert_eq!(dp_mtuples(&inst).unwrap(), BigCount::from(3u32));
    }

    #[test]
    fn knapsack_small_cases() {
        let k = |w: Vec<i64>, c| dp_knapsack(&KnapsackInstance::new(w, c).unwrap()).unwrap();
        assert_eq!(k(vec![1, 2, 3], 3), BigCount::from(5u32));
        assert_eq!(k(vec![1, 1], 1), BigCount::from(3u32));
        assert_eq!(k(vec![7, 8, 9], 0), BigCount::from(1u32));
    }

    #[test]
    fn dp_cap_is_enforced() {
        let k = KnapsackInstance::new(vec![1; 10], 1 << 40).unwrap();
        assert!(dp_knapsack(&k).is_err());
    }

    proptest! {
        #[test]
        fn mtuples_dp_matches_enumeration(
            sets in prop::collection::vec(prop::collection::vec(0i64..20, 1..5), 1..5),
            bound in 0i64..50,
        ) {
            let inst = MTuplesInstance::new(sets, bound).unwrap();
            let table = mtuples_table(&inst).unwrap();
            for row in &table {
                prop_assert!(row.windows(2).all(|w| w[0] >= w[1]));
            }
            prop_assert_eq!(dp_mtuples(&inst).unwrap(), brute_mtuples(&inst).unwrap());
        }

        #[test]
        fn knapsack_dp_matches_enumeration(
            weights in prop::collection::vec(1i64..30, 1..12),
            cap in 0i64..120,
        ) {
            let inst = KnapsackInstance::new(weights, cap).unwrap();
            let table = knapsack_table(&inst).unwrap();
            for row in &table {
                prop_assert!(row.windows(2).all(|w| w[0] <= w[1]));
            }
            prop_assert_eq!(dp_knapsack(&inst).unwrap(), brute_knapsack(&inst).unwrap());
        }
    }
}

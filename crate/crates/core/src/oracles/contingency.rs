use std::collections::HashMap;

use num_traits::{One, Zero};

use super::{level_of, msb, BigCount, Contingency2Instance, Level, Limits};
use crate::error::Result;

/// Two-row table count from the recurrence that reuses `A_i(j-1)` and
/// subtracts the overflow term.
pub fn dp_contingency_sub(inst: &Contingency2Instance) -> Result<BigCount> {
    Limits::default().dp_contingency_sub(inst)
}

/// Two-row table count from the window-sum recurrence
/// `A_i(j) = sum_{k <= min(j, s_i)} A_{i-1}(j - k)`.
pub fn dp_contingency_sum(inst: &Contingency2Instance) -> Result<BigCount> {
    Limits::default().dp_contingency_sum(inst)
}

/// Two-row table count from the bit-decomposed recurrence with binding
/// flags, memoised on `(column, level, flag, j)`.
pub fn dp_contingency_binding(inst: &Contingency2Instance) -> Result<BigCount> {
    Limits::default().dp_contingency_binding(inst)
}

/// Rows `A_0..A_n`, row `i` covering `{0..B_i}` where `B_i` is the sum of the
/// first `i` column sums.
pub fn contingency_table(inst: &Contingency2Instance) -> Result<Vec<Vec<BigCount>>> {
    Limits::default().contingency_table(inst)
}

impl Limits {
    pub fn dp_contingency_sub(&self, inst: &Contingency2Instance) -> Result<BigCount> {
        let target = inst.reduced_target();
        self.check_dp("contingency DP", (target as u128 + 1) * inst.n() as u128)?;
        let width = target as usize + 1;
        let mut prev: Vec<BigCount> = (0..width)
            .map(|j| BigCount::from(u8::from(j == 0)))
            .collect();
        for &s in inst.col_sums() {
            let s = s as usize;
            let mut row = Vec::with_capacity(width);
            row.push(BigCount::one());
            for j in 1..width {
                let mut v = &prev[j] + &row[j - 1];
                if j > s {
                    v -= &prev[j - 1 - s];
                }
                row.push(v);
            }
            prev = row;
        }
        Ok(prev.pop().expect("width >= 1"))
    }

    pub fn dp_contingency_sum(&self, inst: &Contingency2Instance) -> Result<BigCount> {
        let target = inst.reduced_target();
        let span = (inst.max_col().min(target) + 1) as u128;
        self.check_dp(
            "contingency DP",
            (target as u128 + 1) * inst.n() as u128 * span,
        )?;
        let rows = window_rows(inst.col_sums(), |_| target);
        Ok(rows.last().expect("n >= 1")[target as usize].clone())
    }

    pub fn contingency_table(&self, inst: &Contingency2Instance) -> Result<Vec<Vec<BigCount>>> {
        let work: u128 = (1..=inst.n())
            .map(|i| (inst.prefix(i) as u128 + 1) * (inst.col_sums()[i - 1] as u128 + 1))
            .sum();
        self.check_dp("contingency table", work)?;
        let prefixes: Vec<i64> = (0..=inst.n()).map(|i| inst.prefix(i)).collect();
        Ok(window_rows(inst.col_sums(), |i| prefixes[i]))
    }

    pub fn dp_contingency_binding(&self, inst: &Contingency2Instance) -> Result<BigCount> {
        let target = inst.reduced_target();
        let levels = level_of(inst.max_col() as u64) as u128;
        self.check_dp(
            "contingency DP",
            (target as u128 + 1) * inst.n() as u128 * levels * 2,
        )?;
        let mut dp = Binding {
            cols: inst.col_sums(),
            memo: HashMap::new(),
        };
        let n = inst.n();
        let top = Level::Bit(level_of(inst.col_sums()[n - 1] as u64));
        Ok(dp.z(n, top, true, target))
    }
}

/// Window-sum rows `A_0..A_n`; row `i` spans `{0..width(i)}`.
fn window_rows(cols: &[i64], width: impl Fn(usize) -> i64) -> Vec<Vec<BigCount>> {
    let mut rows = vec![(0..=width(0))
        .map(|j| BigCount::from(u8::from(j == 0)))
        .collect::<Vec<_>>()];
    for (i, &s) in cols.iter().enumerate() {
        let prev = rows.last().expect("nonempty");
        let row = (0..=width(i + 1))
            .map(|j| {
                (0..=j.min(s))
                    .filter_map(|k| prev.get((j - k) as usize))
                    .fold(BigCount::zero(), |acc, v| acc + v)
            })
            .collect();
        rows.push(row);
    }
    rows
}

/// `z(i, l, r, j)`: placements of `j` items into cells `1..i` where cell `i`
/// holds at most `2^l - 1` items (`r` false) or at most `s_i mod 2^l` items
/// (`r` true), and earlier cells respect their column sums.
struct Binding<'a> {
    cols: &'a [i64],
    memo: HashMap<(usize, Level, bool, i64), BigCount>,
}

impl Binding<'_> {
    fn cap(&self, i: usize, level: Level, binding: bool) -> i64 {
        match level {
            Level::NegInf => 0,
            Level::Bit(l) if binding => self.cols[i - 1] & ((1i64 << l) - 1),
            Level::Bit(l) => (1i64 << l) - 1,
        }
    }

    /// Unrestricted count over cells `1..i` with exactly `j` items.
    fn full(&mut self, i: usize, j: i64) -> BigCount {
        if j < 0 {
            return BigCount::zero();
        }
        if j == 0 {
            return BigCount::one();
        }
        if i == 0 {
            return BigCount::zero();
        }
        let s = self.cols[i - 1];
        let level = Level::Bit(level_of(j.min(s) as u64));
        self.z(i, level, s <= j, j)
    }

    fn z(&mut self, i: usize, level: Level, binding: bool, j: i64) -> BigCount {
        if j < 0 {
            return BigCount::zero();
        }
        if i == 1 {
            return BigCount::from(u8::from(j <= self.cap(1, level, binding)));
        }
        let key = (i, level, binding, j);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let v = match level {
            Level::NegInf => self.full(i - 1, j),
            Level::Bit(1) => self.full(i - 1, j) + self.full(i - 1, j - 1),
            Level::Bit(l) => {
                let half = 1i64 << (l - 1);
                let skip = self.z(i, Level::Bit(l - 1), false, j);
                let take = if binding {
                    let rest = msb(self.cols[i - 1] as u64, l - 1);
                    self.z(i, rest, true, j - half)
                } else {
                    self.z(i, Level::Bit(l - 1), false, j - half)
                };
                skip + take
            }
        };
        self.memo.insert(key, v.clone());
        v
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::oracles::brute_contingency;

    fn inst(r: [i64; 2], s: Vec<i64>) -> Contingency2Instance {
        Contingency2Instance::new(r, s).unwrap()
    }

    #[test]
    fn small_cases_all_formulations() {
        let cases = [
            ([1, 1], vec![1, 1], 2u32),
            ([2, 2], vec![2, 1, 1], 4),
            ([5, 0], vec![2, 3], 1),
        ];
        for (r, s, want) in cases {
            let c = inst(r, s);
            let want = BigCount::from(want);
            assert_eq!(dp_contingency_sub(&c).unwrap(), want);
            assert_eq!(dp_contingency_sum(&c).unwrap(), want);
            assert_eq!(dp_contingency_binding(&c).unwrap(), want);
        }
    }

    #[test]
    fn single_column_is_forced() {
        let c = inst([3, 4], vec![7]);
        assert_eq!(dp_contingency_sum(&c).unwrap(), BigCount::one());
        assert_eq!(dp_contingency_binding(&c).unwrap(), BigCount::one());
    }

    #[test]
    fn binding_handles_wide_columns() {
        // Columns with sparse and dense bit patterns.
        let c = inst([40, 43], vec![16, 15, 1, 31, 20]);
        let exact = dp_contingency_sum(&c).unwrap();
        assert_eq!(dp_contingency_binding(&c).unwrap(), exact);
        assert_eq!(dp_contingency_sub(&c).unwrap(), exact);
    }

    #[test]
    fn table_rows_span_prefix_sums() {
        let c = inst([2, 2], vec![2, 1, 1]);
        let t = contingency_table(&c).unwrap();
        let lens: Vec<usize> = t.iter().map(Vec::len).collect();
        assert_eq!(lens, vec![1, 3, 4, 5]);
        let last: Vec<u32> = vec![1, 3, 4, 3, 1];
        assert_eq!(
            t[3],
            last.into_iter().map(BigCount::from).collect::<Vec<_>>()
        );
    }

    fn instance() -> impl Strategy<Value = Contingency2Instance> {
        prop::collection::vec(1i64..9, 1..6)
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
        fn formulations_agree(c in instance()) {
            let sum = dp_contingency_sum(&c).unwrap();
            prop_assert_eq!(&dp_contingency_sub(&c).unwrap(), &sum);
            prop_assert_eq!(&dp_contingency_binding(&c).unwrap(), &sum);
            prop_assert_eq!(&brute_contingency(&c).unwrap(), &sum);
        }

        #[test]
        fn table_rows_are_symmetric_and_unimodal(c in instance()) {
            let t = contingency_table(&c).unwrap();
            for row in &t {
                let b = row.len() - 1;
                for j in 0..=b / 2 {
                    prop_assert_eq!(&row[j], &row[b - j]);
                }
                prop_assert!(row[..=b / 2].windows(2).all(|w| w[0] <= w[1]));
            }
        }
    }
}

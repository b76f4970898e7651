use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on sums of input numbers, keeping all domain arithmetic
/// comfortably inside `i64`.
pub const MAX_MAGNITUDE: i64 = 1 << 60;

/// Sets `X_1..X_m` of nonnegative integers and a bound `B`; counts the
/// tuples that pick one element per set with sum at least `B`.
///
/// Repeated values inside a set count as distinct elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MTuplesRepr")]
pub struct MTuplesInstance {
    sets: Vec<Vec<i64>>,
    bound: i64,
}

impl MTuplesInstance {
    pub fn new(sets: Vec<Vec<i64>>, bound: i64) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::invalid("m-tuples instance needs at least one set"));
        }
        if sets.iter().any(|s| s.is_empty()) {
            return Err(Error::invalid("every set must be nonempty"));
        }
        if sets.iter().flatten().any(|&x| x < 0) || bound < 0 {
            return Err(Error::invalid(
                "set elements and the bound must be nonnegative",
            ));
        }
        let reach = sets
            .iter()
            .map(|s| *s.iter().max().expect("nonempty") as i128)
            .sum::<i128>()
            + bound as i128;
        if reach > MAX_MAGNITUDE as i128 {
            return Err(Error::invalid("numbers too large (sum exceeds 2^60)"));
        }
        Ok(MTuplesInstance { sets, bound })
    }

    pub fn sets(&self) -> &[Vec<i64>] {
        &self.sets
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn m(&self) -> usize {
        self.sets.len()
    }

    /// Same sets with every element and the bound multiplied by `factor`.
    pub fn scaled(&self, factor: i64) -> Result<Self> {
        let mul = |x: i64| {
            x.checked_mul(factor)
                .ok_or_else(|| Error::invalid("scaled value overflows"))
        };
        let sets = self
            .sets
            .iter()
            .map(|s| s.iter().map(|&x| mul(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(sets, mul(self.bound)?)
    }
}

/// Positive item weights and a capacity; counts subsets of total weight at
/// most the capacity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "KnapsackRepr")]
pub struct KnapsackInstance {
    weights: Vec<i64>,
    capacity: i64,
}

impl KnapsackInstance {
    pub fn new(weights: Vec<i64>, capacity: i64) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::invalid("knapsack instance needs at least one item"));
        }
        if weights.iter().any(|&w| w < 1) {
            return Err(Error::invalid("weights must be positive"));
        }
        if capacity < 0 {
            return Err(Error::invalid("capacity must be nonnegative"));
        }
        let reach = weights.iter().map(|&w| w as i128).sum::<i128>() + capacity as i128;
        if reach > MAX_MAGNITUDE as i128 {
            return Err(Error::invalid("numbers too large (sum exceeds 2^60)"));
        }
        Ok(KnapsackInstance { weights, capacity })
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn capacity(&self) -> i64 {
        self.capacity
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn scaled(&self, factor: i64) -> Result<Self> {
        let mul = |x: i64| {
            x.checked_mul(factor)
                .ok_or_else(|| Error::invalid("scaled value overflows"))
        };
        let weights = self
            .weights
            .iter()
            .map(|&w| mul(w))
            .collect::<Result<Vec<_>>>()?;
        Self::new(weights, mul(self.capacity)?)
    }
}

/// Row and column sums of a two-row contingency table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ContingencyRepr")]
pub struct Contingency2Instance {
    row_sums: [i64; 2],
    col_sums: Vec<i64>,
}

impl Contingency2Instance {
    pub fn new(row_sums: [i64; 2], col_sums: Vec<i64>) -> Result<Self> {
        if col_sums.is_empty() {
            return Err(Error::invalid(
                "contingency instance needs at least one column",
            ));
        }
        if col_sums.iter().any(|&s| s < 1) {
            return Err(Error::invalid("column sums must be positive"));
        }
        if row_sums.iter().any(|&r| r < 0) {
            return Err(Error::invalid("row sums must be nonnegative"));
        }
        let total: i128 = col_sums.iter().map(|&s| s as i128).sum();
        if total > MAX_MAGNITUDE as i128 {
            return Err(Error::invalid("numbers too large (sum exceeds 2^60)"));
        }
        if row_sums[0] as i128 + row_sums[1] as i128 != total {
            return Err(Error::invalid(format!(
                "row sums {} + {} do not match column total {total}",
                row_sums[0], row_sums[1]
            )));
        }
        Ok(Contingency2Instance { row_sums, col_sums })
    }

    pub fn row_sums(&self) -> [i64; 2] {
        self.row_sums
    }

    pub fn col_sums(&self) -> &[i64] {
        &self.col_sums
    }

    pub fn n(&self) -> usize {
        self.col_sums.len()
    }

    pub fn total(&self) -> i64 {
        self.row_sums[0] + self.row_sums[1]
    }

    /// The smaller row sum; the count equals the number of ways to place this
    /// many items into the columns.
    pub fn reduced_target(&self) -> i64 {
        self.row_sums[0].min(self.row_sums[1])
    }

    /// Sum of the first `i` column sums.
    pub fn prefix(&self, i: usize) -> i64 {
        self.col_sums[..i].iter().sum()
    }

    pub fn max_col(&self) -> i64 {
        *self.col_sums.iter().max().expect("nonempty")
    }
}

/// Integer accepted either as a JSON number or as a decimal string.
#[derive(Deserialize)]
#[serde(untagged)]
enum IntLit {
    Num(i64),
    Str(String),
}

impl IntLit {
    fn value(self) -> Result<i64> {
        match self {
            IntLit::Num(v) => Ok(v),
            IntLit::Str(s) => s
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("not an integer: {s:?}"))),
        }
    }
}

fn values(v: Vec<IntLit>) -> Result<Vec<i64>> {
    v.into_iter().map(IntLit::value).collect()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MTuplesRepr {
    sets: Vec<Vec<IntLit>>,
    bound: IntLit,
}

impl TryFrom<MTuplesRepr> for MTuplesInstance {
    type Error = Error;

    fn try_from(r: MTuplesRepr) -> Result<Self> {
        let sets = r.sets.into_iter().map(values).collect::<Result<Vec<_>>>()?;
        MTuplesInstance::new(sets, r.bound.value()?)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KnapsackRepr {
    weights: Vec<IntLit>,
    capacity: IntLit,
}

impl TryFrom<KnapsackRepr> for KnapsackInstance {
    type Error = Error;

    fn try_from(r: KnapsackRepr) -> Result<Self> {
        KnapsackInstance::new(values(r.weights)?, r.capacity.value()?)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ContingencyRepr {
    row_sums: [IntLit; 2],
    col_sums: Vec<IntLit>,
}

impl TryFrom<ContingencyRepr> for Contingency2Instance {
    type Error = Error;

    fn try_from(r: ContingencyRepr) -> Result<Self> {
        let [a, b] = r.row_sums;
        Contingency2Instance::new([a.value()?, b.value()?], values(r.col_sums)?)
    }
}

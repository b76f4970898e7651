//! Rank-space compression for step functions with few change points.
//!
//! A monotone function that only changes value at the points of a small set
//! `Inc` can be approximated without touching the rest of its domain: index
//! the points of `Inc` by rank, approximate the rank-indexed function, then
//! map the chosen ranks back. The cost then depends on `|Inc|` and the range
//! of values, not on the width of the domain.

use crate::error::{Error, Result};
use crate::stepfunc::{
    apx_set, induce, ApproxRatio, ApproxSet, BigCount, Direction, FnOracle, IntInterval,
    StepFunction,
};

/// Sorted set of domain points containing both endpoints; the point of rank
/// `k` (1-based) is `points[k - 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncIndex {
    points: Vec<i64>,
    domain: IntInterval,
}

impl IncIndex {
    pub fn new(points: Vec<i64>, domain: IntInterval) -> Result<Self> {
        if points.first() != Some(&domain.lo()) || points.last() != Some(&domain.hi()) {
            return Err(Error::invalid(format!(
                "index set must contain the endpoints of {domain}"
            )));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("index set must be strictly increasing"));
        }
        Ok(IncIndex { points, domain })
    }

    /// Sorts, clips to `domain`, deduplicates and adds both endpoints.
    pub fn collect(points: impl IntoIterator<Item = i64>, domain: IntInterval) -> Self {
        let mut points: Vec<i64> = points
            .into_iter()
            .filter(|&x| domain.contains(x))
            .chain([domain.lo(), domain.hi()])
            .collect();
        points.sort_unstable();
        points.dedup();
        IncIndex { points, domain }
    }

    pub fn points(&self) -> &[i64] {
        &self.points
    }

    pub fn domain(&self) -> IntInterval {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Rank space `{1..|Inc|}`.
    pub fn rank_domain(&self) -> IntInterval {
        IntInterval::new(1, self.points.len() as i64).expect("nonempty")
    }

    /// Domain point of the given 1-based rank.
    pub fn point_of_rank(&self, rank: i64) -> Option<i64> {
        usize::try_from(rank - 1)
            .ok()
            .and_then(|k| self.points.get(k))
            .copied()
    }
}

/// Points where a densely tabulated function changes value, plus both
/// endpoints. `values[k]` is the value at `lo + k`.
pub fn change_points(lo: i64, values: &[BigCount]) -> Vec<i64> {
    let hi = lo + values.len() as i64 - 1;
    let mut out = vec![lo];
    out.extend(
        (1..values.len())
            .filter(|&k| values[k] != values[k - 1])
            .map(|k| lo + k as i64),
    );
    if *out.last().expect("nonempty") != hi {
        out.push(hi);
    }
    out
}

/// The rank-indexed function `k -> phi(Inc[k])` on `{1..|Inc|}`.
pub fn restrict<'a>(phi: &'a FnOracle<'a>, inc: &'a IncIndex) -> Result<FnOracle<'a>> {
    if !phi.domain().contains_interval(&inc.domain()) {
        return Err(Error::invalid(format!(
            "index domain {} is not inside oracle domain {}",
            inc.domain(),
            phi.domain()
        )));
    }
    Ok(FnOracle::new(
        inc.rank_domain(),
        phi.direction(),
        move |k| phi.eval(inc.points[(k - 1) as usize]),
    ))
}

/// Maps a set of ranks back to domain points.
pub fn dom_of(ranks: &ApproxSet, inc: &IncIndex) -> Result<Vec<i64>> {
    ranks
        .points()
        .iter()
        .map(|&k| {
            inc.point_of_rank(k)
                .ok_or_else(|| Error::invalid(format!("rank {k} outside 1..{}", inc.len())))
        })
        .collect()
}

/// Adds the predecessor of every point except the first, clipped to `dom`.
pub fn pad(points: &[i64], dom: IntInterval) -> Result<ApproxSet> {
    let Some((&first, rest)) = points.split_first() else {
        return Err(Error::invalid("cannot pad an empty set"));
    };
    let mut out = vec![first];
    for &x in rest {
        out.extend([x - 1, x].into_iter().filter(|&y| dom.contains(y)));
    }
    out.sort_unstable();
    out.dedup();
    ApproxSet::new(out, dom)
}

/// Result of approximating through rank space.
#[derive(Debug, Clone)]
pub struct Conversion {
    /// Approximation set in rank space.
    pub rank_set: ApproxSet,
    /// The corresponding set in the original domain.
    pub set: ApproxSet,
    /// `phi` induced by `set`.
    pub induced: StepFunction,
}

/// Approximates `phi`, assumed constant between consecutive points of `inc`
/// in the sense of its direction, using only evaluations at points of `inc`.
///
/// A nondecreasing function is read from the right, so a run between two
/// index points needs the point just before the next one; the set is padded
/// with predecessors. A nonincreasing function is read from the left and the
/// index points already start every run.
pub fn convert(phi: &FnOracle<'_>, inc: &IncIndex, k: &ApproxRatio) -> Result<Conversion> {
    let ranked = restrict(phi, inc)?;
    let rank_set = apx_set(&ranked, ranked.domain(), k)?;
    let points = dom_of(&rank_set, inc)?;
    let set = match phi.direction() {
        Direction::Nondecreasing => pad(&points, inc.domain())?,
        Direction::Nonincreasing => {
            let set = ApproxSet::new(points, inc.domain())?;
            if rank_set.carries_to_hi() {
                set.carrying_to_hi()
            } else {
                set
            }
        }
    };
    let induced = induce(phi, &set)?;
    Ok(Conversion {
        rank_set,
        set,
        induced,
    })
}

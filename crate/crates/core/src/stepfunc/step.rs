use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{ApproxSet, BigCount, Direction, FnOracle, IntInterval};
use crate::error::{Error, Result};

/// Monotone step function stored as breakpoints.
///
/// Inside the domain a nondecreasing function takes the value of the first
/// breakpoint at or after the query point, a nonincreasing one the value of
/// the last breakpoint at or before it. Queries below or above the domain
/// return the configured tail values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "StepRepr", into = "StepRepr")]
pub struct StepFunction {
    domain: IntInterval,
    direction: Direction,
    points: Vec<i64>,
    values: Vec<BigCount>,
    below: BigCount,
    above: BigCount,
}

impl StepFunction {
    /// Breakpoints must be strictly increasing, start at `domain.lo`, end at
    /// `domain.hi` and have values monotone in `direction`.
    pub fn new(
        domain: IntInterval,
        direction: Direction,
        breakpoints: Vec<(i64, BigCount)>,
    ) -> Result<Self> {
        let (points, values): (Vec<i64>, Vec<BigCount>) = breakpoints.into_iter().unzip();
        if points.first() != Some(&domain.lo()) || points.last() != Some(&domain.hi()) {
            return Err(Error::invalid(format!(
                "breakpoints must start at {} and end at {}",
                domain.lo(),
                domain.hi()
            )));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("breakpoints must be strictly increasing"));
        }
        for i in 1..values.len() {
            let ok = match direction {
                Direction::Nondecreasing => values[i - 1] <= values[i],
                Direction::Nonincreasing => values[i - 1] >= values[i],
            };
            if !ok {
                return Err(Error::MonotonicityViolation {
                    at: points[i],
                    against: points[i - 1],
                });
            }
        }
        let below = values[0].clone();
        let above = values[values.len() - 1].clone();
        Ok(StepFunction {
            domain,
            direction,
            points,
            values,
            below,
            above,
        })
    }

    pub fn constant(domain: IntInterval, direction: Direction, value: BigCount) -> Self {
        let mut bps = vec![(domain.lo(), value.clone())];
        if !domain.is_singleton() {
            bps.push((domain.hi(), value));
        }
        Self::new(domain, direction, bps).expect("constant is monotone")
    }

    pub fn with_below(mut self, value: BigCount) -> Self {
        self.below = value;
        self
    }

    pub fn with_above(mut self, value: BigCount) -> Self {
        self.above = value;
        self
    }

    pub fn query(&self, x: i64) -> &BigCount {
        if x < self.domain.lo() {
            return &self.below;
        }
        if x > self.domain.hi() {
            return &self.above;
        }
        let idx = match self.direction {
            Direction::Nondecreasing => self.points.partition_point(|&p| p < x),
            Direction::Nonincreasing => self.points.partition_point(|&p| p <= x) - 1,
        };
        &self.values[idx]
    }

    pub fn domain(&self) -> IntInterval {
        self.domain
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn points(&self) -> &[i64] {
        &self.points
    }

    pub fn values(&self) -> &[BigCount] {
        &self.values
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = (i64, &BigCount)> {
        self.points.iter().copied().zip(self.values.iter())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn below(&self) -> &BigCount {
        &self.below
    }

    pub fn above(&self) -> &BigCount {
        &self.above
    }

    pub fn max_value(&self) -> &BigCount {
        match self.direction {
            Direction::Nondecreasing => self.values.last(),
            Direction::Nonincreasing => self.values.first(),
        }
        .expect("nonempty")
    }
}

/// Evaluates `phi` on every point of `set` and wraps the result as a step
/// function. A sentinel `hi` repeats the previous value without being
/// evaluated. Tails default to the endpoint values.
pub fn induce(phi: &FnOracle<'_>, set: &ApproxSet) -> Result<StepFunction> {
    if !phi.domain().contains_interval(&set.domain()) {
        return Err(Error::invalid(format!(
            "set domain {} is not inside oracle domain {}",
            set.domain(),
            phi.domain()
        )));
    }
    let mut bps: Vec<(i64, BigCount)> = Vec::with_capacity(set.len());
    for &x in set.points() {
        let value = match bps.last() {
            Some((_, prev)) if set.carries_to_hi() && x == set.domain().hi() => prev.clone(),
            _ => phi.eval(x),
        };
        bps.push((x, value));
    }
    StepFunction::new(set.domain(), phi.direction(), bps)
}

#[derive(Serialize, Deserialize)]
struct StepRepr {
    domain: [i64; 2],
    direction: Direction,
    breakpoints: Vec<(i64, String)>,
    below: String,
    above: String,
}

impl From<StepFunction> for StepRepr {
    fn from(f: StepFunction) -> Self {
        StepRepr {
            domain: [f.domain.lo(), f.domain.hi()],
            direction: f.direction,
            breakpoints: f
                .points
                .iter()
                .zip(&f.values)
                .map(|(&x, v)| (x, v.to_string()))
                .collect(),
            below: f.below.to_string(),
            above: f.above.to_string(),
        }
    }
}

impl TryFrom<StepRepr> for StepFunction {
    type Error = Error;

    fn try_from(r: StepRepr) -> Result<Self> {
        let num =
            |s: &str| BigCount::from_str(s).map_err(|_| Error::invalid(format!("bad count {s:?}")));
        let domain = IntInterval::new(r.domain[0], r.domain[1])?;
        let bps = r
            .breakpoints
            .iter()
            .map(|(x, v)| Ok((*x, num(v)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(StepFunction::new(domain, r.direction, bps)?
            .with_below(num(&r.below)?)
            .with_above(num(&r.above)?))
    }
}

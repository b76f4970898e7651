use std::cell::Cell;
use std::fmt;

use super::{BigCount, Direction, IntInterval, StepFunction};
use crate::error::{Error, Result};

/// A monotone function exposed only through point evaluation.
///
/// Every evaluation is counted, which is the cost measure reported by the
/// counting algorithms.
pub struct FnOracle<'a> {
    domain: IntInterval,
    direction: Direction,
    eval: Box<dyn Fn(i64) -> BigCount + 'a>,
    calls: Cell<u64>,
}

impl<'a> FnOracle<'a> {
    pub fn new(
        domain: IntInterval,
        direction: Direction,
        eval: impl Fn(i64) -> BigCount + 'a,
    ) -> Self {
        FnOracle {
            domain,
            direction,
            eval: Box::new(eval),
            calls: Cell::new(0),
        }
    }

    /// Oracle backed by a dense table of values on `{lo..lo+len-1}`.
    pub fn from_values(lo: i64, direction: Direction, values: &'a [BigCount]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("empty value table"));
        }
        let domain = IntInterval::new(lo, lo + values.len() as i64 - 1)?;
        Ok(Self::new(domain, direction, move |x| {
            values[(x - lo) as usize].clone()
        }))
    }

    pub fn eval(&self, x: i64) -> BigCount {
        debug_assert!(self.domain.contains(x), "{x} outside {}", self.domain);
        self.calls.set(self.calls.get() + 1);
        (self.eval)(x)
    }

    pub fn calls(&self) -> u64 {
        self.calls.get()
    }

    pub fn domain(&self) -> IntInterval {
        self.domain
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }
}

impl fmt::Debug for FnOracle<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnOracle")
            .field("domain", &self.domain)
            .field("direction", &self.direction)
            .field("calls", &self.calls.get())
            .finish()
    }
}

/// `j -> sum_k f_k(j - shift_k)` over `domain`.
///
/// All terms must share a direction. Arguments that fall outside a term's
/// domain take that term's `below`/`above` value.
pub fn shifted_sum<'a>(
    terms: Vec<(&'a StepFunction, i64)>,
    domain: IntInterval,
) -> Result<FnOracle<'a>> {
    let Some(first) = terms.first() else {
        return Err(Error::invalid("shifted sum needs at least one term"));
    };
    let direction = first.0.direction();
    if terms.iter().any(|(f, _)| f.direction() != direction) {
        return Err(Error::invalid("shifted sum terms must share a direction"));
    }
    Ok(FnOracle::new(domain, direction, move |j| {
        terms.iter().map(|(f, shift)| f.query(j - shift)).sum()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u32) -> BigCount {
        BigCount::from(v)
    }

    #[test]
    fn counts_every_evaluation() {
        let d = IntInterval::new(0, 9).unwrap();
        let f = FnOracle::new(d, Direction::Nondecreasing, |x| big(x as u32));
        assert_eq!(f.calls(), 0);
        assert_eq!(f.eval(4), big(4));
        f.eval(5);
        assert_eq!(f.calls(), 2);
    }

    #[test]
    fn shifted_sum_uses_tail_values_outside_domain() {
        let d = IntInterval::new(0, 3).unwrap();
        let f = StepFunction::new(
            d,
            Direction::Nonincreasing,
            vec![(0, big(5)), (2, big(1)), (3, big(0))],
        )
        .unwrap()
        .with_below(big(9));
        let g = shifted_sum(vec![(&f, 0), (&f, 2)], IntInterval::new(0, 6).unwrap()).unwrap();
        // j=0: f(0)+f(-2) = 5+9; j=3: f(3)+f(1) = 0+5; j=6: 0+0.
        assert_eq!(g.eval(0), big(14));
        assert_eq!(g.eval(3), big(5));
        assert_eq!(g.eval(6), big(0));
    }

    #[test]
    fn shifted_sum_rejects_mixed_or_empty_terms() {
        let d = IntInterval::new(0, 1).unwrap();
        let up = StepFunction::constant(d, Direction::Nondecreasing, big(1));
        let down = StepFunction::constant(d, Direction::Nonincreasing, big(1));
        assert!(shifted_sum(vec![(&up, 0), (&down, 0)], d).is_err());
        assert!(shifted_sum(vec![], d).is_err());
    }
}

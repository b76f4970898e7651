use std::cmp::min;

use super::{ApproxRatio, Direction, FnOracle, IntInterval};
use crate::error::{Error, Result};

/// Sorted breakpoints covering a domain: the first point is `lo`, the last
/// is `hi`.
///
/// A set built for a nonincreasing function may close with `hi` as a
/// sentinel: the last band then runs through `hi`, and `hi` takes the value
/// of the point before it instead of its own.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxSet {
    points: Vec<i64>,
    domain: IntInterval,
    carries_to_hi: bool,
}

impl ApproxSet {
    pub fn new(points: Vec<i64>, domain: IntInterval) -> Result<Self> {
        if points.first() != Some(&domain.lo()) || points.last() != Some(&domain.hi()) {
            return Err(Error::invalid(format!(
                "set must start and end at the endpoints of {domain}"
            )));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("set points must be strictly increasing"));
        }
        Ok(ApproxSet {
            points,
            domain,
            carries_to_hi: false,
        })
    }

    /// Marks `hi` as a sentinel closing the previous band.
    pub fn carrying_to_hi(mut self) -> Self {
        self.carries_to_hi = self.points.len() >= 2;
        self
    }

    pub fn carries_to_hi(&self) -> bool {
        self.carries_to_hi
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

    pub fn contains(&self, x: i64) -> bool {
        self.points.binary_search(&x).is_ok()
    }
}

fn check_oracle(phi: &FnOracle<'_>, dom: IntInterval, want: Direction) -> Result<()> {
    if phi.direction() != want {
        return Err(Error::invalid(format!("expected a {want:?} oracle")));
    }
    if !phi.domain().contains_interval(&dom) {
        return Err(Error::invalid(format!(
            "{dom} is not inside oracle domain {}",
            phi.domain()
        )));
    }
    Ok(())
}

/// K-approximation set of a nondecreasing `phi` on `dom`.
///
/// Walks down from `hi`: from the current point `x` it jumps to the smallest
/// `y` with `K * phi(y) >= phi(x)`, or to `x - 1` if that is further left.
pub fn apx_set_nondecreasing(
    phi: &FnOracle<'_>,
    dom: IntInterval,
    k: &ApproxRatio,
) -> Result<ApproxSet> {
    check_oracle(phi, dom, Direction::Nondecreasing)?;
    let mut points = vec![dom.hi()];
    let mut x = dom.hi();
    let mut fx = phi.eval(x);
    while x > dom.lo() {
        let (mut lo, mut hi) = (dom.lo(), x);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            let fm = phi.eval(mid);
            if fm > fx {
                return Err(Error::MonotonicityViolation {
                    at: mid,
                    against: x,
                });
            }
            if k.bounds(&fm, &fx) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let next = min(x - 1, lo);
        let fnext = phi.eval(next);
        if fnext > fx {
            return Err(Error::MonotonicityViolation {
                at: next,
                against: x,
            });
        }
        points.push(next);
        x = next;
        fx = fnext;
    }
    points.reverse();
    Ok(ApproxSet {
        points,
        domain: dom,
        carries_to_hi: false,
    })
}

/// K-approximation set of a nonincreasing `phi` on `dom`.
///
/// Walks up from `lo`: from the current point `x` it finds the largest `y`
/// with `K * phi(y) >= phi(x)` and continues at `y + 1`, the first point
/// where the bound breaks. When the band of `x` reaches `hi`, `hi` is added
/// as a sentinel and the band keeps the value `phi(x)` through `hi`.
pub fn apx_set_nonincreasing(
    phi: &FnOracle<'_>,
    dom: IntInterval,
    k: &ApproxRatio,
) -> Result<ApproxSet> {
    check_oracle(phi, dom, Direction::Nonincreasing)?;
    let mut points = vec![dom.lo()];
    let mut carries_to_hi = false;
    let mut x = dom.lo();
    let mut fx = phi.eval(x);
    while x < dom.hi() {
        let (mut lo, mut hi) = (x, dom.hi());
        while lo < hi {
            let mid = lo + (hi - lo + 1) / 2;
            let fm = phi.eval(mid);
            if fm > fx {
                return Err(Error::MonotonicityViolation {
                    at: mid,
                    against: x,
                });
            }
            if k.bounds(&fm, &fx) {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        if lo == dom.hi() {
            points.push(lo);
            carries_to_hi = true;
            break;
        }
        let next = lo + 1;
        let fnext = phi.eval(next);
        if fnext > fx {
            return Err(Error::MonotonicityViolation {
                at: next,
                against: x,
            });
        }
        points.push(next);
        x = next;
        fx = fnext;
    }
    Ok(ApproxSet {
        points,
        domain: dom,
        carries_to_hi,
    })
}

/// Dispatches on the oracle's direction.
pub fn apx_set(phi: &FnOracle<'_>, dom: IntInterval, k: &ApproxRatio) -> Result<ApproxSet> {
    match phi.direction() {
        Direction::Nondecreasing => apx_set_nondecreasing(phi, dom, k),
        Direction::Nonincreasing => apx_set_nonincreasing(phi, dom, k),
    }
}

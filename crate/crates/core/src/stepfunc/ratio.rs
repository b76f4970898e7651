use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::BigCount;
use crate::error::{Error, Result};

/// Per-stage approximation factor `K = (1 + eps)^(1/stages)`, held as an
/// exact rational slightly below the real root.
///
/// The rational is the largest dyadic fraction with the chosen precision
/// whose `stages`-th power does not exceed `1 + eps`, so compounding over all
/// stages stays inside the overall budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxRatio {
    k: BigRational,
    k_num: BigUint,
    k_den: BigUint,
    epsilon: BigRational,
    stages: u32,
}

const MAX_PRECISION_BITS: u64 = 1 << 16;

impl ApproxRatio {
    pub fn new(epsilon: &BigRational, stages: u32) -> Result<Self> {
        if !epsilon.is_positive() {
            return Err(Error::invalid(format!(
                "epsilon must be positive, got {epsilon}"
            )));
        }
        if stages == 0 {
            return Err(Error::invalid("stage count must be at least 1"));
        }
        let target = BigRational::one() + epsilon;
        let t_num = target.numer().to_biguint().expect("positive");
        let t_den = target.denom().to_biguint().expect("positive");
        let mut bits: u64 = 64;
        loop {
            let one = BigUint::one() << bits;
            let root = floor_root(&t_num, &t_den, stages, bits);
            if root > one {
                let k = BigRational::new(BigInt::from(root), BigInt::from(one));
                return Ok(Self::from_parts(k, epsilon.clone(), stages));
            }
            bits *= 2;
            if bits > MAX_PRECISION_BITS {
                return Err(Error::invalid(format!(
                    "epsilon {epsilon} is too small to split across {stages} stages"
                )));
            }
        }
    }

    /// A single-stage ratio with the given `K > 1`.
    pub fn from_k(k: BigRational) -> Result<Self> {
        Self::from_k_stages(k, 1)
    }

    /// Uses `K` verbatim for each of `stages` stages; the overall epsilon is
    /// `K^stages - 1`.
    pub fn from_k_stages(k: BigRational, stages: u32) -> Result<Self> {
        if k <= BigRational::one() {
            return Err(Error::invalid(format!(
                "approximation factor must exceed 1, got {k}"
            )));
        }
        if stages == 0 {
            return Err(Error::invalid("stage count must be at least 1"));
        }
        let epsilon = num_traits::pow(k.clone(), stages as usize) - BigRational::one();
        Ok(Self::from_parts(k, epsilon, stages))
    }

    fn from_parts(k: BigRational, epsilon: BigRational, stages: u32) -> Self {
        let k_num = k.numer().to_biguint().expect("positive");
        let k_den = k.denom().to_biguint().expect("positive");
        ApproxRatio {
            k,
            k_num,
            k_den,
            epsilon,
            stages,
        }
    }

    pub fn k(&self) -> &BigRational {
        &self.k
    }

    pub fn epsilon(&self) -> &BigRational {
        &self.epsilon
    }

    pub fn stages(&self) -> u32 {
        self.stages
    }

    /// True when `value <= K * base`.
    pub fn bounds(&self, base: &BigCount, value: &BigCount) -> bool {
        &self.k_num * base >= &self.k_den * value
    }

    /// Natural log of `K`.
    pub fn ln_k(&self) -> f64 {
        ln_big(&self.k_num) - ln_big(&self.k_den)
    }

    /// `log_K(v)` for `v >= 1`.
    pub fn log_k(&self, v: &BigCount) -> f64 {
        ln_big(v) / self.ln_k()
    }
}

/// Largest `a` with `a^s * den <= num * 2^(bits*s)`.
fn floor_root(num: &BigUint, den: &BigUint, s: u32, bits: u64) -> BigUint {
    let rhs = num << (bits * s as u64);
    let fits = |a: &BigUint| num_traits::pow(a.clone(), s as usize) * den <= rhs;
    let mut lo = BigUint::one() << bits;
    debug_assert!(fits(&lo));
    // num/den < 2^(ceil bits) so the root is below 2^(bits + that).
    let extra = num.bits().saturating_sub(den.bits()) + 1;
    let mut hi = BigUint::one() << (bits + extra);
    while &lo + 1u32 < hi {
        let mid: BigUint = (&lo + &hi) >> 1;
        if fits(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

pub(crate) fn ln_big(v: &BigUint) -> f64 {
    if v.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    let top = (v >> shift).to_f64().expect("finite");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `approx / exact` as a float, for reporting.
pub fn ratio_to_f64(approx: &BigCount, exact: &BigCount) -> f64 {
    if exact.is_zero() {
        return if approx.is_zero() { 1.0 } else { f64::INFINITY };
    }
    (ln_big(approx) - ln_big(exact)).exp()
}

/// True when `exact <= approx <= (1 + eps) * exact`.
pub fn within_factor(exact: &BigCount, approx: &BigCount, epsilon: &BigRational) -> bool {
    if approx < exact {
        return false;
    }
    let one_plus = BigRational::one() + epsilon;
    let num = one_plus.numer().to_biguint().expect("positive");
    let den = one_plus.denom().to_biguint().expect("positive");
    approx * den <= exact * num
}

/// Parses `"3"`, `"0.25"`, `"1e-3"`, `"2.5E2"` or `"1/4"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let s = text.trim();
    let bad = || Error::invalid(format!("not a number: {text:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::invalid(format!("zero denominator in {text:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(BigInt::from_str(&digits).map_err(|_| bad())?);
    let scale = exp - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, scale.unsigned_abs() as usize);
    }
    Ok(if neg { -value } else { value })
}

//! Certified real numbers as rational intervals `[lo, hi]`.
//!
//! Integer powers are exact. A rational power `x^(p/q)` is exact when the
//! relevant `q`-th roots exist; otherwise it is bracketed by integer `q`-th
//! roots at `WORK_BITS` bits of relative precision.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{exact_root, round_down, round_up, to_sig_decimal};

pub const WORK_BITS: u64 = 360;
const TRIM_BITS: u64 = 400;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Real {
    lo: BigRational,
    hi: BigRational,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn pow2(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(BigInt::one() << e as u64)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-e) as u64)
    }
}

impl Real {
    pub fn exact(q: BigRational) -> Self {
        Real { lo: q.clone(), hi: q }
    }

    pub fn int(n: i64) -> Self {
        Real::exact(rat(n))
    }

    pub fn big(n: &BigInt) -> Self {
        Real::exact(BigRational::from_integer(n.clone()))
    }

    pub fn interval(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        Real { lo, hi }.trim()
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        self.is_exact().then_some(&self.lo)
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn to_f64(&self) -> f64 {
        ((&self.lo + &self.hi) / rat(2)).to_f64().unwrap_or(f64::NAN)
    }

    fn trim(self) -> Self {
        if self.is_exact() && self.lo.numer().bits() + self.lo.denom().bits() <= 4 * TRIM_BITS {
            return self;
        }
        Real { lo: round_down(&self.lo, TRIM_BITS), hi: round_up(&self.hi, TRIM_BITS) }
    }

    pub fn add(&self, o: &Real) -> Real {
        Real { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }.trim()
    }

    pub fn sub(&self, o: &Real) -> Real {
        Real { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }.trim()
    }

    pub fn neg(&self) -> Real {
        Real { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn mul(&self, o: &Real) -> Real {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Real { lo, hi }.trim()
    }

    pub fn recip(&self) -> Result<Real> {
        if !self.lo.is_positive() && !self.hi.is_negative() {
            return Err(Error::Degenerate("division by an interval containing zero".into()));
        }
        Ok(Real { lo: self.hi.recip(), hi: self.lo.recip() }.trim())
    }

    pub fn div(&self, o: &Real) -> Result<Real> {
        Ok(self.mul(&o.recip()?))
    }

    pub fn min(&self, o: &Real) -> Real {
        Real { lo: self.lo.clone().min(o.lo.clone()), hi: self.hi.clone().min(o.hi.clone()) }
    }

    pub fn max(&self, o: &Real) -> Real {
        Real { lo: self.lo.clone().max(o.lo.clone()), hi: self.hi.clone().max(o.hi.clone()) }
    }

    /// Certain ordering, or `None` when the intervals overlap.
    pub fn cmp_certain(&self, o: &Real) -> Option<Ordering> {
        if self.is_exact() && o.is_exact() {
            return Some(self.lo.cmp(&o.lo));
        }
        if self.hi < o.lo {
            Some(Ordering::Less)
        } else if self.lo > o.hi {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    pub fn powi(&self, k: i64) -> Result<Real> {
        if k < 0 {
            return self.powi(-k)?.recip();
        }
        let k = k as usize;
        if self.lo.is_negative() && k.is_multiple_of(2) {
            return Err(Error::Degenerate("even power of a sign-indefinite interval".into()));
        }
        Ok(Real { lo: num_traits::pow(self.lo.clone(), k), hi: num_traits::pow(self.hi.clone(), k) }.trim())
    }

    /// `self^e` for a positive interval and rational exponent.
    pub fn pow(&self, e: &BigRational) -> Result<Real> {
        if !self.lo.is_positive() {
            if e.is_positive() && self.lo.is_zero() && self.hi.is_zero() {
                return Ok(Real::int(0));
            }
            return Err(Error::Degenerate(format!("fractional power of a non-positive base (exponent {e})")));
        }
        if e.is_negative() {
            return self.pow(&-e)?.recip();
        }
        if e.is_integer() {
            let k = e.to_integer().to_i64().ok_or_else(|| Error::Degenerate("exponent too large".into()))?;
            return self.powi(k);
        }
        let p = e.numer().to_i64().ok_or_else(|| Error::Degenerate("exponent too large".into()))?;
        let q = e.denom().to_u32().ok_or_else(|| Error::Degenerate("exponent denominator too large".into()))?;
        let lo = root_bracket(&self.lo, p, q)?.0;
        let hi = if self.is_exact() { root_bracket(&self.lo, p, q)?.1 } else { root_bracket(&self.hi, p, q)?.1 };
        Ok(Real { lo, hi }.trim())
    }

    /// Smallest integer `>= x` for every `x` in the interval, with a flag set
    /// when the ceiling is not determined by the interval.
    pub fn ceil_up(&self) -> (BigInt, bool) {
        let a = self.lo.ceil().to_integer();
        let b = self.hi.ceil().to_integer();
        let ambiguous = a != b;
        (b, ambiguous)
    }

    /// `digits` significant decimals of the lower endpoint, rounded down.
    pub fn decimal_down(&self, digits: usize) -> String {
        to_sig_decimal(&self.lo, digits, false)
    }

    /// `digits` significant decimals of the upper endpoint, rounded up.
    pub fn decimal_up(&self, digits: usize) -> String {
        to_sig_decimal(&self.hi, digits, true)
    }
}

/// `[lo, hi]` containing `x^(p/q)` for positive rational `x`.
fn root_bracket(x: &BigRational, p: i64, q: u32) -> Result<(BigRational, BigRational)> {
    let xp = num_traits::pow(x.clone(), p as usize);
    if let (Some(n), Some(d)) = (exact_root(xp.numer(), q), exact_root(xp.denom(), q)) {
        let r = BigRational::new(n, d);
        return Ok((r.clone(), r));
    }
    let mag = (xp.numer().bits() as i64 - xp.denom().bits() as i64) / q as i64;
    let shift = WORK_BITS as i64 - mag;
    // floor(xp * 2^(shift q))^(1/q) <= 2^shift y < that + 1
    let scaled = &xp * pow2(shift * q as i64);
    let n = scaled.floor().to_integer();
    let r = n.nth_root(q);
    let unit = pow2(-shift);
    let lo = BigRational::from_integer(r.clone()) * &unit;
    let hi = BigRational::from_integer(r + 1) * &unit;
    Ok((lo, hi))
}

/// `ceil(a / b)` for positive integers.
pub fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_ceil(b)
}

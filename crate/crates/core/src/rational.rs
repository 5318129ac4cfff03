//! Exact rational helpers on top of `num-rational`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::interval::Interval;

pub type Rational = BigRational;

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
    Rational::new(num.into(), den.into())
}

pub fn integer(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

pub fn from_biguint(n: BigUint) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `q^e` for any integer exponent.
pub fn qpow(q: u64, e: i64) -> Rational {
    let base = BigInt::from(q).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        Rational::from_integer(base)
    } else {
        Rational::new(BigInt::one(), base)
    }
}

pub fn big_pow(q: u64, e: u32) -> BigUint {
    BigUint::from(q).pow(e)
}

/// Tight enclosure of a rational: the nearest `f64` widened by one ulp each
/// way, or exact when the conversion is lossless.
pub fn enclose(r: &Rational) -> Interval {
    let x = r.to_f64().expect("finite rational");
    if x.is_finite() && x != 0.0 {
        // exact round trip means the f64 is the rational itself
        if let Some(back) = Rational::from_float(x) {
            if &back == r {
                return Interval::point(x);
            }
        }
        Interval::new(x.next_down(), x.next_up())
    } else if r.is_zero() {
        Interval::point(0.0)
    } else if r.is_positive() {
        Interval::new(0.0, f64::MIN_POSITIVE)
    } else {
        Interval::new(-f64::MIN_POSITIVE, 0.0)
    }
}

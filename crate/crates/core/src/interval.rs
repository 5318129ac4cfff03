//! Outward-rounded `f64` intervals.
//!
//! Every operation widens its result by one ulp on each side, which encloses
//! the true value for correctly rounded IEEE operations (`+ - * /` and
//! `sqrt`). Bounds involving `log 2` or fractional powers of `q` are carried
//! this way and compared against exact rationals.

use core::f64::consts::LN_2;
use core::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

/// Three-valued outcome of comparing against a bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    Violated,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn widen(lo: f64, hi: f64) -> Interval {
    Interval { lo: lo.next_down(), hi: hi.next_up() }
}

// Named methods rather than operator traits keep the one-ulp widening visible
// at call sites.
#[allow(clippy::should_implement_trait)]
impl Interval {
    pub fn new(lo: f64, hi: f64) -> Interval {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Interval {
        Interval { lo: x, hi: x }
    }

    /// Encloses an integer, exactly when it is representable.
    pub fn from_biguint(n: &BigUint) -> Interval {
        let x = n.to_f64().expect("finite");
        if n.bits() <= 53 {
            Interval::point(x)
        } else {
            widen(x, x)
        }
    }

    pub fn from_u64(n: u64) -> Interval {
        Interval::from_biguint(&BigUint::from(n))
    }

    pub fn ln2() -> Interval {
        widen(LN_2, LN_2)
    }

    pub fn add(self, o: Interval) -> Interval {
        widen(self.lo + o.lo, self.hi + o.hi)
    }

    pub fn sub(self, o: Interval) -> Interval {
        widen(self.lo - o.hi, self.hi - o.lo)
    }

    pub fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }

    pub fn mul(self, o: Interval) -> Interval {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        widen(lo, hi)
    }

    /// Division by an interval that excludes zero.
    pub fn div(self, o: Interval) -> Interval {
        assert!(o.lo > 0.0 || o.hi < 0.0, "division by an interval containing zero");
        let c = [self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        widen(lo, hi)
    }

    pub fn sqrt(self) -> Interval {
        assert!(self.lo >= 0.0, "sqrt of a negative interval");
        let lo = libm::sqrt(self.lo);
        let hi = libm::sqrt(self.hi);
        Interval { lo: if lo > 0.0 { lo.next_down() } else { 0.0 }, hi: hi.next_up() }
    }

    /// `q^(num / 2^halvings)`, via an exact integer power then square roots.
    pub fn root_pow(q: u64, num: u32, halvings: u32) -> Interval {
        let mut x = Interval::from_biguint(&BigUint::from(q).pow(num));
        for _ in 0..halvings {
            x = x.sqrt();
        }
        x
    }

    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn mid(self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// Checks the claim `value > bound`.
    pub fn verdict_gt(value: Interval, bound: Interval) -> Verdict {
        if value.lo > bound.hi {
            Verdict::Holds
        } else if value.hi <= bound.lo {
            Verdict::Violated
        } else {
            Verdict::Inconclusive
        }
    }

    /// Checks the claim `value >= bound`.
    pub fn verdict_ge(value: Interval, bound: Interval) -> Verdict {
        if value.lo >= bound.hi {
            Verdict::Holds
        } else if value.hi < bound.lo {
            Verdict::Violated
        } else {
            Verdict::Inconclusive
        }
    }

    /// Checks the claim `value <= bound`.
    pub fn verdict_le(value: Interval, bound: Interval) -> Verdict {
        Interval::verdict_ge(bound, value)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.17e}, {:.17e}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln2_enclosed() {
        let l = Interval::ln2();
        assert!(l.lo < LN_2 && LN_2 < l.hi);
        assert!(l.hi - l.lo < 1e-15);
    }

    #[test]
    fn sqrt_encloses_exact_squares() {
        let s = Interval::root_pow(4, 3, 1);
        assert!(s.contains(8.0));
        let s = Interval::root_pow(2, 4, 2);
        assert!(s.contains(2.0));
        let r2 = Interval::root_pow(2, 1, 1);
        assert!(r2.lo * r2.lo <= 2.0 && r2.hi * r2.hi >= 2.0);
    }

    #[test]
    fn verdicts_are_three_valued() {
        let a = Interval::new(1.0, 2.0);
        let b = Interval::new(2.5, 3.0);
        assert_eq!(Interval::verdict_gt(b, a), Verdict::Holds);
        assert_eq!(Interval::verdict_gt(a, b), Verdict::Violated);
        assert_eq!(Interval::verdict_gt(a, Interval::new(1.5, 1.6)), Verdict::Inconclusive);
        assert_eq!(Interval::verdict_le(a, b), Verdict::Holds);
    }

    #[test]
    fn arithmetic_is_outward() {
        let third = Interval::from_u64(1).div(Interval::from_u64(3));
        assert!(third.lo < third.hi);
        let back = third.mul(Interval::from_u64(3));
        assert!(back.contains(1.0));
        let d = Interval::point(1.0).sub(Interval::point(0.1));
        assert!(d.contains(0.9));
    }
}

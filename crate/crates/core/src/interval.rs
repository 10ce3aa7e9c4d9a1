//! Closed intervals with exact rational endpoints.
//!
//! Endpoints stay rational through every operation, so no outward rounding
//! is ever needed; width control is the caller's job.

use crate::rat::Rat;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatInterval {
    pub lo: Rat,
    pub hi: Rat,
}

impl RatInterval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        RatInterval { lo, hi }
    }

    pub fn point(v: Rat) -> Self {
        RatInterval { lo: v.clone(), hi: v }
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rat {
        (&self.lo + &self.hi) / Rat::from_integer(2.into())
    }

    pub fn contains(&self, v: &Rat) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Sign if definite on the whole interval: +1, -1, 0 (point zero), or
    /// None when the interval straddles zero.
    pub fn definite_sign(&self) -> Option<i32> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        RatInterval { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    pub fn sub(&self, other: &Self) -> Self {
        RatInterval { lo: &self.lo - &other.hi, hi: &self.hi - &other.lo }
    }

    pub fn neg(&self) -> Self {
        RatInterval { lo: -self.hi.clone(), hi: -self.lo.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        RatInterval { lo, hi }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_negative() {
            RatInterval { lo: &self.hi * c, hi: &self.lo * c }
        } else {
            RatInterval { lo: &self.lo * c, hi: &self.hi * c }
        }
    }

    /// x^n with the even-power tightening: an interval straddling zero maps
    /// to [0, max^n] rather than the naive product.
    pub fn pow(&self, n: u32) -> Self {
        if n == 0 {
            return RatInterval::point(Rat::one());
        }
        let lo_p = pow_rat(&self.lo, n);
        let hi_p = pow_rat(&self.hi, n);
        if n % 2 == 1 {
            RatInterval { lo: lo_p, hi: hi_p }
        } else if !self.contains_zero() {
            RatInterval { lo: lo_p.clone().min(hi_p.clone()), hi: lo_p.max(hi_p) }
        } else {
            RatInterval { lo: Rat::zero(), hi: lo_p.max(hi_p) }
        }
    }

    /// None when the divisor interval contains zero.
    pub fn div(&self, other: &Self) -> Option<Self> {
        if other.contains_zero() {
            return None;
        }
        let inv = RatInterval {
            lo: Rat::one() / &other.hi,
            hi: Rat::one() / &other.lo,
        };
        Some(self.mul(&inv))
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        if lo <= hi {
            Some(RatInterval { lo, hi })
        } else {
            None
        }
    }

    /// Outward rounding to dyadic endpoints with `bits` fractional bits:
    /// the result contains the original interval but its endpoints stay
    /// small however deep a computation chain gets.
    pub fn outward_round(&self, bits: u32) -> Self {
        use num_bigint::BigInt;
        let scale = Rat::from_integer(BigInt::from(1) << bits);
        let lo = (&self.lo * &scale).floor() / &scale;
        let hi = (&self.hi * &scale).ceil() / &scale;
        RatInterval { lo, hi }
    }

    /// Outward rounding to `bits` significant bits: relative error control
    /// that preserves signs and scale for arbitrarily tiny or huge values.
    pub fn round_significant(&self, bits: u32) -> Self {
        RatInterval {
            lo: round_sig(&self.lo, bits, true),
            hi: round_sig(&self.hi, bits, false),
        }
    }
}

fn round_sig(q: &Rat, bits: u32, down: bool) -> Rat {
    use num_bigint::BigInt;
    if q.is_zero() {
        return Rat::zero();
    }
    let mag = q.numer().bits() as i64 - q.denom().bits() as i64;
    let shift = mag - bits as i64;
    if shift >= 0 {
        let scale = Rat::from_integer(BigInt::from(1) << (shift as u32));
        let scaled = q / &scale;
        let m = if down { scaled.floor() } else { scaled.ceil() };
        m * scale
    } else {
        let scale = Rat::from_integer(BigInt::from(1) << ((-shift) as u32));
        let scaled = q * &scale;
        let m = if down { scaled.floor() } else { scaled.ceil() };
        m / scale
    }
}

fn pow_rat(q: &Rat, n: u32) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..n {
        acc *= q;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    #[test]
    fn arithmetic() {
        let a = RatInterval::new(rat_int(-1), rat_int(2));
        let sq = a.pow(2);
        assert_eq!(sq, RatInterval::new(rat_int(0), rat_int(4)));
        let b = RatInterval::new(rat_int(3), rat_int(4));
        assert_eq!(a.mul(&b), RatInterval::new(rat_int(-4), rat_int(8)));
        assert!(a.div(&a).is_none());
        assert_eq!(
            b.div(&b).unwrap(),
            RatInterval::new(rat(3, 4), rat(4, 3))
        );
    }

    #[test]
    fn signs() {
        assert_eq!(RatInterval::new(rat(1, 2), rat_int(3)).definite_sign(), Some(1));
        assert_eq!(RatInterval::new(rat_int(-3), rat(-1, 2)).definite_sign(), Some(-1));
        assert_eq!(RatInterval::new(rat_int(-1), rat_int(1)).definite_sign(), None);
        assert_eq!(RatInterval::point(rat_int(0)).definite_sign(), Some(0));
    }
}

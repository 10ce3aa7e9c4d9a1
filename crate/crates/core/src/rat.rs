//! Exact rational scalars and small helpers on them.
//!
//! `Rat` is `num_rational::BigRational`: arbitrary precision, always in
//! lowest terms with a positive denominator, which is exactly the invariant
//! the rest of the crate relies on.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};

pub type Rat = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses an integer, decimal, or `num/den` literal as an exact rational.
/// Decimals convert exactly in base 10: `0.02` becomes `1/50`.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let num: BigInt = n.trim().parse().ok()?;
        let den: BigInt = d.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(Rat::new(num, den));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        if !int_digits.bytes().all(|b| b.is_ascii_digit()) || int_digits.is_empty() {
            return None;
        }
        let whole: BigInt = format!("{int_digits}{frac_part}").parse().ok()?;
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        let q = Rat::new(whole, den);
        return Some(if negative { -q } else { q });
    }
    let n: BigInt = s.parse().ok()?;
    Some(Rat::from_integer(n))
}

/// Renders a rational as a decimal string with `digits` fractional digits,
/// rounding to nearest (ties away from zero).
pub fn to_decimal(q: &Rat, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = q * Rat::from_integer(scale.clone());
    // round half away from zero
    let two = BigInt::from(2);
    let (num, den) = (scaled.numer().clone(), scaled.denom().clone());
    let rounded = if num.is_negative() {
        -(((-&num) * &two + &den) / (&den * &two))
    } else {
        (&num * &two + &den) / (&den * &two)
    };
    let negative = rounded.is_negative();
    let abs = rounded.abs();
    let (int, frac) = (abs.clone() / &scale, abs % &scale);
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(&int.to_string());
    if digits > 0 {
        out.push('.');
        out.push_str(&format!("{frac:0>width$}", width = digits));
    }
    out
}

/// Exact `num/den` display, used by the JSON emitters.
pub fn to_frac_string(q: &Rat) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn sign_of(q: &Rat) -> i32 {
    match q.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

fn floor_rat(q: &Rat) -> BigInt {
    q.floor().to_integer()
}

/// The rational with the smallest denominator strictly between `lo` and
/// `hi`, via the Stern-Brocot walk.  Requires `lo < hi`.
pub fn simplest_in(lo: &Rat, hi: &Rat) -> Rat {
    assert!(lo < hi, "simplest_in needs a nonempty open interval");
    if lo.is_negative() && hi.is_positive() {
        return Rat::zero();
    }
    if !hi.is_positive() {
        return -simplest_in(&-hi.clone(), &-lo.clone());
    }
    // now 0 <= lo < hi
    let n = floor_rat(lo);
    let next = Rat::from_integer(&n + BigInt::one());
    if &next < hi {
        return next; // smallest integer strictly inside
    }
    let nq = Rat::from_integer(n);
    if lo == &nq {
        // interval (n, hi) with hi <= n+1: pick n + 1/m for smallest valid m
        let m = floor_rat(&(Rat::one() / (hi - &nq))) + BigInt::one();
        return nq + Rat::one() / Rat::from_integer(m);
    }
    // x in (lo,hi) iff 1/(x-n) in (1/(hi-n), 1/(lo-n))
    let inv = simplest_in(&(Rat::one() / (hi - &nq)), &(Rat::one() / (lo - &nq)));
    nq + Rat::one() / inv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_decimal_exact() {
        assert_eq!(parse_rat("0.02").unwrap(), rat(1, 50));
        assert_eq!(parse_rat("1.092").unwrap(), rat(1092, 1000));
        assert_eq!(parse_rat("-0.5").unwrap(), rat(-1, 2));
        assert_eq!(parse_rat("15").unwrap(), rat_int(15));
        assert_eq!(parse_rat("7/4").unwrap(), rat(7, 4));
        assert!(parse_rat("1.0e3").is_none());
        assert!(parse_rat("1/0").is_none());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&rat(1, 3), 4), "0.3333");
        assert_eq!(to_decimal(&rat(2, 3), 4), "0.6667");
        assert_eq!(to_decimal(&rat(-1, 2), 0), "-1");
        assert_eq!(to_decimal(&rat_int(409), 2), "409.00");
    }

    #[test]
    fn simplest_rational() {
        assert_eq!(simplest_in(&rat(1, 3), &rat(1, 2)), rat(2, 5));
        assert_eq!(simplest_in(&rat(5, 2), &rat(7, 2)), rat_int(3));
        assert_eq!(simplest_in(&rat(-1, 2), &rat(1, 2)), rat_int(0));
        assert_eq!(simplest_in(&rat(409, 1), &rat(410, 1)), rat(819, 2));
        let lo = rat(141421, 100000);
        let hi = rat(141422, 100000);
        let s = simplest_in(&lo, &hi);
        assert!(s > lo && s < hi);
        // denominator must not exceed the decimal one
        assert!(s.denom() <= &num_bigint::BigInt::from(100000));
    }
}

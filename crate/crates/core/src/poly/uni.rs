//! Dense univariate polynomials over Q, lowest degree first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rat::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Rat>,
}

impl UniPoly {
    /// Trailing zero coefficients are trimmed; the zero polynomial is the
    /// empty vector.
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: vec![] }
    }

    pub fn constant(c: Rat) -> Self {
        UniPoly::new(vec![c])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        UniPoly::new(coeffs.iter().map(|c| Rat::from_integer(BigInt::from(*c))).collect())
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        assert!(!self.is_zero(), "degree of zero polynomial");
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &Rat {
        self.coeffs.last().expect("zero polynomial")
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        UniPoly::new(out)
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    pub fn mul_rat(&self, c: &Rat) -> UniPoly {
        if c.is_zero() {
            return UniPoly::zero();
        }
        UniPoly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Rat::from_integer(BigInt::from(i)))
            .collect();
        UniPoly::new(out)
    }

    /// Exact Euclidean division over Q: (quotient, remainder).
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.is_zero() || self.coeffs.len() < divisor.coeffs.len() {
            return (UniPoly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let dl = divisor.leading().clone();
        let dd = divisor.degree();
        let mut quo = vec![Rat::zero(); rem.len() - dd];
        while rem.len() >= dd + 1 {
            let k = rem.len() - 1 - dd;
            let f = rem.last().unwrap() / &dl;
            quo[k] = f.clone();
            for (i, c) in divisor.coeffs.iter().enumerate() {
                let t = c * &f;
                rem[k + i] -= t;
            }
            while rem.last().map_or(false, |c| c.is_zero()) {
                rem.pop();
            }
            if rem.len() <= dd {
                break;
            }
        }
        (UniPoly::new(quo), UniPoly::new(rem))
    }

    /// Scales by a positive rational to integer coefficients with gcd 1.
    pub fn integer_primitive(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for c in &self.coeffs {
            num_gcd = num_gcd.gcd(&(c.numer() * &den_lcm / c.denom()));
        }
        let f = Rat::new(den_lcm, num_gcd);
        self.mul_rat(&f)
    }

    /// Integer primitive with positive leading coefficient.
    pub fn canonical(&self) -> UniPoly {
        let p = self.integer_primitive();
        if !p.is_zero() && p.leading().is_negative() {
            p.neg()
        } else {
            p
        }
    }

    /// Pseudo-remainder: rem(lc(d)^(deg self - deg d + 1) * self, d), all
    /// arithmetic staying in the coefficient ring of the inputs.
    pub fn pseudo_rem(&self, divisor: &UniPoly) -> UniPoly {
        assert!(!divisor.is_zero());
        if self.is_zero() || self.coeffs.len() < divisor.coeffs.len() {
            return self.clone();
        }
        let dd = divisor.degree();
        let lc = divisor.leading().clone();
        let steps_needed = self.degree() - dd + 1;
        let mut r = self.coeffs.clone();
        let mut steps = 0;
        while r.len() > dd {
            let k = r.len() - 1 - dd;
            let lead = r.last().unwrap().clone();
            for c in r.iter_mut() {
                *c *= &lc;
            }
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                let t = dc * &lead;
                r[k + i] -= t;
            }
            steps += 1;
            while r.last().map_or(false, |c| c.is_zero()) {
                r.pop();
            }
            if r.is_empty() {
                break;
            }
        }
        let mut rem = UniPoly::new(r);
        for _ in steps..steps_needed {
            rem = rem.mul_rat(&lc);
        }
        rem
    }

    /// GCD over Q, canonical output (primitive, positive leading):
    /// primitive remainder sequence for small operands, modular images
    /// once degrees or coefficients grow.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let big = |p: &UniPoly| {
            if p.is_zero() {
                return false;
            }
            let bits = p
                .coeffs
                .iter()
                .map(|c| c.numer().bits() + c.denom().bits())
                .max()
                .unwrap_or(0);
            p.degree() > 24 || bits > 512
        };
        if big(self) || big(other) {
            super::modgcd::gcd_modular(self, other)
        } else {
            gcd_prs(&self.canonical(), &other.canonical())
        }
    }

    /// p / gcd(p, p'): same real roots, all simple.  Canonical output.
    pub fn squarefree_part(&self) -> UniPoly {
        assert!(!self.is_zero(), "squarefree part of zero polynomial");
        if self.degree() == 0 {
            return UniPoly::constant(Rat::one());
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.canonical();
        }
        let (q, r) = self.div_rem(&g);
        debug_assert!(r.is_zero());
        q.canonical()
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && (self.degree() == 0 || self.gcd(&self.derivative()).degree() == 0)
    }

    /// Cauchy bound: every real root has |x| < bound.
    pub fn root_bound(&self) -> Rat {
        assert!(!self.is_zero());
        let lead = self.leading().abs();
        let mut m = Rat::zero();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let q = c.abs() / &lead;
            if q > m {
                m = q;
            }
        }
        m + Rat::one()
    }

    /// Power-of-two Fujiwara-style root bound:
    /// 2^(1 + max_k ceil((bits(c_(n-k)) - bits(c_n) + 1) / k)), far tighter
    /// than the Cauchy bound when trailing coefficients dwarf the leading
    /// one, which keeps bisection depth proportional to root magnitudes.
    pub fn root_bound_pow2(&self) -> Rat {
        assert!(!self.is_zero());
        let p = self.integer_primitive();
        let n = p.degree();
        if n == 0 {
            return Rat::one();
        }
        let lead_bits = p.leading().numer().bits() as i64;
        let mut max_exp: i64 = 0;
        for k in 1..=n {
            let c = &p.coeffs[n - k];
            if c.is_zero() {
                continue;
            }
            let delta = c.numer().bits() as i64 - lead_bits + 1;
            let e = if delta <= 0 { 0 } else { (delta + k as i64 - 1) / k as i64 };
            max_exp = max_exp.max(e);
        }
        let exp = (max_exp + 1).max(1) as u32;
        Rat::from_integer(BigInt::one() << exp)
    }

    /// p(x + c)
    pub fn shift(&self, c: &Rat) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        // synthetic Taylor shift, O(n^2)
        let mut coeffs = self.coeffs.clone();
        let n = coeffs.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let add = &coeffs[j + 1] * c;
                coeffs[j] += add;
            }
        }
        UniPoly::new(coeffs)
    }

    /// p(c * x)
    pub fn scale_arg(&self, c: &Rat) -> UniPoly {
        let mut power = Rat::one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| {
                let out = a * &power;
                power *= c;
                out
            })
            .collect();
        UniPoly::new(coeffs)
    }

    /// x^n * p(1/x) with n = deg p: coefficient reversal.
    pub fn reverse(&self) -> UniPoly {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        UniPoly::new(coeffs)
    }

    /// p(-x)
    pub fn mirror(&self) -> UniPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
            .collect();
        UniPoly::new(coeffs)
    }

    pub fn sign_at(&self, x: &Rat) -> i32 {
        crate::rat::sign_of(&self.eval(x))
    }

    /// Interval image by Horner evaluation: contains p(x) for all x in iv.
    pub fn eval_interval(&self, iv: &crate::interval::RatInterval) -> crate::interval::RatInterval {
        use crate::interval::RatInterval;
        let mut acc = RatInterval::point(Rat::zero());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(iv).add(&RatInterval::point(c.clone()));
        }
        acc
    }

    /// Sign at +infinity and -infinity.
    pub fn sign_at_pos_inf(&self) -> i32 {
        if self.is_zero() {
            0
        } else {
            crate::rat::sign_of(self.leading())
        }
    }

    pub fn sign_at_neg_inf(&self) -> i32 {
        if self.is_zero() {
            0
        } else if self.degree() % 2 == 0 {
            crate::rat::sign_of(self.leading())
        } else {
            -crate::rat::sign_of(self.leading())
        }
    }

    /// Strips x^k, returning (k, p / x^k).
    pub fn strip_zero_roots(&self) -> (usize, UniPoly) {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if k == 0 {
            (0, self.clone())
        } else {
            (k, UniPoly::new(self.coeffs[k..].to_vec()))
        }
    }
}

/// Primitive pseudo-remainder-sequence gcd; inputs canonical.
pub(crate) fn gcd_prs(a: &UniPoly, b: &UniPoly) -> UniPoly {
    let mut a = a.clone();
    let mut b = b.clone();
    if a.is_zero() {
        return b;
    }
    if b.is_zero() {
        return a;
    }
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() && b.degree() > 0 {
        let r = a.pseudo_rem(&b).canonical();
        a = b;
        b = r;
        if b.is_zero() {
            return a.canonical();
        }
    }
    if b.is_zero() {
        a.canonical()
    } else {
        UniPoly::constant(Rat::from_integer(BigInt::one()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    #[test]
    fn division_and_gcd() {
        // (x-1)^2 (x+2)
        let p = UniPoly::from_ints(&[2, -3, 0, 1]);
        let d = UniPoly::from_ints(&[-1, 1]);
        let (q, r) = p.div_rem(&d);
        assert!(r.is_zero());
        assert_eq!(q, UniPoly::from_ints(&[-2, 1, 1]));
        let g = p.gcd(&p.derivative());
        assert_eq!(g, UniPoly::from_ints(&[-1, 1]));
    }

    #[test]
    fn squarefree() {
        let p = UniPoly::from_ints(&[2, -3, 0, 1]); // (x-1)^2 (x+2)
        let sf = p.squarefree_part();
        assert_eq!(sf, UniPoly::from_ints(&[-2, 1, 1])); // (x-1)(x+2)
        // idempotent up to constant and coprime with derivative
        assert_eq!(sf.squarefree_part(), sf);
        assert_eq!(sf.gcd(&sf.derivative()).degree(), 0);
    }

    #[test]
    fn shift_scale_reverse() {
        let p = UniPoly::from_ints(&[-2, 0, 1]); // x^2 - 2
        let sh = p.shift(&rat_int(1)); // (x+1)^2 - 2 = x^2 + 2x - 1
        assert_eq!(sh, UniPoly::from_ints(&[-1, 2, 1]));
        let sc = p.scale_arg(&rat(1, 2)); // x^2/4 - 2
        assert_eq!(sc.eval(&rat_int(2)), p.eval(&rat_int(1)));
        assert_eq!(p.reverse(), UniPoly::from_ints(&[1, 0, -2]));
        assert_eq!(p.mirror(), p); // even
    }

    #[test]
    fn bounds_and_signs() {
        let p = UniPoly::from_ints(&[-2, 0, 1]);
        assert!(p.root_bound() >= rat_int(2));
        assert_eq!(p.sign_at_pos_inf(), 1);
        assert_eq!(p.sign_at_neg_inf(), 1);
        let q = UniPoly::from_ints(&[0, 1]);
        assert_eq!(q.sign_at_neg_inf(), -1);
    }
}

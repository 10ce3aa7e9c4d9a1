//! Sparse multivariate polynomials over Q.
//!
//! Terms live in a `BTreeMap` keyed by graded-lexicographic monomial order
//! (variable precedence follows the shared variable table).  No zero
//! coefficient is ever stored; the zero polynomial is the empty map.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::interval::RatInterval;
use crate::rat::Rat;

mod div;
mod gcd;
mod interp;
mod modgcd;
mod resultant;
mod uni;

pub use div::bareiss_det;
pub use interp::{bivariate_discriminant, bivariate_resultant, discriminant_interp, interpolate, resultant_interp, uni_resultant};
pub use gcd::{multi_gcd, squarefree_part_multi};
pub use resultant::{discriminant, resultant, subresultant_prs};
pub use uni::UniPoly;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("both polynomials are constant in {0}")]
    ConstantPair(String),
    #[error("discriminant needs degree >= 2 in {0}")]
    DegreeTooLow(String),
    #[error("zero polynomial")]
    ZeroPoly,
    #[error("variable {0} not in table")]
    UnknownVariable(String),
}

/// Exponent vector aligned with a polynomial's variable table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.0.len(), other.0.len());
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => self.0.cmp(&other.0),
            ord => ord,
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Rat>,
}

impl MultiPoly {
    pub fn zero(vars: &[&str]) -> Self {
        MultiPoly {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn zero_with(vars: Vec<String>) -> Self {
        MultiPoly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: &[&str], c: Rat) -> Self {
        let mut p = MultiPoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial(vec![0; p.vars.len()]), c);
        }
        p
    }

    pub fn var(vars: &[&str], name: &str) -> Self {
        let mut p = MultiPoly::zero(vars);
        let idx = p.index_of(name).expect("variable not in table");
        let mut exps = vec![0; p.vars.len()];
        exps[idx] = 1;
        p.terms.insert(Monomial(exps), Rat::one());
        p
    }

    pub fn from_terms(vars: Vec<String>, terms: Vec<(Vec<u32>, Rat)>) -> Self {
        let n = vars.len();
        let mut p = MultiPoly { vars, terms: BTreeMap::new() };
        for (exps, c) in terms {
            assert_eq!(exps.len(), n);
            if !c.is_zero() {
                let entry = p.terms.entry(Monomial(exps)).or_insert_with(Rat::zero);
                *entry += c;
                if entry.is_zero() {
                    // re-fetch key to remove; simplest via retain below
                }
            }
        }
        p.terms.retain(|_, c| !c.is_zero());
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.total_degree() == 0)
    }

    pub fn constant_value(&self) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        if self.is_constant() {
            return Some(self.terms.values().next().unwrap().clone());
        }
        None
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn contains_var(&self, name: &str) -> bool {
        match self.index_of(name) {
            None => false,
            Some(i) => self.terms.keys().any(|m| m.0[i] > 0),
        }
    }

    /// Variables that actually occur with a positive exponent.
    pub fn support_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            for (i, e) in m.0.iter().enumerate() {
                if *e > 0 {
                    out.insert(self.vars[i].clone());
                }
            }
        }
        out
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, name: &str) -> u32 {
        match self.index_of(name) {
            None => 0,
            Some(i) => self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0),
        }
    }

    /// Degree of every variable, by table index.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d = vec![0; self.vars.len()];
        for m in self.terms.keys() {
            for (i, e) in m.0.iter().enumerate() {
                d[i] = d[i].max(*e);
            }
        }
        d
    }

    /// Re-expresses the polynomial over `table`, which must contain every
    /// variable in this polynomial's support.
    pub fn align_to(&self, table: &[String]) -> MultiPoly {
        if self.vars == table {
            return self.clone();
        }
        let map: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| table.iter().position(|t| t == v))
            .collect();
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; table.len()];
            for (i, e) in m.0.iter().enumerate() {
                if *e > 0 {
                    let j = map[i].unwrap_or_else(|| {
                        panic!("variable {} missing from target table", self.vars[i])
                    });
                    exps[j] = *e;
                }
            }
            terms.insert(Monomial(exps), c.clone());
        }
        MultiPoly { vars: table.to_vec(), terms }
    }

    fn merged_table(&self, other: &MultiPoly) -> Vec<String> {
        if self.vars == other.vars {
            return self.vars.clone();
        }
        let mut table = self.vars.clone();
        for v in &other.vars {
            if !table.contains(v) {
                table.push(v.clone());
            }
        }
        table
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let table = self.merged_table(other);
        let mut a = self.align_to(&table);
        let b = other.align_to(&table);
        for (m, c) in b.terms {
            let entry = a.terms.entry(m).or_insert_with(Rat::zero);
            *entry += c;
        }
        a.terms.retain(|_, c| !c.is_zero());
        a
    }

    pub fn neg(&self) -> MultiPoly {
        let mut p = self.clone();
        for c in p.terms.values_mut() {
            *c = -c.clone();
        }
        p
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        let table = self.merged_table(other);
        let a = self.align_to(&table);
        let b = other.align_to(&table);
        let mut terms: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                let entry = terms.entry(m).or_insert_with(Rat::zero);
                *entry += c;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        MultiPoly { vars: table, terms }
    }

    pub fn mul_rat(&self, c: &Rat) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero_with(self.vars.clone());
        }
        let mut p = self.clone();
        for v in p.terms.values_mut() {
            *v *= c;
        }
        p
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        let mut acc = MultiPoly::constant(
            &self.vars.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
            Rat::one(),
        );
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Mathematical equality (tables may differ in order or padding).
    pub fn eq_poly(&self, other: &MultiPoly) -> bool {
        self.sub(other).is_zero()
    }

    /// Some(c) with `self = c * other`, c a nonzero rational.
    pub fn proportional_to(&self, other: &MultiPoly) -> Option<Rat> {
        if self.is_zero() || other.is_zero() {
            return None;
        }
        let table = self.merged_table(other);
        let a = self.align_to(&table);
        let b = other.align_to(&table);
        if a.terms.len() != b.terms.len() {
            return None;
        }
        let (m0, c0) = a.terms.iter().next_back().unwrap();
        let cb0 = b.terms.get(m0)?;
        let ratio = c0 / cb0;
        for (m, c) in &a.terms {
            let cb = b.terms.get(m)?;
            if c != &(&ratio * cb) {
                return None;
            }
        }
        Some(ratio)
    }

    /// Leading coefficient in the graded-lex term order.
    pub fn leading_coeff(&self) -> Option<&Rat> {
        self.terms.values().next_back()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    /// Coefficient polynomials with respect to `name`, ascending by power.
    /// Entry `k` does not mention `name`.
    pub fn coeffs_in(&self, name: &str) -> Vec<MultiPoly> {
        let i = match self.index_of(name) {
            Some(i) => i,
            None => return vec![self.clone()],
        };
        let d = self.degree_in(name) as usize;
        let mut out = vec![MultiPoly::zero_with(self.vars.clone()); d + 1];
        for (m, c) in &self.terms {
            let k = m.0[i] as usize;
            let mut exps = m.0.clone();
            exps[i] = 0;
            out[k].terms.insert(Monomial(exps), c.clone());
        }
        out
    }

    /// Rebuilds sum(coeffs[k] * name^k).
    pub fn from_coeffs_in(vars: &[String], name: &str, coeffs: &[MultiPoly]) -> MultiPoly {
        let mut acc = MultiPoly::zero_with(vars.to_vec());
        let i = acc.index_of(name).expect("variable not in table");
        for (k, c) in coeffs.iter().enumerate() {
            let aligned = c.align_to(vars);
            for (m, v) in aligned.terms {
                let mut exps = m.0.clone();
                exps[i] += k as u32;
                let entry = acc.terms.entry(Monomial(exps)).or_insert_with(Rat::zero);
                *entry += v;
            }
        }
        acc.terms.retain(|_, c| !c.is_zero());
        acc
    }

    /// Leading coefficient polynomial with respect to one variable.
    pub fn lc_in(&self, name: &str) -> MultiPoly {
        self.coeffs_in(name).pop().unwrap_or_else(|| MultiPoly::zero_with(self.vars.clone()))
    }

    pub fn substitute_rat(&self, name: &str, value: &Rat) -> MultiPoly {
        let coeffs = self.coeffs_in(name);
        let mut acc = MultiPoly::zero_with(self.vars.clone());
        let mut power = Rat::one();
        for c in coeffs {
            acc = acc.add(&c.mul_rat(&power));
            power *= value;
        }
        acc
    }

    pub fn substitute_poly(&self, name: &str, value: &MultiPoly) -> MultiPoly {
        let coeffs = self.coeffs_in(name);
        let table = self.merged_table(value);
        let mut acc = MultiPoly::zero_with(table.clone());
        let mut power = MultiPoly::constant(
            &table.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
            Rat::one(),
        );
        for c in coeffs {
            acc = acc.add(&c.mul(&power));
            power = power.mul(value);
        }
        acc
    }

    pub fn derivative(&self, name: &str) -> MultiPoly {
        let i = match self.index_of(name) {
            Some(i) => i,
            None => return MultiPoly::zero_with(self.vars.clone()),
        };
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] = e - 1;
            terms.insert(Monomial(exps), c * Rat::from_integer(BigInt::from(e)));
        }
        MultiPoly { vars: self.vars.clone(), terms }
    }

    pub fn eval(&self, values: &BTreeMap<String, Rat>) -> Rat {
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, e) in m.0.iter().enumerate() {
                if *e > 0 {
                    let v = values
                        .get(&self.vars[i])
                        .unwrap_or_else(|| panic!("missing value for {}", self.vars[i]));
                    for _ in 0..*e {
                        t *= v;
                    }
                }
            }
            acc += t;
        }
        acc
    }

    /// Interval extension: the result contains p(x) for every x in the box.
    pub fn interval_eval(&self, boxes: &BTreeMap<String, RatInterval>) -> RatInterval {
        let mut acc = RatInterval::point(Rat::zero());
        for (m, c) in &self.terms {
            let mut t = RatInterval::point(c.clone());
            for (i, e) in m.0.iter().enumerate() {
                if *e > 0 {
                    let b = boxes
                        .get(&self.vars[i])
                        .unwrap_or_else(|| panic!("missing box for {}", self.vars[i]));
                    t = t.mul(&b.pow(*e));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// All coefficients share one sign: the polynomial is sign-definite on
    /// the open positive orthant.  Returns that sign, or None.
    pub fn orthant_sign(&self) -> Option<i32> {
        if self.is_zero() {
            return Some(0);
        }
        let mut sign = 0;
        for c in self.terms.values() {
            let s = if c.is_positive() { 1 } else { -1 };
            if sign == 0 {
                sign = s;
            } else if sign != s {
                return None;
            }
        }
        Some(sign)
    }

    /// Scales by a positive rational so coefficients are integers with
    /// gcd 1.  Returns the scaled polynomial and the factor applied.
    pub fn integer_normalized(&self) -> (MultiPoly, Rat) {
        if self.is_zero() {
            return (self.clone(), Rat::one());
        }
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            let n = c.numer() * &den_lcm / c.denom();
            num_gcd = num_gcd.gcd(&n);
        }
        let factor = Rat::new(den_lcm, num_gcd);
        (self.mul_rat(&factor), factor)
    }

    /// Integer primitive form with a positive leading (graded-lex)
    /// coefficient: the canonical representative up to positive scaling.
    pub fn canonical_scaled(&self) -> MultiPoly {
        let (mut p, _) = self.integer_normalized();
        if let Some(lc) = p.leading_coeff() {
            if lc.is_negative() {
                p = p.neg();
            }
        }
        p
    }

    /// Greatest common monomial of all terms (e.g. x*y^2 | every term).
    pub fn monomial_content(&self) -> Monomial {
        let mut min: Option<Vec<u32>> = None;
        for m in self.terms.keys() {
            match &mut min {
                None => min = Some(m.0.clone()),
                Some(v) => {
                    for (a, b) in v.iter_mut().zip(&m.0) {
                        *a = (*a).min(*b);
                    }
                }
            }
        }
        Monomial(min.unwrap_or_else(|| vec![0; self.vars.len()]))
    }

    pub fn div_monomial(&self, m: &Monomial) -> MultiPoly {
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            assert!(m.divides(k), "monomial does not divide term");
            terms.insert(k.div(m), c.clone());
        }
        MultiPoly { vars: self.vars.clone(), terms }
    }

    /// Dense univariate view when only `name` occurs.
    pub fn to_uni(&self, name: &str) -> Option<UniPoly> {
        for v in self.support_vars() {
            if v != name {
                return None;
            }
        }
        let d = self.degree_in(name) as usize;
        let mut coeffs = vec![Rat::zero(); d + 1];
        if let Some(i) = self.index_of(name) {
            for (m, c) in &self.terms {
                coeffs[m.0[i] as usize] = c.clone();
            }
        } else if !self.is_zero() {
            coeffs[0] = self.constant_value().unwrap();
        }
        Some(UniPoly::new(coeffs))
    }

    pub fn from_uni(p: &UniPoly, name: &str) -> MultiPoly {
        let mut out = MultiPoly::zero(&[name]);
        for (k, c) in p.coeffs().iter().enumerate() {
            if !c.is_zero() {
                out.terms.insert(Monomial(vec![k as u32]), c.clone());
            }
        }
        out
    }
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.eq_poly(other)
    }
}

impl Eq for MultiPoly {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};
    use crate::textform::parse_poly;

    fn p(src: &str, vars: &[&str]) -> MultiPoly {
        parse_poly(src, vars).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let vars = &["x"];
        let lhs = p("x + 1", vars).mul(&p("x - 1", vars));
        assert_eq!(lhs, p("x^2 - 1", vars));
    }

    #[test]
    fn additive_identity_and_distributivity() {
        let vars = &["x", "y", "z"];
        let zero = MultiPoly::zero(vars);
        let a = p("3*x^2*y - z + 7", vars);
        assert_eq!(a.add(&zero), a);
        let b = p("x*z - 2", vars);
        let c = p("y + z^2", vars);
        assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn substitute_rat_basic() {
        let vars = &["x", "y"];
        let q = p("x^2 + y", vars).substitute_rat("x", &rat_int(2));
        assert_eq!(q, p("y + 4", vars));
    }

    #[test]
    fn substitute_round_trip() {
        let vars = &["x", "y"];
        let a = p("x^3 - 2*x*y + y^2 - 5", vars);
        let fresh = MultiPoly::var(&["t"], "t");
        let moved = a.substitute_poly("x", &fresh);
        let back = moved.substitute_poly("t", &MultiPoly::var(vars, "x"));
        assert_eq!(back, a);
    }

    #[test]
    fn derivative_basic() {
        let vars = &["x", "y"];
        assert_eq!(p("x^3", vars).derivative("x"), p("3*x^2", vars));
        assert_eq!(p("x*y + y^2", vars).derivative("y"), p("x + 2*y", vars));
    }

    #[test]
    fn interval_eval_contains() {
        let vars = &["x"];
        let sq = p("x^2", vars);
        let mut boxes = BTreeMap::new();
        boxes.insert("x".to_string(), RatInterval::new(rat_int(-1), rat_int(2)));
        let out = sq.interval_eval(&boxes);
        assert!(out.lo <= rat_int(0) && out.hi >= rat_int(4));
        let five = MultiPoly::constant(vars, rat_int(5));
        assert_eq!(five.interval_eval(&boxes), RatInterval::point(rat_int(5)));
    }

    #[test]
    fn canonical_scaling() {
        let vars = &["x"];
        let q = p("-2*x + 2", vars).canonical_scaled();
        assert_eq!(q, p("x - 1", vars));
        let (n, f) = p("1/2*x - 1/3", vars).integer_normalized();
        assert_eq!(n, p("3*x - 2", vars));
        assert_eq!(f, rat_int(6));
    }

    #[test]
    fn orthant_sign_detection() {
        let vars = &["x", "y"];
        assert_eq!(p("2*x + 3*y^2", vars).orthant_sign(), Some(1));
        assert_eq!(p("-x - y", vars).orthant_sign(), Some(-1));
        assert_eq!(p("x - y", vars).orthant_sign(), None);
    }

    #[test]
    fn proportionality() {
        let vars = &["x", "y"];
        let a = p("2*x - 4*y", vars);
        let b = p("-x + 2*y", vars);
        assert_eq!(a.proportional_to(&b), Some(rat_int(-2)));
        assert_eq!(a.proportional_to(&p("x + y", vars)), None);
    }

    #[test]
    fn finite_difference_matches_derivative() {
        // central difference at rational points: |fd - p'(a)| <= M h^2 / 3
        // with M bounding |p'''| near a.
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(7);
        let vars = &["x"];
        let h = rat(1, 1_000_000);
        for _ in 0..20 {
            let coeffs: Vec<i64> = (0..6).map(|_| rng.gen_range(-9..=9)).collect();
            let terms: Vec<(Vec<u32>, Rat)> = coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (vec![k as u32], rat_int(*c)))
                .collect();
            let poly = MultiPoly::from_terms(vec!["x".to_string()], terms);
            let a = rat(rng.gen_range(-50..=50), rng.gen_range(1..=9));
            let mut at = BTreeMap::new();
            at.insert("x".to_string(), a.clone());
            let exact = poly.derivative("x").eval(&at);
            let mut hi = BTreeMap::new();
            hi.insert("x".to_string(), &a + &h);
            let mut lo = BTreeMap::new();
            lo.insert("x".to_string(), &a - &h);
            let fd = (poly.eval(&hi) - poly.eval(&lo)) / (rat_int(2) * &h);
            // bound |p'''| on [a-h, a+h] by sum |c_i| * i(i-1)(i-2) * (|a|+1)^(i-3)
            let p3 = poly.derivative("x").derivative("x").derivative("x");
            let bound_point = a.abs() + rat_int(1);
            let mut m = Rat::zero();
            for (mono, c) in p3.terms() {
                let e = mono.0[0];
                let mut t = c.abs();
                for _ in 0..e {
                    t *= &bound_point;
                }
                m += t;
            }
            let err = (fd - exact).abs();
            assert!(err <= m * &h * &h / rat_int(3), "finite difference off: {err}");
            let _ = vars;
        }
    }
}

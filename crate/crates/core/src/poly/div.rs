//! Exact multivariate division.

use super::{Monomial, MultiPoly};
use crate::rat::Rat;

impl MultiPoly {
    /// Exact quotient self / divisor, or None when it does not divide.
    /// Standard monomial-ordered long division over Q; since we demand a
    /// zero remainder, any reduction failure means "not divisible".
    pub fn divide_exact(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(MultiPoly::zero_with(self.vars().to_vec()));
        }
        let table = {
            let mut t = self.vars().to_vec();
            for v in divisor.vars() {
                if !t.contains(v) {
                    t.push(v.clone());
                }
            }
            t
        };
        let mut rem = self.align_to(&table);
        let div = divisor.align_to(&table);
        let div_lm = div.leading_monomial().unwrap().clone();
        let div_lc = div.leading_coeff().unwrap().clone();
        let mut quo = MultiPoly::zero_with(table.clone());
        while !rem.is_zero() {
            let lm = rem.leading_monomial().unwrap().clone();
            let lc = rem.leading_coeff().unwrap().clone();
            if !monomial_divides(&div_lm, &lm) {
                return None;
            }
            let qm = Monomial(lm.0.iter().zip(&div_lm.0).map(|(a, b)| a - b).collect());
            let qc = &lc / &div_lc;
            let t = MultiPoly::from_terms(table.clone(), vec![(qm.0.clone(), qc)]);
            quo = quo.add(&t);
            rem = rem.sub(&t.mul(&div));
        }
        Some(quo)
    }

    pub fn divides(&self, other: &MultiPoly) -> bool {
        other.divide_exact(self).is_some()
    }

    /// Divides out `divisor` as many times as it goes exactly; returns the
    /// reduced polynomial and the multiplicity removed.
    pub fn strip_factor(&self, divisor: &MultiPoly) -> (MultiPoly, u32) {
        let mut current = self.clone();
        let mut count = 0;
        if divisor.is_constant() {
            return (current, 0);
        }
        while let Some(q) = current.divide_exact(divisor) {
            current = q;
            count += 1;
            if current.is_constant() {
                break;
            }
        }
        (current, count)
    }
}

fn monomial_divides(d: &Monomial, m: &Monomial) -> bool {
    d.0.iter().zip(&m.0).all(|(a, b)| a <= b)
}

/// Determinant of a square matrix of polynomials by Bareiss fraction-free
/// elimination; every interior division is exact.
pub fn bareiss_det(matrix: &[Vec<MultiPoly>]) -> MultiPoly {
    let n = matrix.len();
    assert!(n > 0 && matrix.iter().all(|r| r.len() == n));
    let table: Vec<String> = matrix[0][0].vars().to_vec();
    let mut m: Vec<Vec<MultiPoly>> = matrix.to_vec();
    let one = MultiPoly::from_terms(table.clone(), vec![(vec![0; table.len()], Rat::from_integer(1.into()))]);
    let mut prev = one;
    let mut sign = 1i32;
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            // pivot search
            let swap = (k + 1..n).find(|&r| !m[r][k].is_zero());
            match swap {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return MultiPoly::zero_with(table),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num
                    .divide_exact(&prev)
                    .expect("Bareiss interior division must be exact");
            }
        }
        for row in m.iter_mut().take(n).skip(k + 1) {
            row[k] = MultiPoly::zero_with(table.clone());
        }
        prev = m[k][k].clone();
    }
    let mut det = m[n - 1][n - 1].clone();
    if sign < 0 {
        det = det.neg();
    }
    det
}

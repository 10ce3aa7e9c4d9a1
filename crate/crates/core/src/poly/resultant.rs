//! Resultants and discriminants via subresultant polynomial remainder
//! sequences.  The PRS controls coefficient growth on the deep elimination
//! chains; exactness is cross-checked against a fraction-free Sylvester
//! determinant in the test suite.

use super::{MultiPoly, PolyError};
use crate::rat::Rat;
use num_traits::One;

/// Pseudo-remainder of a by b with respect to `var`:
/// rem(lc(b)^(d+1) * a, b) with d = deg(a) - deg(b), all divisions exact.
pub fn prem(a: &MultiPoly, b: &MultiPoly, var: &str) -> MultiPoly {
    let db = b.degree_in(var);
    let da = a.degree_in(var);
    assert!(db <= da, "prem requires deg(a) >= deg(b)");
    assert!(!b.is_zero());
    let b_coeffs = b.coeffs_in(var);
    let lb = b_coeffs.last().unwrap().clone();
    let mut r = a.clone();
    let mut steps = 0u32;
    while !r.is_zero() && r.degree_in(var) >= db && (r.degree_in(var) > 0 || db == 0) {
        let dr = r.degree_in(var);
        if dr < db {
            break;
        }
        let r_coeffs = r.coeffs_in(var);
        let lr = r_coeffs.last().unwrap().clone();
        // r <- lb * r - lr * x^(dr-db) * b
        let table = r.vars().to_vec();
        let mut shift_exps = vec![0u32; table.len()];
        shift_exps[r.index_of(var).unwrap()] = dr - db;
        let shifted =
            MultiPoly::from_terms(table.clone(), vec![(shift_exps, Rat::one())]).mul(b);
        r = r.mul(&lb).sub(&lr.mul(&shifted));
        steps += 1;
        if db == 0 {
            break;
        }
    }
    for _ in steps..(da - db + 1) {
        r = r.mul(&lb);
    }
    r
}

/// The subresultant pseudo-remainder sequence starting from (a, b) in
/// `var`, first element included.  Degrees strictly decrease from the
/// second element on; the last element is nonzero unless gcd is nontrivial.
pub fn subresultant_prs(a: &MultiPoly, b: &MultiPoly, var: &str) -> Vec<MultiPoly> {
    let (mut f, mut g) = (a.clone(), b.clone());
    if f.degree_in(var) < g.degree_in(var) {
        std::mem::swap(&mut f, &mut g);
    }
    let mut seq = vec![f.clone(), g.clone()];
    if g.is_zero() {
        return seq;
    }
    let one = MultiPoly::constant(
        &f.vars().iter().map(|s| s.as_str()).collect::<Vec<_>>(),
        Rat::one(),
    );
    let mut h = one.clone();
    let mut coef_g = one;
    loop {
        let (da, db) = (f.degree_in(var), g.degree_in(var));
        if db == 0 {
            break;
        }
        let delta = da - db;
        let r = prem(&f, &g, var);
        if r.is_zero() {
            break;
        }
        let divisor = coef_g.mul(&pow_poly(&h, delta));
        let next = r
            .divide_exact(&divisor)
            .expect("subresultant division must be exact");
        f = g;
        g = next.clone();
        coef_g = f.lc_in(var);
        h = if delta == 0 {
            h
        } else if delta == 1 {
            coef_g.clone()
        } else {
            pow_poly(&coef_g, delta)
                .divide_exact(&pow_poly(&h, delta - 1))
                .expect("subresultant h-update must be exact")
        };
        seq.push(next);
    }
    seq
}

fn pow_poly(p: &MultiPoly, n: u32) -> MultiPoly {
    p.pow(n)
}

/// Exact resultant: equals the Sylvester determinant of (a, b) in `var`.
pub fn resultant(a: &MultiPoly, b: &MultiPoly, var: &str) -> Result<MultiPoly, PolyError> {
    let da = a.degree_in(var);
    let db = b.degree_in(var);
    if da == 0 && db == 0 {
        return Err(PolyError::ConstantPair(var.to_string()));
    }
    if a.is_zero() || b.is_zero() {
        return Ok(MultiPoly::zero_with(a.vars().to_vec()));
    }
    if da == 0 {
        return Ok(a.pow(db));
    }
    if db == 0 {
        return Ok(b.pow(da));
    }
    let (mut f, mut g, mut sign) = if da < db {
        (b.clone(), a.clone(), if da % 2 == 1 && db % 2 == 1 { -1 } else { 1 })
    } else {
        (a.clone(), b.clone(), 1)
    };
    let one = MultiPoly::constant(
        &f.vars().iter().map(|s| s.as_str()).collect::<Vec<_>>(),
        Rat::one(),
    );
    let mut gc = one.clone();
    let mut h = one;
    loop {
        let (dl, dm) = (f.degree_in(var), g.degree_in(var));
        let delta = dl - dm;
        if dl % 2 == 1 && dm % 2 == 1 {
            sign = -sign;
        }
        let r = prem(&f, &g, var);
        if r.is_zero() {
            // common factor of positive degree
            return Ok(MultiPoly::zero_with(f.vars().to_vec()));
        }
        let divisor = gc.mul(&pow_poly(&h, delta));
        let next = r
            .divide_exact(&divisor)
            .expect("subresultant division must be exact");
        f = g;
        g = next;
        gc = f.lc_in(var);
        h = if delta == 0 {
            h
        } else if delta == 1 {
            gc.clone()
        } else {
            pow_poly(&gc, delta)
                .divide_exact(&pow_poly(&h, delta - 1))
                .expect("subresultant h-update must be exact")
        };
        if g.degree_in(var) == 0 {
            break;
        }
    }
    // g is now a nonzero element of the coefficient ring
    let dl = f.degree_in(var);
    let res = if dl == 0 {
        g
    } else {
        pow_poly(&g, dl)
            .divide_exact(&pow_poly(&h, dl - 1))
            .expect("final subresultant normalization must be exact")
    };
    Ok(if sign < 0 { res.neg() } else { res })
}

/// disc(p) = (-1)^(d(d-1)/2) res(p, dp/dvar) / lc(p, var), exactly.
pub fn discriminant(p: &MultiPoly, var: &str) -> Result<MultiPoly, PolyError> {
    let d = p.degree_in(var);
    if d < 2 {
        return Err(PolyError::DegreeTooLow(var.to_string()));
    }
    let dp = p.derivative(var);
    let res = resultant(p, &dp, var)?;
    let lc = p.lc_in(var);
    let quotient = res
        .divide_exact(&lc)
        .expect("resultant divisible by leading coefficient");
    let sign_flip = (d as u64) * (d as u64 - 1) / 2 % 2 == 1;
    Ok(if sign_flip { quotient.neg() } else { quotient })
}

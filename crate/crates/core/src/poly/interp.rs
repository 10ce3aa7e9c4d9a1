//! Evaluate-interpolate resultants and discriminants for bivariate
//! polynomials: univariate subresultant runs at integer specializations of
//! one variable, recombined by exact Newton interpolation.  Degrees come
//! from the Sylvester bound, and specialization points where a leading
//! coefficient vanishes are skipped, so the interpolated polynomial equals
//! the true resultant.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{MultiPoly, UniPoly};
use crate::rat::Rat;

/// Exact resultant of univariate polynomials by the subresultant PRS.
pub fn uni_resultant(a: &UniPoly, b: &UniPoly) -> Rat {
    if a.is_zero() || b.is_zero() {
        return Rat::zero();
    }
    let (da, db) = (a.degree(), b.degree());
    if da == 0 && db == 0 {
        return Rat::one();
    }
    if da == 0 {
        return pow_rat(&a.coeff(0), db as u32);
    }
    if db == 0 {
        return pow_rat(&b.coeff(0), da as u32);
    }
    let (mut f, mut g, mut sign) = if da < db {
        (b.clone(), a.clone(), if da % 2 == 1 && db % 2 == 1 { -1 } else { 1 })
    } else {
        (a.clone(), b.clone(), 1)
    };
    let mut gc = Rat::one();
    let mut h = Rat::one();
    loop {
        let (dl, dm) = (f.degree(), g.degree());
        let delta = (dl - dm) as u32;
        if dl % 2 == 1 && dm % 2 == 1 {
            sign = -sign;
        }
        let r = f.pseudo_rem(&g);
        if r.is_zero() {
            return Rat::zero();
        }
        let divisor = &gc * pow_rat(&h, delta);
        let next = r.mul_rat(&(Rat::one() / divisor));
        f = g;
        g = next;
        gc = f.leading().clone();
        h = if delta == 0 {
            h
        } else if delta == 1 {
            gc.clone()
        } else {
            pow_rat(&gc, delta) / pow_rat(&h, delta - 1)
        };
        if g.degree() == 0 {
            break;
        }
    }
    let dl = f.degree() as u32;
    let res = if dl == 0 {
        g.coeff(0)
    } else {
        pow_rat(&g.coeff(0), dl) / pow_rat(&h, dl - 1)
    };
    if sign < 0 {
        -res
    } else {
        res
    }
}

fn pow_rat(q: &Rat, n: u32) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..n {
        acc *= q;
    }
    acc
}

/// Exact polynomial through (x_i, y_i) by Newton divided differences.
pub fn interpolate(points: &[(Rat, Rat)]) -> UniPoly {
    let n = points.len();
    let mut coef: Vec<Rat> = points.iter().map(|(_, y)| y.clone()).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = &coef[i] - &coef[i - 1];
            let den = &points[i].0 - &points[i - j].0;
            coef[i] = num / den;
        }
    }
    // expand the Newton form
    let mut poly = UniPoly::zero();
    let mut basis = UniPoly::constant(Rat::one());
    for (i, c) in coef.iter().enumerate() {
        poly = poly.add(&basis.mul_rat(c));
        if i + 1 < n {
            let root = &points[i].0;
            basis = basis.mul(&UniPoly::new(vec![-root.clone(), Rat::one()]));
        }
    }
    poly
}

fn integer_points() -> impl Iterator<Item = Rat> {
    (0i64..).map(|k| {
        let v = if k % 2 == 0 { k / 2 } else { -(k / 2 + 1) };
        Rat::from_integer(BigInt::from(v))
    })
}

/// res_elim(p, q) for polynomials in exactly {elim, keep}, by evaluation
/// of `keep` at integers and exact interpolation.
pub fn bivariate_resultant(
    p: &MultiPoly,
    q: &MultiPoly,
    elim: &str,
    keep: &str,
) -> Option<MultiPoly> {
    let (dp_e, dp_k) = (p.degree_in(elim) as usize, p.degree_in(keep) as usize);
    let (dq_e, dq_k) = (q.degree_in(elim) as usize, q.degree_in(keep) as usize);
    if dp_e == 0 || dq_e == 0 {
        return None;
    }
    let bound = dp_k * dq_e + dq_k * dp_e;
    let p_lead = p.lc_in(elim);
    let q_lead = q.lc_in(elim);
    let mut samples: Vec<(Rat, Rat)> = Vec::with_capacity(bound + 1);
    for t in integer_points() {
        if samples.len() > bound {
            break;
        }
        // degree must be preserved at the specialization
        let lp = p_lead.substitute_rat(keep, &t);
        let lq = q_lead.substitute_rat(keep, &t);
        if lp.is_zero() || lq.is_zero() {
            continue;
        }
        let pu = p.substitute_rat(keep, &t).to_uni(elim)?;
        let qu = q.substitute_rat(keep, &t).to_uni(elim)?;
        samples.push((t, uni_resultant(&pu, &qu)));
    }
    let uni = interpolate(&samples);
    Some(uni_to_multi(&uni, keep, p))
}

/// disc_elim(p) = (-1)^(d(d-1)/2) res(p, p')/lc for p in {elim, keep}.
pub fn bivariate_discriminant(p: &MultiPoly, elim: &str, keep: &str) -> Option<MultiPoly> {
    let d = p.degree_in(elim) as usize;
    if d < 2 {
        return None;
    }
    let dk = p.degree_in(keep) as usize;
    let bound = dk * (2 * d - 1);
    let lead = p.lc_in(elim);
    let sign_flip = (d * (d - 1) / 2) % 2 == 1;
    let mut samples: Vec<(Rat, Rat)> = Vec::with_capacity(bound + 1);
    for t in integer_points() {
        if samples.len() > bound {
            break;
        }
        let l = lead.substitute_rat(keep, &t).constant_value()?;
        if l.is_zero() {
            continue;
        }
        let pu = p.substitute_rat(keep, &t).to_uni(elim)?;
        let du = pu.derivative();
        if du.is_zero() {
            return None;
        }
        let res = uni_resultant(&pu, &du);
        let mut v = res / l;
        if sign_flip {
            v = -v;
        }
        samples.push((t, v));
    }
    let uni = interpolate(&samples);
    Some(uni_to_multi(&uni, keep, p))
}

fn uni_to_multi(u: &UniPoly, var: &str, table_from: &MultiPoly) -> MultiPoly {
    let m = MultiPoly::from_uni(u, var);
    let table: Vec<String> = table_from.vars().to_vec();
    if table.iter().any(|v| v == var) {
        m.align_to(&table)
    } else {
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{discriminant, resultant};
    use crate::textform::parse_poly;

    #[test]
    fn uni_resultant_matches_multipoly_route() {
        let vars = &["x"];
        let p = parse_poly("x^3 - 2*x + 5", vars).unwrap();
        let q = parse_poly("2*x^2 + x - 7", vars).unwrap();
        let via_multi = resultant(&p, &q, "x").unwrap().constant_value().unwrap();
        let via_uni = uni_resultant(&p.to_uni("x").unwrap(), &q.to_uni("x").unwrap());
        assert_eq!(via_multi, via_uni);
    }

    #[test]
    fn interpolation_round_trip() {
        use crate::rat::rat_int;
        let p = UniPoly::from_ints(&[3, -2, 0, 7]);
        let pts: Vec<(Rat, Rat)> = (0..5)
            .map(|k| {
                let x = rat_int(k - 2);
                (x.clone(), p.eval(&x))
            })
            .collect();
        assert_eq!(interpolate(&pts), p);
    }

    #[test]
    fn bivariate_matches_direct() {
        let vars = &["x", "y"];
        let p = parse_poly("x^2*y + x - y^2 + 3", vars).unwrap();
        let q = parse_poly("y*x^2 - 2*x + y", vars).unwrap();
        let direct = resultant(&p, &q, "x").unwrap();
        let fast = bivariate_resultant(&p, &q, "x", "y").unwrap();
        assert_eq!(direct, fast);
        let pd = parse_poly("y*x^3 - x + y^2 - 2", vars).unwrap();
        let d_direct = discriminant(&pd, "x").unwrap();
        let d_fast = bivariate_discriminant(&pd, "x", "y").unwrap();
        assert_eq!(d_direct, d_fast);
    }
}

/// Resultant with respect to `elim` for polynomials in up to two further
/// variables, interpolating one parameter at a time.
pub fn resultant_interp(p: &MultiPoly, q: &MultiPoly, elim: &str) -> Option<MultiPoly> {
    let mut others: Vec<String> = Vec::new();
    for v in p.support_vars().union(&q.support_vars()) {
        if v != elim && !others.contains(v) {
            others.push(v.clone());
        }
    }
    match others.len() {
        0 => {
            let r = uni_resultant(&p.to_uni(elim)?, &q.to_uni(elim)?);
            let names: Vec<&str> = p.vars().iter().map(|s| s.as_str()).collect();
            Some(MultiPoly::constant(&names, r))
        }
        1 => bivariate_resultant(p, q, elim, &others[0]),
        2 => {
            let outer = others[0].clone();
            let inner = others[1].clone();
            let bound = p.degree_in(&outer) as usize * q.degree_in(elim) as usize
                + q.degree_in(&outer) as usize * p.degree_in(elim) as usize;
            let p_lead = p.lc_in(elim);
            let q_lead = q.lc_in(elim);
            let mut slices: Vec<(Rat, MultiPoly)> = Vec::new();
            for t in integer_points() {
                if slices.len() > bound {
                    break;
                }
                if p_lead.substitute_rat(&outer, &t).is_zero()
                    || q_lead.substitute_rat(&outer, &t).is_zero()
                {
                    continue;
                }
                let pt = p.substitute_rat(&outer, &t);
                let qt = q.substitute_rat(&outer, &t);
                let r = resultant_interp(&pt, &qt, elim)?;
                slices.push((t, r));
            }
            assemble_slices(&slices, &outer, &inner, p)
        }
        _ => None,
    }
}

/// Discriminant with respect to `elim`, interpolated parameter by
/// parameter; exact for squarefree-in-elim inputs and otherwise equal to
/// the classical formula.
pub fn discriminant_interp(p: &MultiPoly, elim: &str) -> Option<MultiPoly> {
    let d = p.degree_in(elim) as usize;
    if d < 2 {
        return None;
    }
    let mut others: Vec<String> = p
        .support_vars()
        .into_iter()
        .filter(|v| v != elim)
        .collect();
    match others.len() {
        0 => {
            let pu = p.to_uni(elim)?;
            let res = uni_resultant(&pu, &pu.derivative());
            let mut v = res / p.lc_in(elim).constant_value()?;
            if (d * (d - 1) / 2) % 2 == 1 {
                v = -v;
            }
            let names: Vec<&str> = p.vars().iter().map(|s| s.as_str()).collect();
            Some(MultiPoly::constant(&names, v))
        }
        1 => bivariate_discriminant(p, elim, &others[0]),
        2 => {
            let outer = others.remove(0);
            let inner = others.remove(0);
            let bound = p.degree_in(&outer) as usize * (2 * d - 1);
            let lead = p.lc_in(elim);
            let mut slices: Vec<(Rat, MultiPoly)> = Vec::new();
            for t in integer_points() {
                if slices.len() > bound {
                    break;
                }
                if lead.substitute_rat(&outer, &t).is_zero() {
                    continue;
                }
                let pt = p.substitute_rat(&outer, &t);
                if pt.degree_in(elim) as usize != d {
                    continue;
                }
                let r = discriminant_interp(&pt, elim)?;
                slices.push((t, r));
            }
            assemble_slices(&slices, &outer, &inner, p)
        }
        _ => None,
    }
}

/// Coefficient-wise interpolation of univariate-in-`inner` slices taken at
/// `outer` sample points.
fn assemble_slices(
    slices: &[(Rat, MultiPoly)],
    outer: &str,
    inner: &str,
    table_from: &MultiPoly,
) -> Option<MultiPoly> {
    let mut max_deg = 0usize;
    let mut unis: Vec<(Rat, UniPoly)> = Vec::with_capacity(slices.len());
    for (t, s) in slices {
        let u = s.to_uni(inner)?;
        if !u.is_zero() {
            max_deg = max_deg.max(u.degree());
        }
        unis.push((t.clone(), u));
    }
    let table: Vec<String> = table_from.vars().to_vec();
    let mut acc = MultiPoly::zero_with(table.clone());
    let names: Vec<&str> = table.iter().map(|s| s.as_str()).collect();
    for j in 0..=max_deg {
        let pts: Vec<(Rat, Rat)> = unis.iter().map(|(t, u)| (t.clone(), u.coeff(j))).collect();
        let cj = interpolate(&pts);
        if cj.is_zero() {
            continue;
        }
        let cmulti = MultiPoly::from_uni(&cj, outer).align_to(&table);
        let inner_pow = MultiPoly::var(&names, inner).pow(j as u32);
        acc = acc.add(&cmulti.mul(&inner_pow));
    }
    Some(acc)
}

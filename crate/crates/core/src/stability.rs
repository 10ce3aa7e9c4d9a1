//! Stability classification: reduced Jacobian after conservation-law
//! elimination, exact characteristic polynomial, and Routh-Hurwitz
//! counting of right-half-plane eigenvalues.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::model::ModelFile;
use crate::poly::{MultiPoly, UniPoly};
use crate::pointsolve::FixedPointRecord;
use crate::rat::{sign_of, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StabilityError {
    #[error("conservation laws do not solve uniquely for {0:?}")]
    LawsNotSolvable(Vec<String>),
}

/// Jacobian of the conservation-reduced vector field: square matrix of
/// polynomials in the surviving variables and free parameters.
#[derive(Clone, Debug)]
pub struct ReducedJacobian {
    pub surviving: Vec<String>,
    pub entries: Vec<Vec<MultiPoly>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Stable,
    Unstable,
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StabilityVerdict {
    /// Eigenvalues with strictly positive real part, when determined.
    pub rhp_count: Option<usize>,
    pub classification: Classification,
}

impl StabilityVerdict {
    fn undetermined() -> Self {
        StabilityVerdict { rhp_count: None, classification: Classification::Undetermined }
    }

    fn from_count(n: usize) -> Self {
        StabilityVerdict {
            rhp_count: Some(n),
            classification: if n == 0 { Classification::Stable } else { Classification::Unstable },
        }
    }
}

/// Eliminates `eliminate` from the model's value-substituted vector field
/// using the declared conservation laws, then differentiates.  Each
/// eliminated variable must appear in exactly one law with a unit (+-1)
/// coefficient, and the laws are substituted in an order that resolves
/// cross-references.
pub fn reduced_jacobian(
    model: &ModelFile,
    eliminate: &[String],
) -> Result<ReducedJacobian, StabilityError> {
    let table = model.table();
    let names: Vec<&str> = table.iter().map(|s| s.as_str()).collect();
    // match each eliminated variable to a law solving it with coefficient +-1
    let mut formulas: BTreeMap<String, MultiPoly> = BTreeMap::new();
    let mut used = vec![false; model.laws.len()];
    for var in eliminate {
        let mut found = None;
        for (i, law) in model.laws.iter().enumerate() {
            if used[i] {
                continue;
            }
            let lhs = law.lhs.align_to(&table);
            if lhs.degree_in(var) != 1 {
                continue;
            }
            let coeff = lhs.coeffs_in(var).pop().unwrap();
            match coeff.constant_value() {
                Some(c) if c == Rat::from_integer(BigInt::from(1)) || c == Rat::from_integer(BigInt::from(-1)) => {
                    // var = (constant - rest) / coeff
                    let rest = lhs.sub(&coeff.mul(&MultiPoly::var(&names, var)));
                    let konst = MultiPoly::var(&names, &law.constant);
                    let solved = konst.sub(&rest).mul_rat(&(Rat::from_integer(1.into()) / c.clone()));
                    found = Some((i, solved));
                    break;
                }
                _ => {}
            }
        }
        match found {
            Some((i, solved)) => {
                used[i] = true;
                formulas.insert(var.clone(), solved);
            }
            None => return Err(StabilityError::LawsNotSolvable(eliminate.to_vec())),
        }
    }
    // resolve cross-references among the formulas
    let mut resolved: BTreeMap<String, MultiPoly> = BTreeMap::new();
    let mut pending: Vec<String> = eliminate.to_vec();
    let mut guard = 0;
    while !pending.is_empty() {
        guard += 1;
        if guard > eliminate.len() + 2 {
            return Err(StabilityError::LawsNotSolvable(eliminate.to_vec()));
        }
        let current = std::mem::take(&mut pending);
        for var in current {
            let f = &formulas[&var];
            let blocked = eliminate
                .iter()
                .any(|other| other != &var && !resolved.contains_key(other) && f.contains_var(other));
            if blocked {
                pending.push(var);
            } else {
                let mut expr = f.clone();
                for (v, r) in &resolved {
                    expr = expr.substitute_poly(v, r);
                }
                resolved.insert(var, expr);
            }
        }
    }
    // surviving variables keep their declared order
    let surviving: Vec<String> = model
        .vars
        .iter()
        .filter(|v| !eliminate.contains(v))
        .cloned()
        .collect();
    let field = model.odes_with_values();
    let mut reduced_field = Vec::new();
    for (var, rhs) in model.vars.iter().zip(&field) {
        if eliminate.contains(var) {
            continue;
        }
        let mut f = rhs.clone();
        for (v, r) in &resolved {
            f = f.substitute_poly(v, r);
        }
        reduced_field.push(f);
    }
    let entries = reduced_field
        .iter()
        .map(|f| surviving.iter().map(|v| f.derivative(v)).collect())
        .collect();
    Ok(ReducedJacobian { surviving, entries })
}

/// Exact characteristic polynomial det(lambda I - J(point)) via the
/// Faddeev-LeVerrier recurrence over Q.
pub fn char_poly(j: &ReducedJacobian, point: &BTreeMap<String, Rat>) -> UniPoly {
    let a: Vec<Vec<Rat>> = j
        .entries
        .iter()
        .map(|row| row.iter().map(|p| p.eval(point)).collect())
        .collect();
    char_poly_matrix(&a)
}

/// Faddeev-LeVerrier on a rational matrix.
pub fn char_poly_matrix(a: &[Vec<Rat>]) -> UniPoly {
    let n = a.len();
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = Rat::from_integer(1.into());
    let mut m: Vec<Vec<Rat>> = vec![vec![Rat::zero(); n]; n]; // M_0 = 0
    let mut c = Rat::from_integer(1.into());
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = mat_mul(a, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &c;
        }
        let am = mat_mul(a, &next);
        let trace: Rat = (0..n).map(|i| am[i][i].clone()).sum();
        c = -trace / Rat::from_integer(BigInt::from(k as i64));
        coeffs[n - k] = c.clone();
        m = next;
    }
    UniPoly::new(coeffs)
}

fn mat_mul(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let n = a.len();
    let mut out = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

enum TableOutcome {
    Count(usize),
    /// Zero leading entry in a nonzero row; an exact retry with an extra
    /// left-half-plane factor resolves it.
    ZeroEntry,
    /// A symmetric (origin- or axis-) factor put roots on the imaginary
    /// axis: stability is genuinely undecidable by sign counting.
    Boundary,
}

/// First-column sign changes of the Routh table.  An all-zero row is
/// replaced by the derivative of its auxiliary polynomial (exact classical
/// completion); the auxiliary is checked for imaginary-axis roots, which
/// make the verdict Boundary.
fn routh_table(q: &UniPoly) -> TableOutcome {
    let n = q.degree();
    // two interleaved rows of the table, highest power first
    let mut row0: Vec<Rat> = Vec::new();
    let mut row1: Vec<Rat> = Vec::new();
    for (i, c) in q.coeffs().iter().rev().enumerate() {
        if i % 2 == 0 {
            row0.push(c.clone());
        } else {
            row1.push(c.clone());
        }
    }
    row1.resize(row0.len(), Rat::zero());
    let mut first_col = vec![row0[0].clone()];
    while first_col.len() < n + 1 {
        if row1.iter().all(|c| c.is_zero()) {
            // auxiliary polynomial A(s) from row0 at power p
            let p = n + 1 - first_col.len();
            // A = sum_j row0[j] s^(p-2j) = s^(p mod 2) * B(s^2)
            let half = p / 2;
            let b_coeffs: Vec<Rat> = (0..=half)
                .map(|i| row0.get(half - i).cloned().unwrap_or_else(Rat::zero))
                .collect();
            let b = UniPoly::new(b_coeffs); // B(t), lowest degree first
            if p % 2 == 1 {
                return TableOutcome::Boundary; // s = 0 root
            }
            if !b.is_zero()
                && crate::realroots::count_roots_half_open(
                    &b,
                    crate::realroots::Bound::NegInf,
                    crate::realroots::Bound::At(&Rat::zero()),
                ) > 0
            {
                return TableOutcome::Boundary; // t <= 0 root: imaginary pair
            }
            // replace the row with A'(s)
            for (j, c) in row0.clone().iter().enumerate() {
                let power = p as i64 - 2 * j as i64;
                row1[j] = if power >= 1 {
                    c * Rat::from_integer(BigInt::from(power))
                } else {
                    Rat::zero()
                };
            }
            if row1.iter().all(|c| c.is_zero()) {
                return TableOutcome::Boundary;
            }
        }
        if row1[0].is_zero() {
            return TableOutcome::ZeroEntry;
        }
        first_col.push(row1[0].clone());
        let mut next = Vec::with_capacity(row1.len());
        for j in 0..row1.len() - 1 {
            let a = row0.get(j + 1).cloned().unwrap_or_else(Rat::zero);
            let b = row1.get(j + 1).cloned().unwrap_or_else(Rat::zero);
            next.push(&a - &(&row0[0] / &row1[0]) * &b);
        }
        next.push(Rat::zero());
        row0 = std::mem::replace(&mut row1, next);
    }
    let mut count = 0;
    let mut last = 0;
    for c in &first_col {
        let s = sign_of(c);
        if s == 0 {
            return TableOutcome::ZeroEntry;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    TableOutcome::Count(count)
}

/// Routh-Hurwitz: counts roots with strictly positive real part by sign
/// changes in the first column of the Routh table.  A singular table is
/// retried after multiplying by (lambda + c) for small positive c -- an
/// exact identity that adds one left-half-plane root and perturbs the
/// table; persistent degeneracy (imaginary-axis or origin-symmetric
/// factors) yields an undetermined verdict.
pub fn rhp_count(p: &UniPoly) -> StabilityVerdict {
    if p.is_zero() {
        return StabilityVerdict::undetermined();
    }
    if p.degree() == 0 {
        return StabilityVerdict::from_count(0);
    }
    let mut q = p.integer_primitive();
    if sign_of(q.leading()) < 0 {
        q = q.neg();
    }
    for c in 0i64..=4 {
        let aug = if c == 0 {
            q.clone()
        } else {
            q.mul(&UniPoly::new(vec![Rat::from_integer(BigInt::from(c)), Rat::from_integer(1.into())]))
        };
        match routh_table(&aug) {
            TableOutcome::Count(n) => return StabilityVerdict::from_count(n),
            TableOutcome::Boundary => return StabilityVerdict::undetermined(),
            TableOutcome::ZeroEntry => {}
        }
    }
    StabilityVerdict::undetermined()
}

/// Classifies each record by evaluating the Jacobian at rational points of
/// its enclosure box.  The verdict must agree at the box midpoint and at
/// the two quarter points; otherwise the record is re-enclosed through the
/// elimination trace at a tighter tolerance and the check retried, up to
/// `budget` rounds.
pub fn classify_fixed_points(
    records: &mut [FixedPointRecord],
    rs: &crate::elimination::ReducedSystem,
    j: &ReducedJacobian,
    params: &BTreeMap<String, Rat>,
    budget: usize,
) {
    for rec in records.iter_mut() {
        rec.stability = Some(classify_one(rec, rs, j, params, budget));
    }
}

fn verdict_at(
    j: &ReducedJacobian,
    params: &BTreeMap<String, Rat>,
    enclosures: &BTreeMap<String, crate::interval::RatInterval>,
    which: i32,
) -> StabilityVerdict {
    let quarter = Rat::new(BigInt::from(1), BigInt::from(4));
    let half = Rat::new(BigInt::from(1), BigInt::from(2));
    let mut point: BTreeMap<String, Rat> = params.clone();
    for (var, iv) in enclosures {
        let w = iv.width();
        let v = match which {
            -1 => &iv.lo + &w * &quarter,
            1 => &iv.hi - &w * &quarter,
            _ => &iv.lo + &w * &half,
        };
        point.insert(var.clone(), v);
    }
    rhp_count(&char_poly(j, &point))
}

fn classify_one(
    rec: &FixedPointRecord,
    rs: &crate::elimination::ReducedSystem,
    j: &ReducedJacobian,
    params: &BTreeMap<String, Rat>,
    budget: usize,
) -> StabilityVerdict {
    let mut enclosures = rec.enclosures.clone();
    let mut tol = enclosures
        .values()
        .map(|iv| iv.width())
        .max()
        .unwrap_or_else(Rat::zero);
    let ten = Rat::from_integer(BigInt::from(10));
    for _round in 0..=budget {
        let verdicts: Vec<StabilityVerdict> =
            [0i32, -1, 1].iter().map(|&w| verdict_at(j, params, &enclosures, w)).collect();
        let all_same = verdicts
            .iter()
            .all(|v| v.rhp_count.is_some() && v.rhp_count == verdicts[0].rhp_count);
        if all_same {
            return verdicts[0];
        }
        // tighten the true enclosure through the trace and retry
        tol /= &ten;
        match crate::elimination::back_substitute(&rs.trace, &rec.assignment, &tol, 256) {
            Ok(out) => enclosures = out.intervals,
            Err(_) => return StabilityVerdict::undetermined(),
        }
    }
    StabilityVerdict::undetermined()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_model;
    use crate::rat::{rat, rat_int};

    #[test]
    fn routh_basic() {
        // lambda + 1: stable
        let v = rhp_count(&UniPoly::from_ints(&[1, 1]));
        assert_eq!(v.rhp_count, Some(0));
        assert_eq!(v.classification, Classification::Stable);
        // lambda - 1: one unstable root
        let v = rhp_count(&UniPoly::from_ints(&[-1, 1]));
        assert_eq!(v.rhp_count, Some(1));
        // lambda^2 + 1: imaginary-axis pair, degenerate table
        let v = rhp_count(&UniPoly::from_ints(&[1, 0, 1]));
        assert_eq!(v.classification, Classification::Undetermined);
    }

    #[test]
    fn routh_products_random() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..200 {
            let deg = rng.gen_range(1..=7);
            let flips = rng.gen_range(0..=deg);
            let mut p = UniPoly::constant(rat_int(1));
            for i in 0..deg {
                let a = rat_int(rng.gen_range(1..=9));
                let root_factor = if i < flips {
                    UniPoly::new(vec![-a, rat_int(1)]) // root +a: unstable
                } else {
                    UniPoly::new(vec![a, rat_int(1)]) // root -a: stable
                };
                p = p.mul(&root_factor);
            }
            let v = rhp_count(&p);
            assert_eq!(v.rhp_count, Some(flips), "degree {deg} flips {flips}");
        }
    }

    #[test]
    fn char_poly_identities() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..25 {
            let n = 4;
            let a: Vec<Vec<Rat>> = (0..n)
                .map(|_| (0..n).map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=4))).collect())
                .collect();
            let cp = char_poly_matrix(&a);
            assert_eq!(cp.degree(), n);
            // c_{n-1} = -trace
            let trace: Rat = (0..n).map(|i| a[i][i].clone()).sum();
            assert_eq!(cp.coeff(n - 1), -trace);
            // c_0 = (-1)^n det, det by cofactor expansion
            let det = det_minors(&a);
            let sign = if n % 2 == 0 { rat_int(1) } else { rat_int(-1) };
            assert_eq!(cp.coeff(0), sign * det);
        }
    }

    fn det_minors(a: &[Vec<Rat>]) -> Rat {
        let n = a.len();
        if n == 1 {
            return a[0][0].clone();
        }
        let mut acc = Rat::zero();
        for j in 0..n {
            if a[0][j].is_zero() {
                continue;
            }
            let minor: Vec<Vec<Rat>> = (1..n)
                .map(|i| {
                    (0..n)
                        .filter(|c| *c != j)
                        .map(|c| a[i][c].clone())
                        .collect()
                })
                .collect();
            let term = &a[0][j] * &det_minors(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn tiny_systems() {
        // xdot = -x: J = [[-1]], char poly lambda + 1
        let m = parse_model("model t\nvars x\nparams k\node x = 0 - x\nlaw x = k\n").unwrap();
        let j = reduced_jacobian(&m, &[]).unwrap();
        assert_eq!(j.entries.len(), 1);
        let cp = char_poly(&j, &[("x".to_string(), rat_int(1))].into_iter().collect());
        assert_eq!(cp, UniPoly::from_ints(&[1, 1]));
        // rotation: x1' = x2, x2' = -x1
        let m2 = parse_model(
            "model r\nvars x1 x2\nparams k\node x1 = x2\node x2 = 0 - x1\nlaw x1 = k\n",
        )
        .unwrap();
        let j2 = reduced_jacobian(&m2, &[]).unwrap();
        let point: BTreeMap<String, Rat> =
            [("x1".to_string(), rat_int(0)), ("x2".to_string(), rat_int(0))]
                .into_iter()
                .collect();
        let cp2 = char_poly(&j2, &point);
        assert_eq!(cp2, UniPoly::from_ints(&[1, 0, 1]));
        assert_eq!(rhp_count(&cp2).classification, Classification::Undetermined);
    }

    #[test]
    fn model26_reduced_jacobian_shape() {
        let m = crate::fixtures::model26();
        let eliminate = vec!["x1".to_string(), "x7".to_string(), "x11".to_string()];
        let j = reduced_jacobian(&m, &eliminate).unwrap();
        assert_eq!(j.entries.len(), 8);
        assert_eq!(j.surviving.len(), 8);
        // entries involve only surviving variables and free parameters
        for row in &j.entries {
            for e in row {
                for v in e.support_vars() {
                    assert!(!eliminate.contains(&v), "entry mentions eliminated {v}");
                }
            }
        }
    }

    #[test]
    fn laws_not_solvable() {
        let m = parse_model(
            "model t\nvars x y\nparams k\node x = y\node y = x\nlaw 2*x + y = k\n",
        )
        .unwrap();
        let err = reduced_jacobian(&m, &["x".to_string()]).unwrap_err();
        assert!(matches!(err, StabilityError::LawsNotSolvable(_)));
    }
}

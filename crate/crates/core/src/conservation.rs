//! Linear first integrals of a polynomial vector field: exact null-space
//! computation on monomial coordinates, plus selection of a nonnegative
//! basis when one exists.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::poly::{Monomial, MultiPoly};
use crate::rat::Rat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConservationError {
    #[error("no nonnegative basis found within the search depth")]
    NoNonnegativeBasis,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    pub rows: Vec<Vec<Rat>>,
}

impl RatMatrix {
    pub fn new(rows: Vec<Vec<Rat>>) -> Self {
        if let Some(w) = rows.first().map(|r| r.len()) {
            assert!(rows.iter().all(|r| r.len() == w), "ragged matrix");
        }
        RatMatrix { rows }
    }

    /// Basis of {c : M c = 0} by fraction-free elimination: rows are scaled
    /// to integers, forward elimination is Bareiss, back substitution is
    /// rational.
    pub fn null_space(&self) -> Vec<Vec<Rat>> {
        let n_cols = match self.rows.first() {
            Some(r) => r.len(),
            None => return vec![],
        };
        // integer rows
        let mut m: Vec<Vec<BigInt>> = self
            .rows
            .iter()
            .map(|row| {
                let mut lcm = BigInt::one();
                for c in row {
                    lcm = lcm.lcm(c.denom());
                }
                row.iter().map(|c| c.numer() * (&lcm / c.denom())).collect()
            })
            .collect();
        let n_rows = m.len();
        let mut pivot_cols: Vec<usize> = Vec::new();
        let mut prev = BigInt::one();
        let mut rank = 0usize;
        for col in 0..n_cols {
            let pivot_row = (rank..n_rows).find(|&r| !m[r][col].is_zero());
            let Some(pr) = pivot_row else { continue };
            m.swap(rank, pr);
            for r in rank + 1..n_rows {
                for c in col + 1..n_cols {
                    let val = (&m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c]) / &prev;
                    m[r][c] = val;
                }
                m[r][col] = BigInt::zero();
            }
            prev = m[rank][col].clone();
            pivot_cols.push(col);
            rank += 1;
            if rank == n_rows {
                break;
            }
        }
        // free columns parameterize the kernel
        let free_cols: Vec<usize> =
            (0..n_cols).filter(|c| !pivot_cols.contains(c)).collect();
        let mut basis = Vec::new();
        for &fc in &free_cols {
            let mut v = vec![Rat::zero(); n_cols];
            v[fc] = Rat::one();
            // back-substitute pivot entries bottom-up
            for (i, &pc) in pivot_cols.iter().enumerate().rev() {
                let mut acc = Rat::zero();
                for c in pc + 1..n_cols {
                    if !m[i][c].is_zero() {
                        acc += Rat::from_integer(m[i][c].clone()) * &v[c];
                    }
                }
                v[pc] = -acc / Rat::from_integer(m[i][pc].clone());
            }
            basis.push(normalize_vector(&v));
        }
        basis
    }
}

/// Integer-primitive form with the first nonzero entry positive.
fn normalize_vector(v: &[Rat]) -> Vec<Rat> {
    let mut lcm = BigInt::one();
    for c in v {
        lcm = lcm.lcm(c.denom());
    }
    let mut ints: Vec<BigInt> = v.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    let mut gcd = BigInt::zero();
    for c in &ints {
        gcd = gcd.gcd(c);
    }
    if !gcd.is_zero() {
        if let Some(first) = ints.iter().find(|c| !c.is_zero()) {
            if first.is_negative() {
                gcd = -gcd;
            }
        }
        for c in &mut ints {
            *c = &*c / &gcd;
        }
    }
    ints.into_iter().map(Rat::from_integer).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConservationLaw {
    /// One coefficient per system variable.
    pub coefficients: Vec<Rat>,
    /// Conserved-total parameter name, when tied to a model declaration.
    pub constant: Option<String>,
}

impl ConservationLaw {
    pub fn support(&self) -> usize {
        self.coefficients.iter().filter(|c| !c.is_zero()).count()
    }
}

/// The monomial-coefficient matrix of the vector field: one row per
/// monomial occurring anywhere, one column per component.
fn monomial_matrix(field: &[MultiPoly], table: &[String]) -> RatMatrix {
    let mut rows: BTreeMap<Monomial, Vec<Rat>> = BTreeMap::new();
    let n = field.len();
    for (i, f) in field.iter().enumerate() {
        let aligned = f.align_to(table);
        for (mono, coeff) in aligned.terms() {
            let row = rows.entry(mono.clone()).or_insert_with(|| vec![Rat::zero(); n]);
            row[i] = coeff.clone();
        }
    }
    RatMatrix::new(rows.into_values().collect())
}

fn shared_table(field: &[MultiPoly]) -> Vec<String> {
    let mut table: Vec<String> = Vec::new();
    for f in field {
        for v in f.vars() {
            if !table.contains(v) {
                table.push(v.clone());
            }
        }
    }
    table
}

/// Basis of the linear first integrals {c : sum_i c_i f_i == 0}, each
/// verified by exact substitution before being returned.
pub fn linear_first_integrals(field: &[MultiPoly]) -> Vec<ConservationLaw> {
    if field.is_empty() {
        return vec![];
    }
    let table = shared_table(field);
    let matrix = monomial_matrix(field, &table);
    let basis = matrix.null_space();
    for v in &basis {
        let mut acc = MultiPoly::zero_with(table.clone());
        for (c, f) in v.iter().zip(field) {
            acc = acc.add(&f.mul_rat(c));
        }
        assert!(acc.is_zero(), "null-space vector failed exact verification");
    }
    basis
        .into_iter()
        .map(|coefficients| ConservationLaw { coefficients, constant: None })
        .collect()
}

/// Selects a basis of the same span with all coefficients nonnegative,
/// searching integer combinations of up to three basis vectors with small
/// coefficients.  Errors rather than returning a wrong answer.
pub fn nonnegative_basis(
    basis: &[ConservationLaw],
) -> Result<Vec<ConservationLaw>, ConservationError> {
    let d = basis.len();
    if d == 0 {
        return Ok(vec![]);
    }
    let n = basis[0].coefficients.len();
    let mut candidates: Vec<Vec<Rat>> = Vec::new();
    let depth = d.min(3);
    let coeff_range: [i64; 4] = [-2, -1, 1, 2];
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    for size in 1..=depth {
        subsets.extend(combinations(d, size));
    }
    for subset in &subsets {
        let mut lambdas = vec![0usize; subset.len()];
        loop {
            let mut v = vec![Rat::zero(); n];
            for (slot, &bi) in subset.iter().enumerate() {
                let lambda = Rat::from_integer(coeff_range[lambdas[slot]].into());
                for (vc, bc) in v.iter_mut().zip(&basis[bi].coefficients) {
                    *vc += &lambda * bc;
                }
            }
            if v.iter().any(|c| !c.is_zero()) && v.iter().all(|c| !c.is_negative()) {
                let norm = normalize_vector(&v);
                if !candidates.contains(&norm) {
                    candidates.push(norm);
                }
            }
            // odometer over coefficient choices
            let mut slot = 0;
            loop {
                if slot == lambdas.len() {
                    break;
                }
                lambdas[slot] += 1;
                if lambdas[slot] < coeff_range.len() {
                    break;
                }
                lambdas[slot] = 0;
                slot += 1;
            }
            if slot == lambdas.len() {
                break;
            }
        }
    }
    // smallest support first, then smallest entries, then lexicographic
    candidates.sort_by_key(|v| {
        let support = v.iter().filter(|c| !c.is_zero()).count();
        let magnitude: BigInt = v.iter().map(|c| c.numer().abs()).sum();
        (support, magnitude, v.iter().map(|c| c.numer().clone()).collect::<Vec<_>>())
    });
    let mut chosen: Vec<Vec<Rat>> = Vec::new();
    for cand in candidates {
        if chosen.len() == d {
            break;
        }
        let mut trial: Vec<Vec<Rat>> = chosen.clone();
        trial.push(cand.clone());
        if rank_of(&trial) == trial.len() {
            chosen.push(cand);
        }
    }
    if chosen.len() != d {
        return Err(ConservationError::NoNonnegativeBasis);
    }
    Ok(chosen
        .into_iter()
        .map(|coefficients| ConservationLaw { coefficients, constant: None })
        .collect())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n || k == 0 {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // advance
        let mut i = k as isize - 1;
        while i >= 0 && idx[i as usize] == i as usize + n - k {
            i -= 1;
        }
        if i < 0 {
            return out;
        }
        idx[i as usize] += 1;
        for j in i as usize + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn rank_of(vectors: &[Vec<Rat>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let mut m: Vec<Vec<Rat>> = vectors.to_vec();
    let n_cols = m[0].len();
    let mut rank = 0;
    for col in 0..n_cols {
        let Some(pr) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pr);
        let pivot = m[rank][col].clone();
        for r in rank + 1..m.len() {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &pivot;
            for c in col..n_cols {
                let sub = &factor * &m[rank][c];
                m[r][c] -= sub;
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Checks that the law is conserved by the field: sum_i c_i f_i == 0.
pub fn verify_law(law: &ConservationLaw, field: &[MultiPoly]) -> bool {
    if law.coefficients.len() != field.len() {
        return false;
    }
    let table = shared_table(field);
    let mut acc = MultiPoly::zero_with(table);
    for (c, f) in law.coefficients.iter().zip(field) {
        acc = acc.add(&f.mul_rat(c));
    }
    acc.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rat::rat_int;

    fn law_from(ints: &[i64]) -> Vec<Rat> {
        ints.iter().map(|c| rat_int(*c)).collect()
    }

    #[test]
    fn two_species_exchange() {
        let vars = &["y"];
        let f = vec![
            MultiPoly::var(vars, "y"),
            MultiPoly::var(vars, "y").neg(),
        ];
        let basis = linear_first_integrals(&f);
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0].coefficients, law_from(&[1, 1]));
        let nn = nonnegative_basis(&basis).unwrap();
        assert_eq!(nn[0].coefficients, law_from(&[1, 1]));
    }

    #[test]
    fn model26_laws() {
        let m = fixtures::model26();
        let field = m.odes_with_values();
        let basis = linear_first_integrals(&field);
        assert_eq!(basis.len(), 3, "model 26 kernel is 3-dimensional");
        let nn = nonnegative_basis(&basis).unwrap();
        // exactly the published 0/1 conservation vectors
        let expected = [
            law_from(&[0, 0, 0, 1, 0, 1, 1, 0, 0, 0, 0]), // x4+x6+x7
            law_from(&[0, 0, 0, 0, 1, 0, 0, 1, 1, 1, 1]), // x5+x8+...+x11
            law_from(&[1, 1, 1, 0, 0, 1, 1, 1, 1, 1, 1]), // x1+x2+x3+x6+...+x11
        ];
        for want in &expected {
            assert!(
                nn.iter().any(|l| &l.coefficients == want),
                "missing law {want:?}"
            );
        }
        assert_eq!(nn.len(), 3);
        for law in &nn {
            assert!(verify_law(law, &field));
        }
    }

    #[test]
    fn model26_laws_symbolic_rates() {
        // the kernel exists already with symbolic k1..k16
        let m = fixtures::model26();
        let basis = linear_first_integrals(&m.odes);
        assert_eq!(basis.len(), 3);
    }

    #[test]
    fn model28_laws() {
        let m = fixtures::model28();
        let field = m.odes_with_values();
        let basis = linear_first_integrals(&field);
        assert_eq!(basis.len(), 3);
        let nn = nonnegative_basis(&basis).unwrap();
        let expected = [
            // x6 + x11 + ... + x16
            law_from(&[0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1]),
            // x5 + x7 + x8 + x9 + x10
            law_from(&[0, 0, 0, 0, 1, 0, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0]),
            // x1+x2+x3+x4+x7+...+x16
            law_from(&[1, 1, 1, 1, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1]),
        ];
        for want in &expected {
            assert!(nn.iter().any(|l| &l.coefficients == want));
        }
    }

    #[test]
    fn nonnegative_from_mixed_span() {
        let basis = vec![
            ConservationLaw { coefficients: law_from(&[1, -1, 0]), constant: None },
            ConservationLaw { coefficients: law_from(&[0, 1, 1]), constant: None },
        ];
        let nn = nonnegative_basis(&basis).unwrap();
        let got: Vec<_> = nn.iter().map(|l| l.coefficients.clone()).collect();
        assert!(got.contains(&law_from(&[1, 0, 1])));
        assert!(got.contains(&law_from(&[0, 1, 1])));
        // brute-force extreme rays of the 2-D cone: directions where one
        // more coordinate becomes tight
        let b1 = law_from(&[1, -1, 0]);
        let b2 = law_from(&[0, 1, 1]);
        let mut rays: Vec<Vec<Rat>> = Vec::new();
        for i in 0..3 {
            // alpha*b1[i] + beta*b2[i] = 0 with (alpha,beta) != 0
            let (alpha, beta) = (b2[i].clone(), -b1[i].clone());
            if alpha.is_zero() && beta.is_zero() {
                continue;
            }
            for sign in [rat_int(1), rat_int(-1)] {
                let v: Vec<Rat> = (0..3)
                    .map(|j| (&alpha * &b1[j] + &beta * &b2[j]) * &sign)
                    .collect();
                if v.iter().any(|c| !c.is_zero()) && v.iter().all(|c| !c.is_negative()) {
                    let n = normalize_vector(&v);
                    if !rays.contains(&n) {
                        rays.push(n);
                    }
                }
            }
        }
        rays.sort();
        let mut got_sorted = got.clone();
        got_sorted.sort();
        assert_eq!(got_sorted, rays, "selection must equal the extreme rays");
    }

    #[test]
    fn dimension_invariant_under_scrambling() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let m = fixtures::model26();
        let mut field = m.odes_with_values();
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for _ in 0..5 {
            field.shuffle(&mut rng);
            // scrambling the rows permutes coefficients but keeps dimension
            assert_eq!(linear_first_integrals(&field).len(), 3);
        }
    }

    #[test]
    fn no_nonnegative_basis_detected() {
        // span{(1,-1)}: no nonnegative vector spans it
        let basis = vec![ConservationLaw {
            coefficients: law_from(&[1, -1]),
            constant: None,
        }];
        assert_eq!(nonnegative_basis(&basis), Err(ConservationError::NoNonnegativeBasis));
    }
}

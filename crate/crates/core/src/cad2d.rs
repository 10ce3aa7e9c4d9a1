//! Two-parameter region solver: eliminate the linear variable from the
//! reduced system, project the resulting core polynomial, build an open
//! cylindrical algebraic decomposition of the parameter plane, classify
//! full-dimensional cells by certified positive-solution counts, and test
//! the boundary conjecture.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::elimination::{back_substitute, Enclosure, Positivity, ReducedSystem};
use crate::poly::{
    discriminant, multi_gcd, resultant, squarefree_part_multi, subresultant_prs, MultiPoly,
    UniPoly,
};
use crate::rat::{simplest_in, Rat};
use num_traits::Signed;
use crate::realroots::{isolate_positive_roots, isolate_real_roots, merge_roots, sign_at, AlgebraicNumber};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CadError {
    #[error("no linear relation in {0} exists for this system")]
    NotLinear(String),
    #[error("projection polynomial vanished identically at a base sample")]
    SpecializationCollapse,
    #[error("unsupported system shape for the region solver")]
    BadShape,
}

/// The triangular core system: a solution formula for the eliminated
/// variable and an eliminated-variable-free core polynomial over the two
/// parameters.
#[derive(Clone, Debug)]
pub struct CorePolynomialSystem {
    pub eliminated: String,
    pub kept: String,
    pub params: Vec<String>,
    /// eliminated = formula_num / formula_den
    pub formula_num: MultiPoly,
    pub formula_den: MultiPoly,
    /// Core polynomial in (kept, params), primitive over Z.
    pub core: MultiPoly,
}

/// Strips monomial content and exactly-dividing candidate factors.
fn strip_known_factors(p: &MultiPoly, candidates: &[MultiPoly]) -> MultiPoly {
    let mut out = p.canonical_scaled();
    if out.is_zero() {
        return out;
    }
    let mono = out.monomial_content();
    if mono.total_degree() > 0 {
        out = out.div_monomial(&mono);
    }
    for c in candidates {
        if c.is_constant() {
            continue;
        }
        let (stripped, _) = out.strip_factor(c);
        out = stripped;
    }
    out.canonical_scaled()
}

/// Derives the triangular system by eliminating `var`: uses an equation
/// already linear in `var` when one exists, otherwise the linear element
/// of the subresultant sequence of the two equations.
pub fn eliminate_linear(
    rs: &ReducedSystem,
    fix: &BTreeMap<String, Rat>,
    var: &str,
) -> Result<CorePolynomialSystem, CadError> {
    if rs.equations.len() != 2 {
        return Err(CadError::BadShape);
    }
    let kept = rs
        .positive_vars
        .iter()
        .find(|v| v.as_str() != var)
        .ok_or(CadError::BadShape)?
        .clone();
    let params: Vec<String> = rs
        .positive_params
        .iter()
        .filter(|p| !fix.contains_key(*p))
        .cloned()
        .collect();
    let specialized: Vec<MultiPoly> = rs
        .equations
        .iter()
        .map(|eq| {
            let mut p = eq.clone();
            for (k, v) in fix {
                p = p.substitute_rat(k, v);
            }
            p.canonical_scaled()
        })
        .collect();
    let (e1, e2) = (&specialized[0], &specialized[1]);

    // direct case: one input equation is already linear in var
    if let Some(linear) = specialized.iter().find(|p| p.degree_in(var) == 1) {
        let other = specialized
            .iter()
            .find(|p| !std::ptr::eq(*p, linear))
            .unwrap();
        let mut coeffs = linear.coeffs_in(var);
        let den = coeffs.pop().unwrap();
        let num = coeffs
            .pop()
            .unwrap_or_else(|| MultiPoly::zero_with(linear.vars().to_vec()))
            .neg();
        let d = other.degree_in(var);
        let parts = other.coeffs_in(var);
        let mut core = MultiPoly::zero_with(other.vars().to_vec());
        for (j, part) in parts.iter().enumerate() {
            let mut term = part.clone();
            for _ in 0..j {
                term = term.mul(&num);
            }
            for _ in j..d as usize {
                term = term.mul(&den);
            }
            core = core.add(&term);
        }
        let core = strip_known_factors(&core, &[den.canonical_scaled()]);
        return Ok(CorePolynomialSystem {
            eliminated: var.to_string(),
            kept,
            params,
            formula_num: num,
            formula_den: den,
            core,
        });
    }

    // triangular case: linear subresultant plus the stripped resultant
    let seq = subresultant_prs(e1, e2, var);
    let linear = seq
        .iter()
        .rev()
        .find(|p| p.degree_in(var) == 1)
        .ok_or_else(|| CadError::NotLinear(var.to_string()))?;
    let mut coeffs = linear.coeffs_in(var);
    let den_raw = coeffs.pop().unwrap();
    let num_raw = coeffs
        .pop()
        .unwrap_or_else(|| MultiPoly::zero_with(linear.vars().to_vec()))
        .neg();
    // joint normalization keeps num/den an exact formula
    let joint = multi_gcd(&den_raw, &num_raw);
    let (den, num) = if joint.is_constant() {
        (den_raw, num_raw)
    } else {
        (
            den_raw.divide_exact(&joint).unwrap(),
            num_raw.divide_exact(&joint).unwrap(),
        )
    };
    let res = resultant(e1, e2, var).map_err(|_| CadError::NotLinear(var.to_string()))?;
    if res.is_zero() {
        return Err(CadError::BadShape);
    }
    let den_canon = den.canonical_scaled();
    let core = strip_known_factors(&res, &[den_canon]);
    Ok(CorePolynomialSystem {
        eliminated: var.to_string(),
        kept,
        params,
        formula_num: num,
        formula_den: den,
        core,
    })
}

/// The exclusion locus: res(core, formula denominator) projected to the
/// parameter plane, with monomial and core-coefficient factors removed.
/// For the bundled model this is the square of the published degree-(5,4)
/// polynomial; its squarefree part is returned alongside the raw factor.
pub struct ExclusionFactors {
    /// Squarefree exclusion-locus polynomial.
    pub excluded: MultiPoly,
    /// Raw stripped resultant (a power of `excluded`).
    pub excluded_raw: MultiPoly,
}

fn coefficient_candidates(cps: &CorePolynomialSystem) -> Vec<MultiPoly> {
    let mut cand: Vec<MultiPoly> = cps
        .core
        .coeffs_in(&cps.kept)
        .into_iter()
        .filter(|c| !c.is_zero() && !c.is_constant())
        .map(|c| {
            let sf = squarefree_part_multi(&c);
            let mono = sf.monomial_content();
            sf.div_monomial(&mono).canonical_scaled()
        })
        .collect();
    cand.sort_by_key(|p| (p.total_degree(), p.num_terms()));
    cand.dedup_by(|a, b| a.proportional_to(b).is_some());
    cand
}

pub fn exclusion_factors(cps: &CorePolynomialSystem) -> Result<ExclusionFactors, CadError> {
    let raw = crate::poly::resultant_interp(&cps.core, &cps.formula_den, &cps.kept)
        .or_else(|| resultant(&cps.core, &cps.formula_den, &cps.kept).ok())
        .ok_or(CadError::BadShape)?;
    if raw.is_zero() {
        return Err(CadError::BadShape);
    }
    let stripped = strip_known_factors(&raw, &coefficient_candidates(cps));
    let excluded = if stripped.is_constant() {
        stripped.clone()
    } else {
        // remove repeated factors (one derivative direction suffices here;
        // the second pass covers factors free of the first variable)
        let sf = bivariate_squarefree(&stripped);
        sf
    };
    Ok(ExclusionFactors { excluded, excluded_raw: stripped })
}

/// Squarefree part of a polynomial in at most two variables without the
/// full content recursion: gcd against one partial derivative per variable.
fn bivariate_squarefree(p: &MultiPoly) -> MultiPoly {
    let mut out = p.canonical_scaled();
    for v in p.support_vars() {
        if !out.contains_var(&v) {
            continue;
        }
        let d = out.derivative(&v);
        if d.is_zero() {
            continue;
        }
        let g = multi_gcd(&out, &d);
        if !g.is_constant() {
            out = out.divide_exact(&g).unwrap().canonical_scaled();
        }
    }
    out
}

/// The discriminant-derived boundary factor: disc(core) with monomial
/// content, core-coefficient factors, and the exclusion locus stripped.
/// Falls back to the stripped discriminant when nothing remains.
pub fn derive_boundary(cps: &CorePolynomialSystem) -> Result<MultiPoly, CadError> {
    let disc = core_discriminant(cps)?;
    derive_boundary_from(cps, &disc)
}

/// disc(core) with the interpolation fast path.
pub fn core_discriminant(cps: &CorePolynomialSystem) -> Result<MultiPoly, CadError> {
    crate::poly::discriminant_interp(&cps.core, &cps.kept)
        .or_else(|| discriminant(&cps.core, &cps.kept).ok())
        .ok_or(CadError::BadShape)
}

/// Same, reusing an already computed discriminant.
pub fn derive_boundary_from(
    cps: &CorePolynomialSystem,
    disc: &MultiPoly,
) -> Result<MultiPoly, CadError> {
    let mut candidates = coefficient_candidates(cps);
    let excl = exclusion_factors(cps)?;
    if !excl.excluded_raw.is_constant() {
        candidates.push(excl.excluded_raw.clone());
    }
    if !excl.excluded.is_constant() {
        candidates.push(excl.excluded.clone());
    }
    let stripped = strip_known_factors(disc, &candidates);
    if stripped.is_constant() {
        Ok(strip_known_factors(disc, &coefficient_candidates(cps)))
    } else {
        Ok(stripped)
    }
}

// ---------------------------------------------------------------------------
// projection
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct ProjectionSet {
    pub polys: Vec<MultiPoly>,
}

/// McCallum-style projection of the core system onto the parameter plane:
/// coefficients of the core, its discriminant (split into the exclusion
/// and boundary factors), resultants with the extras, and the parameter
/// axes.  Every entry is primitive with known subfactors split off, and
/// entries are pairwise coprime.
pub fn project(cps: &CorePolynomialSystem, extra: &[MultiPoly]) -> Result<ProjectionSet, CadError> {
    let disc = core_discriminant(cps)?;
    project_with_disc(cps, extra, &disc)
}

pub fn project_with_disc(
    cps: &CorePolynomialSystem,
    extra: &[MultiPoly],
    disc: &MultiPoly,
) -> Result<ProjectionSet, CadError> {
    let kept = &cps.kept;
    let mut raw: Vec<MultiPoly> = Vec::new();
    // Brown-style first projection: with a constant leading coefficient the
    // core keeps full degree everywhere, so the coefficient polynomials are
    // not needed for delineability; otherwise fall back to the McCallum
    // full-coefficient set
    if cps.core.lc_in(kept).is_constant() {
        let trailing = cps.core.coeffs_in(kept).into_iter().next();
        if let Some(t) = trailing {
            if !t.is_zero() && !t.is_constant() {
                raw.push(t);
            }
        }
    } else {
        for c in cps.core.coeffs_in(kept) {
            if !c.is_zero() && !c.is_constant() {
                raw.push(c);
            }
        }
    }
    // discriminant, pre-split into exclusion-locus and boundary factors
    let excl = exclusion_factors(cps)?;
    let boundary = derive_boundary_from(cps, disc)?;
    if !excl.excluded.is_constant() {
        raw.push(excl.excluded.clone());
    }
    if !boundary.is_constant() {
        raw.push(boundary);
    }
    for e in extra {
        if e.contains_var(kept) {
            if let Ok(r) = resultant(&cps.core, e, kept) {
                if !r.is_zero() {
                    raw.push(r);
                }
            }
        } else if !e.is_constant() {
            raw.push(e.clone());
        }
    }
    for p in &cps.params {
        let names: Vec<&str> = cps.core.vars().iter().map(|s| s.as_str()).collect();
        raw.push(MultiPoly::var(&names, p));
    }
    Ok(normalize_projection(raw))
}

/// Primitive parts, cheap squarefree for small entries, cross-factor
/// splitting, gcd-based coprime refinement, deduplication.
fn normalize_projection(raw: Vec<MultiPoly>) -> ProjectionSet {
    let mut polys: Vec<MultiPoly> = Vec::new();
    for p in raw {
        if p.is_zero() || p.is_constant() {
            continue;
        }
        let mut q = p.canonical_scaled();
        let mono = q.monomial_content();
        if mono.total_degree() > 0 {
            // each content variable becomes its own set entry
            let vars = q.vars().to_vec();
            for (i, e) in mono.0.iter().enumerate() {
                if *e > 0 {
                    let names: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
                    polys.push(MultiPoly::var(&names, &vars[i]));
                }
            }
            q = q.div_monomial(&mono).canonical_scaled();
        }
        if q.is_constant() {
            continue;
        }
        if q.total_degree() <= 8 {
            q = squarefree_part_multi(&q);
        }
        if !q.is_constant() {
            polys.push(q);
        }
    }
    // split off any set member that divides another
    loop {
        polys.sort_by_key(|p| (p.total_degree(), p.num_terms()));
        let mut unique: Vec<MultiPoly> = Vec::new();
        for p in polys.drain(..) {
            if p.is_constant() {
                continue;
            }
            if !unique.iter().any(|u| u.proportional_to(&p).is_some()) {
                unique.push(p);
            }
        }
        polys = unique;
        let mut changed = false;
        let snapshot = polys.clone();
        'outer: for (i, p) in snapshot.iter().enumerate() {
            for (j, q) in snapshot.iter().enumerate() {
                if i == j {
                    continue;
                }
                if q.total_degree() < p.total_degree() {
                    let (stripped, k) = p.strip_factor(q);
                    if k > 0 {
                        polys[i] = stripped.canonical_scaled();
                        changed = true;
                        break 'outer;
                    }
                }
                // shared factors between moderate-size pairs
                if i < j && p.total_degree() + q.total_degree() <= 40 && q.total_degree() <= 12 {
                    let g = multi_gcd(p, q);
                    if !g.is_constant()
                        && g.proportional_to(p).is_none()
                        && g.proportional_to(q).is_none()
                    {
                        polys[i] = p.strip_factor(&g).0.canonical_scaled();
                        polys[j] = q.strip_factor(&g).0.canonical_scaled();
                        polys.push(g.canonical_scaled());
                        changed = true;
                        break 'outer;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    polys.retain(|p| !p.is_constant());
    polys.sort_by_key(|p| (p.total_degree(), p.num_terms()));
    ProjectionSet { polys }
}

// ---------------------------------------------------------------------------
// open CAD
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellClass {
    OneSolution,
    Multistationary,
    NotInQuadrant,
    Undetermined,
}

#[derive(Clone, Debug)]
pub struct OpenCadCell {
    pub base_idx: usize,
    pub stack_idx: usize,
    /// Interior rational sample (base, stack).
    pub sample: (Rat, Rat),
    /// Sign of each projection polynomial at the sample.
    pub signs: Vec<i32>,
    pub classification: CellClass,
    /// Positive core roots at the sample, once classified.
    pub positive_roots: Option<usize>,
    /// Solutions surviving positivity transport, once classified.
    pub certified_solutions: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct CadColumn {
    pub base_sample: Rat,
    pub stack_bounds: Vec<AlgebraicNumber>,
    pub cells: Vec<OpenCadCell>,
}

#[derive(Clone, Debug)]
pub struct OpenCad {
    pub base_axis: String,
    pub stack_axis: String,
    pub base_bounds: Vec<AlgebraicNumber>,
    pub columns: Vec<CadColumn>,
}

impl OpenCad {
    pub fn cells(&self) -> impl Iterator<Item = &OpenCadCell> {
        self.columns.iter().flat_map(|c| c.cells.iter())
    }

    pub fn cell_count(&self) -> usize {
        self.columns.iter().map(|c| c.cells.len()).sum()
    }
}

/// Rational sample strictly between two isolated section points.
fn sample_between(lo: &AlgebraicNumber, hi: &AlgebraicNumber) -> Rat {
    let mut a = lo.clone();
    let mut b = hi.clone();
    loop {
        if a.interval().hi < b.interval().lo {
            return simplest_in(&a.interval().hi, &b.interval().lo);
        }
        if a.interval().is_point() && b.interval().is_point() {
            // distinct rationals
            return simplest_in(&a.interval().lo, &b.interval().lo);
        }
        a.bisect();
        b.bisect();
    }
}

fn sample_below(first: &AlgebraicNumber) -> Rat {
    first.interval().lo.floor() - Rat::from_integer(1.into())
}

fn sample_above(last: &AlgebraicNumber) -> Rat {
    last.interval().hi.ceil() + Rat::from_integer(1.into())
}

fn samples_from_bounds(bounds: &[AlgebraicNumber]) -> Vec<Rat> {
    if bounds.is_empty() {
        return vec![Rat::from_integer(0.into())];
    }
    let mut out = Vec::with_capacity(bounds.len() + 1);
    out.push(sample_below(&bounds[0]));
    for w in bounds.windows(2) {
        out.push(sample_between(&w[0], &w[1]));
    }
    out.push(sample_above(&bounds[bounds.len() - 1]));
    out
}

/// Builds the open CAD of the (base, stack) plane for the projection set:
/// full-dimensional cells only, one interior rational sample per cell.
pub fn build_open_cad(
    ps: &ProjectionSet,
    base_axis: &str,
    stack_axis: &str,
) -> Result<OpenCad, CadError> {
    // second projection: polynomials whose base roots bound the cells
    let mut base_raw: Vec<MultiPoly> = Vec::new();
    let stack_polys: Vec<&MultiPoly> =
        ps.polys.iter().filter(|p| p.contains_var(stack_axis)).collect();
    for p in &ps.polys {
        if !p.contains_var(stack_axis) {
            base_raw.push((*p).clone());
        }
    }
    for (i, p) in stack_polys.iter().enumerate() {
        // reduced projection: leading coefficient, discriminant, pairwise
        // resultants; nullification at a base sample is detected during
        // specialization and reported as a collapse
        let lc = p.lc_in(stack_axis);
        if !lc.is_zero() && !lc.is_constant() {
            base_raw.push(lc);
        }
        if p.degree_in(stack_axis) >= 2 {
            let d = crate::poly::bivariate_discriminant(p, stack_axis, base_axis)
                .or_else(|| discriminant(p, stack_axis).ok())
                .ok_or(CadError::BadShape)?;
            if d.is_zero() {
                return Err(CadError::BadShape); // non-squarefree entry
            }
            base_raw.push(d);
        }
        for q in stack_polys.iter().skip(i + 1) {
            let r = crate::poly::bivariate_resultant(p, q, stack_axis, base_axis)
                .or_else(|| resultant(p, q, stack_axis).ok())
                .ok_or(CadError::BadShape)?;
            if r.is_zero() {
                return Err(CadError::BadShape); // entries share a factor
            }
            base_raw.push(r);
        }
    }
    // roots of stack-free projection entries are sections of the input
    // set itself and are never pruned
    let mut protected: Vec<UniPoly> = Vec::new();
    for p in &ps.polys {
        if !p.contains_var(stack_axis) {
            let mono = p.monomial_content();
            let q = p.div_monomial(&mono).canonical_scaled();
            if mono.total_degree() > 0 {
                protected.push(UniPoly::new(vec![
                    Rat::from_integer(0.into()),
                    Rat::from_integer(1.into()),
                ]));
            }
            if !q.is_constant() {
                if let Some(u) = q.to_uni(base_axis) {
                    protected.push(u.squarefree_part());
                }
            }
        }
    }
    // univariate squarefree parts in the base variable
    let mut base_unis: Vec<UniPoly> = Vec::new();
    let mut zero_is_bound = false;
    for p in base_raw {
        let mono = p.monomial_content();
        if mono.total_degree() > 0 {
            zero_is_bound = true; // a monomial factor vanishes on the axis
        }
        let q = p.div_monomial(&mono).canonical_scaled();
        if q.is_constant() {
            continue;
        }
        let uni = q
            .to_uni(base_axis)
            .ok_or(CadError::BadShape)?
            .squarefree_part();
        if uni.degree() >= 1 {
            base_unis.push(uni);
        }
    }
    if zero_is_bound {
        base_unis.push(UniPoly::new(vec![Rat::from_integer(0.into()), Rat::from_integer(1.into())]));
    }
    let root_lists: Vec<Vec<AlgebraicNumber>> = base_unis
        .par_iter()
        .map(|u| isolate_real_roots(u).unwrap_or_default())
        .collect();
    let base_bounds: Vec<AlgebraicNumber> =
        merge_roots(&root_lists).into_iter().map(|(r, _)| r).collect();
    let base_samples = samples_from_bounds(&base_bounds);

    // the real stack-root pattern at each provisional sample: merged roots
    // with the set of projection polynomials owning each
    struct StackInfo {
        bounds: Vec<AlgebraicNumber>,
        owners: Vec<Vec<usize>>,
        /// Owner pattern restricted to strictly positive roots.
        positive_owners: Vec<Vec<usize>>,
    }
    let infos: Vec<Result<StackInfo, CadError>> = base_samples
        .par_iter()
        .map(|s| {
            let mut specialized: Vec<(usize, UniPoly)> = Vec::new();
            for (pi, p) in ps.polys.iter().enumerate() {
                if !p.contains_var(stack_axis) {
                    continue;
                }
                let at = p.substitute_rat(base_axis, s);
                let uni = at.to_uni(stack_axis).ok_or(CadError::BadShape)?;
                if uni.is_zero() {
                    return Err(CadError::SpecializationCollapse);
                }
                if uni.degree() >= 1 {
                    specialized.push((pi, uni.squarefree_part()));
                }
            }
            let lists: Vec<Vec<AlgebraicNumber>> = specialized
                .iter()
                .map(|(_, u)| isolate_real_roots(u).unwrap_or_default())
                .collect();
            let merged = merge_roots(&lists);
            let mut bounds = Vec::with_capacity(merged.len());
            let mut owners = Vec::with_capacity(merged.len());
            let mut positive_owners = Vec::new();
            for (root, owner_rows) in merged {
                let o: Vec<usize> = owner_rows
                    .into_iter()
                    .map(|row| specialized[row].0)
                    .collect();
                if root.sign() > 0 {
                    positive_owners.push(o.clone());
                }
                bounds.push(root);
                owners.push(o);
            }
            Ok(StackInfo { bounds, owners, positive_owners })
        })
        .collect();
    let infos: Vec<StackInfo> = infos.into_iter().collect::<Result<_, _>>()?;

    // prune bounds across which the positive-stack pattern is unchanged:
    // structure can only change at bound points, so equal owner patterns on
    // both neighboring samples certify the section does not affect the
    // upper-quadrant decomposition (complex collisions or sub-axis events)
    let mut kept: Vec<AlgebraicNumber> = Vec::new();
    let mut region_reps: Vec<usize> = vec![0]; // sample index per region
    for (i, bound) in base_bounds.iter().enumerate() {
        let relevant = infos[i].positive_owners != infos[i + 1].positive_owners
            || protected.iter().any(|p| sign_at(p, bound) == 0);
        if relevant {
            kept.push(bound.clone());
            region_reps.push(i + 1);
        }
    }

    let columns: Vec<CadColumn> = region_reps
        .iter()
        .map(|&si| {
            let s = base_samples[si].clone();
            let info = &infos[si];
            let stack_samples = samples_from_bounds(&info.bounds);
            let cells = stack_samples
                .into_iter()
                .enumerate()
                .map(|(idx, t)| {
                    let signs = ps
                        .polys
                        .iter()
                        .map(|p| {
                            let v = p
                                .substitute_rat(base_axis, &s)
                                .substitute_rat(stack_axis, &t)
                                .constant_value()
                                .expect("fully evaluated");
                            crate::rat::sign_of(&v)
                        })
                        .collect::<Vec<_>>();
                    debug_assert!(signs.iter().all(|s| *s != 0), "sample on a section");
                    OpenCadCell {
                        base_idx: 0, // filled below
                        stack_idx: idx,
                        sample: (s.clone(), t),
                        signs,
                        classification: CellClass::Undetermined,
                        positive_roots: None,
                        certified_solutions: None,
                    }
                })
                .collect();
            CadColumn {
                base_sample: s,
                stack_bounds: info.bounds.clone(),
                cells,
            }
        })
        .collect();

    let mut cad = OpenCad {
        base_axis: base_axis.to_string(),
        stack_axis: stack_axis.to_string(),
        base_bounds: kept,
        columns,
    };
    for (bi, col) in cad.columns.iter_mut().enumerate() {
        for cell in &mut col.cells {
            cell.base_idx = bi;
        }
    }
    Ok(cad)
}

// ---------------------------------------------------------------------------
// classification
// ---------------------------------------------------------------------------

/// Counts certified all-positive solutions of the triangular system at one
/// rational parameter point, transporting positivity through the trace.
/// Returns (positive core roots, certified solutions), or None when the
/// point is degenerate for this route.
pub fn count_solutions_at(
    cps: &CorePolynomialSystem,
    rs: &ReducedSystem,
    fix: &BTreeMap<String, Rat>,
    point: &BTreeMap<String, Rat>,
    reduced_eqs: &[MultiPoly],
) -> Option<(usize, usize)> {
    let mut core_at = cps.core.clone();
    let mut num_at = cps.formula_num.clone();
    let mut den_at = cps.formula_den.clone();
    for (k, v) in point {
        core_at = core_at.substitute_rat(k, v);
        num_at = num_at.substitute_rat(k, v);
        den_at = den_at.substitute_rat(k, v);
    }
    let core_uni = core_at.to_uni(&cps.kept)?;
    if core_uni.is_zero() {
        return None;
    }
    let num_uni = num_at.to_uni(&cps.kept)?;
    let den_uni = den_at.to_uni(&cps.kept)?;
    let roots = isolate_positive_roots(&core_uni).ok()?;
    let positive_roots = roots.len();
    // specialized reduced equations for exact membership certificates
    let eq_coeffs: Vec<Vec<UniPoly>> = reduced_eqs
        .iter()
        .map(|eq| {
            let mut p = eq.clone();
            for (k, v) in point {
                p = p.substitute_rat(k, v);
            }
            p.coeffs_in(&cps.eliminated)
                .into_iter()
                .map(|c| c.to_uni(&cps.kept).unwrap_or_else(UniPoly::zero))
                .collect()
        })
        .collect();
    let mut certified = 0usize;
    for root in &roots {
        let sd = sign_at(&den_uni, root);
        if sd == 0 {
            return None; // formula blind spot at this sample
        }
        let sn = sign_at(&num_uni, root);
        if sn * sd <= 0 {
            continue; // eliminated coordinate not positive
        }
        // membership: both reduced equations vanish at (num/den, root)
        let mut genuine = true;
        for coeffs in &eq_coeffs {
            if coeffs.len() <= 1 {
                continue;
            }
            let d = coeffs.len() - 1;
            let mut acc = UniPoly::zero();
            for (j, c) in coeffs.iter().enumerate() {
                let mut term = c.clone();
                for _ in 0..j {
                    term = term.mul(&num_uni);
                }
                for _ in j..d {
                    term = term.mul(&den_uni);
                }
                acc = acc.add(&term);
            }
            if sign_at(&acc, root) != 0 {
                genuine = false;
                break;
            }
        }
        if !genuine {
            continue;
        }
        // transport positivity to every original variable
        let mut assignment: BTreeMap<String, Enclosure> = BTreeMap::new();
        for (k, v) in fix.iter().chain(point.iter()) {
            assignment.insert(k.clone(), Enclosure::Exact(v.clone()));
        }
        assignment.insert(cps.kept.clone(), Enclosure::Root(root.clone()));
        assignment.insert(
            cps.eliminated.clone(),
            Enclosure::RootFraction {
                root: root.clone(),
                num: num_uni.clone(),
                den: den_uni.clone(),
            },
        );
        let tol = Rat::new(1.into(), 1_000_000.into());
        match back_substitute(&rs.trace, &assignment, &tol, 128) {
            Ok(out) => {
                let all_pos = out
                    .positivity
                    .values()
                    .all(|p| *p == Positivity::Positive);
                if all_pos {
                    certified += 1;
                } else if out.positivity.values().any(|p| *p == Positivity::Undetermined) {
                    return None;
                }
            }
            Err(_) => return None,
        }
    }
    Some((positive_roots, certified))
}

/// Classifies every cell of the open CAD: positive core-root counts plus
/// positivity transport at the cell sample.
pub fn classify_region(
    cad: &mut OpenCad,
    cps: &CorePolynomialSystem,
    rs: &ReducedSystem,
    fix: &BTreeMap<String, Rat>,
) {
    let reduced_eqs: Vec<MultiPoly> = rs
        .equations
        .iter()
        .map(|eq| {
            let mut p = eq.clone();
            for (k, v) in fix {
                p = p.substitute_rat(k, v);
            }
            p
        })
        .collect();
    let base_axis = cad.base_axis.clone();
    let stack_axis = cad.stack_axis.clone();
    let cells: Vec<&mut OpenCadCell> = cad
        .columns
        .iter_mut()
        .flat_map(|c| c.cells.iter_mut())
        .collect();
    cells.into_par_iter().for_each(|cell| {
        let (s, t) = cell.sample.clone();
        if !s.is_positive() || !t.is_positive() {
            cell.classification = CellClass::NotInQuadrant;
            return;
        }
        let mut point = BTreeMap::new();
        point.insert(base_axis.clone(), s);
        point.insert(stack_axis.clone(), t);
        match count_solutions_at(cps, rs, fix, &point, &reduced_eqs) {
            Some((roots, certified)) => {
                cell.positive_roots = Some(roots);
                cell.certified_solutions = Some(certified);
                cell.classification = match certified {
                    0 => CellClass::Undetermined,
                    1 => CellClass::OneSolution,
                    _ => CellClass::Multistationary,
                };
            }
            None => {
                cell.classification = CellClass::Undetermined;
            }
        }
    });
}

/// Re-runs the classification at extra interior samples of a cell; counts
/// and class must be invariant (delineability spot-check).
pub fn spot_check_cell(
    cad: &OpenCad,
    cell: &OpenCadCell,
    cps: &CorePolynomialSystem,
    rs: &ReducedSystem,
    fix: &BTreeMap<String, Rat>,
    ps: &ProjectionSet,
    extras: usize,
) -> bool {
    let reduced_eqs: Vec<MultiPoly> = rs
        .equations
        .iter()
        .map(|eq| {
            let mut p = eq.clone();
            for (k, v) in fix {
                p = p.substitute_rat(k, v);
            }
            p
        })
        .collect();
    // alternative base samples strictly inside the cell's base interval
    let (lo, hi) = base_interval_of(cad, cell);
    let base_points = interior_points(&lo, &hi, &cell.sample.0, extras);
    for u in base_points {
        // rebuild the stack at u and take the same stack index
        let mut lists: Vec<Vec<AlgebraicNumber>> = Vec::new();
        for p in &ps.polys {
            if !p.contains_var(&cad.stack_axis) {
                continue;
            }
            let uni = match p.substitute_rat(&cad.base_axis, &u).to_uni(&cad.stack_axis) {
                Some(u) => u,
                None => return false,
            };
            if uni.is_zero() {
                return false;
            }
            if uni.degree() >= 1 {
                lists.push(
                    isolate_real_roots(&uni.squarefree_part()).unwrap_or_default(),
                );
            }
        }
        let bounds: Vec<AlgebraicNumber> =
            merge_roots(&lists).into_iter().map(|(r, _)| r).collect();
        let samples = samples_from_bounds(&bounds);
        // index among positive bounds is stable over the cell's base
        // interval; the sub-axis count may differ between samples
        let own_nonpos = cad.columns[cell.base_idx]
            .stack_bounds
            .iter()
            .filter(|b| b.sign() <= 0)
            .count();
        if cell.stack_idx < own_nonpos {
            return cell.classification == CellClass::NotInQuadrant;
        }
        let pos_idx = cell.stack_idx - own_nonpos;
        let here_nonpos = bounds.iter().filter(|b| b.sign() <= 0).count();
        let Some(t) = samples.get(here_nonpos + pos_idx).cloned() else {
            return false;
        };
        if !u.is_positive() || !t.is_positive() {
            // cell straddles the quadrant: cannot happen with axis polys in ps
            return cell.classification == CellClass::NotInQuadrant;
        }
        let mut point = BTreeMap::new();
        point.insert(cad.base_axis.clone(), u);
        point.insert(cad.stack_axis.clone(), t);
        match count_solutions_at(cps, rs, fix, &point, &reduced_eqs) {
            Some((roots, certified)) => {
                if Some(roots) != cell.positive_roots
                    || Some(certified) != cell.certified_solutions
                {
                    return false;
                }
            }
            None => return false,
        }
    }
    true
}

fn base_interval_of(cad: &OpenCad, cell: &OpenCadCell) -> (Option<Rat>, Option<Rat>) {
    let i = cell.base_idx;
    let lo = if i == 0 {
        None
    } else {
        let mut r = cad.base_bounds[i - 1].clone();
        r.refine_to(&Rat::new(1.into(), 1024.into()));
        Some(r.interval().hi.clone())
    };
    let hi = if i == cad.base_bounds.len() {
        None
    } else {
        let mut r = cad.base_bounds[i].clone();
        r.refine_to(&Rat::new(1.into(), 1024.into()));
        Some(r.interval().lo.clone())
    };
    (lo, hi)
}

/// Extra rational points strictly inside (lo, hi), distinct from `avoid`.
fn interior_points(lo: &Option<Rat>, hi: &Option<Rat>, avoid: &Rat, n: usize) -> Vec<Rat> {
    let one = Rat::from_integer(1.into());
    let lo_v = lo.clone().unwrap_or_else(|| avoid - Rat::from_integer(16.into()));
    let hi_v = hi.clone().unwrap_or_else(|| avoid + Rat::from_integer(16.into()));
    let width = &hi_v - &lo_v;
    let mut out = Vec::new();
    let mut k = 1;
    while out.len() < n && k < 40 {
        let f = Rat::new((2 * k + 1).into(), (2 * k + 3).into());
        let cand = &lo_v + &width * &f / Rat::from_integer(2.into());
        if &cand > &lo_v && &cand < &hi_v && &cand != avoid {
            out.push(cand);
        }
        k += 1;
        let _ = &one;
    }
    out
}

// ---------------------------------------------------------------------------
// boundary conjecture
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct ProbeResult {
    pub low: (Rat, Rat),
    pub high: (Rat, Rat),
    pub counts: (usize, usize),
    pub boundary_signs: (i32, i32),
}

/// For each probe pair (two parameter points expected to straddle a region
/// edge), records the solution counts from the point solver and the sign of
/// the boundary polynomial at both points.
pub fn boundary_conjecture_check(
    rs: &ReducedSystem,
    boundary: &MultiPoly,
    fix: &BTreeMap<String, Rat>,
    probes: &[((Rat, Rat), (Rat, Rat))],
    axes: (&str, &str),
) -> Vec<ProbeResult> {
    probes
        .iter()
        .map(|(a, b)| {
            let count_at = |pt: &(Rat, Rat)| {
                let mut values = fix.clone();
                values.insert(axes.0.to_string(), pt.0.clone());
                values.insert(axes.1.to_string(), pt.1.clone());
                crate::pointsolve::solve_at_point(rs, &values, &Rat::new(1.into(), 1000.into()))
                    .map(|s| s.count())
                    .unwrap_or(0)
            };
            let sign_of_boundary = |pt: &(Rat, Rat)| {
                let v = boundary
                    .substitute_rat(axes.0, &pt.0)
                    .substitute_rat(axes.1, &pt.1)
                    .constant_value()
                    .expect("boundary fully evaluated");
                crate::rat::sign_of(&v)
            };
            ProbeResult {
                low: a.clone(),
                high: b.clone(),
                counts: (count_at(a), count_at(b)),
                boundary_signs: (sign_of_boundary(a), sign_of_boundary(b)),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textform::parse_poly;

    #[test]
    fn eliminate_linear_direct_case() {
        // {2x - y = 0, y^2 - 4 = 0} eliminating x
        let vars = &["x", "y"];
        let rs = ReducedSystem {
            equations: vec![
                parse_poly("2*x - y", vars).unwrap(),
                parse_poly("y^2 - 4", vars).unwrap(),
            ],
            positive_vars: vec!["x".into(), "y".into()],
            positive_params: vec![],
            extra_positivity: vec![],
            trace: vec![],
        };
        let cps = eliminate_linear(&rs, &BTreeMap::new(), "x").unwrap();
        assert_eq!(cps.kept, "y");
        // formula x = y/2
        assert_eq!(
            cps.formula_num.proportional_to(&parse_poly("y", vars).unwrap()),
            cps.formula_den.constant_value().map(|_| crate::rat::rat_int(1))
        );
        let y24 = parse_poly("y^2 - 4", vars).unwrap();
        assert!(cps.core.proportional_to(&y24).is_some());
        // re-substituting the formula into the linear equation vanishes
        let e1 = &rs.equations[0];
        let parts = e1.coeffs_in("x");
        let check = parts[0].mul(&cps.formula_den).add(&parts[1].mul(&cps.formula_num));
        assert!(check.is_zero());
    }

    #[test]
    fn tiny_open_cad_single_line() {
        // ps = {k17 - 1} over base k17: two base cells, one stack cell each
        let vars = &["k17", "k19"];
        let ps = ProjectionSet {
            polys: vec![parse_poly("k17 - 1", vars).unwrap()],
        };
        let cad = build_open_cad(&ps, "k17", "k19").unwrap();
        assert_eq!(cad.base_bounds.len(), 1);
        assert_eq!(cad.columns.len(), 2);
        assert_eq!(cad.cell_count(), 2);
    }

    #[test]
    fn tiny_open_cad_parabola() {
        // ps = {k19^2 - k17}: base splits at k17=0; stacks of 1 and 3 cells
        let vars = &["k17", "k19"];
        let ps = ProjectionSet {
            polys: vec![parse_poly("k19^2 - k17", vars).unwrap()],
        };
        let cad = build_open_cad(&ps, "k17", "k19").unwrap();
        assert_eq!(cad.base_bounds.len(), 1); // k17 = 0
        assert_eq!(cad.columns.len(), 2);
        let sizes: Vec<usize> = cad.columns.iter().map(|c| c.cells.len()).collect();
        assert_eq!(sizes, vec![1, 3]);
    }

    #[test]
    fn quadratic_projection_example() {
        // project x^2 + b x + c in x over (b, c): {b^2 - 4c, b, c}
        let vars = &["x", "b", "c"];
        let cps = CorePolynomialSystem {
            eliminated: "unused".into(),
            kept: "x".into(),
            params: vec!["b".into(), "c".into()],
            formula_num: MultiPoly::zero(vars),
            formula_den: MultiPoly::constant(vars, crate::rat::rat_int(1)),
            core: parse_poly("x^2 + b*x + c", vars).unwrap(),
        };
        let ps = project(&cps, &[]).unwrap();
        let expect = [
            parse_poly("b^2 - 4*c", &["b", "c"]).unwrap(),
            parse_poly("b", &["b", "c"]).unwrap(),
            parse_poly("c", &["b", "c"]).unwrap(),
        ];
        for e in &expect {
            assert!(
                ps.polys.iter().any(|p| p.proportional_to(e).is_some()),
                "missing projection factor"
            );
        }
    }
}

// ---------------------------------------------------------------------------
// orchestration
// ---------------------------------------------------------------------------

/// Full region analysis for a two-parameter slice: triangular system,
/// projection (with the discriminant computed once and its factors split),
/// open CAD, and cell classification.
pub struct RegionAnalysis {
    pub cps: CorePolynomialSystem,
    pub boundary: MultiPoly,
    pub projection: ProjectionSet,
    pub cad: OpenCad,
}

pub fn analyze_region(
    rs: &ReducedSystem,
    fix: &BTreeMap<String, Rat>,
    base_axis: &str,
) -> Result<RegionAnalysis, CadError> {
    // eliminate the variable in which some equation has the lowest degree;
    // ties pick the first surviving variable
    if rs.positive_vars.len() != 2 {
        return Err(CadError::BadShape);
    }
    let deg_of = |v: &str| {
        rs.equations
            .iter()
            .map(|e| e.degree_in(v))
            .min()
            .unwrap_or(0)
    };
    let (u, v) = (rs.positive_vars[0].clone(), rs.positive_vars[1].clone());
    let var = if deg_of(&v) < deg_of(&u) { v.clone() } else { u.clone() };
    let cps = eliminate_linear(rs, fix, &var)?;
    let disc = core_discriminant(&cps)?;
    let names: Vec<&str> = cps.core.vars().iter().map(|s| s.as_str()).collect();
    let extra = vec![MultiPoly::var(&names, &cps.kept)];
    let projection = project_with_disc(&cps, &extra, &disc)?;
    let boundary = derive_boundary_from(&cps, &disc)?;
    let stack_axis = cps
        .params
        .iter()
        .find(|p| p.as_str() != base_axis)
        .ok_or(CadError::BadShape)?
        .clone();
    let mut cad = build_open_cad(&projection, base_axis, &stack_axis)?;
    classify_region(&mut cad, &cps, rs, fix);
    Ok(RegionAnalysis { cps, boundary, projection, cad })
}

/// Locates the full-dimensional cell containing a rational point, or None
/// when the point lies on a cell boundary.
pub fn locate_cell<'a>(
    cad: &'a OpenCad,
    ps: &ProjectionSet,
    base: &Rat,
    stack: &Rat,
) -> Option<&'a OpenCadCell> {
    use std::cmp::Ordering;
    // the point must not lie on any projection curve
    for p in &ps.polys {
        let v = p
            .substitute_rat(&cad.base_axis, base)
            .substitute_rat(&cad.stack_axis, stack)
            .constant_value()?;
        if v == Rat::from_integer(0.into()) {
            return None;
        }
    }
    let mut base_idx = 0;
    for b in &cad.base_bounds {
        match b.cmp_rat(base) {
            Ordering::Less => base_idx += 1,
            Ordering::Equal => return None,
            Ordering::Greater => break,
        }
    }
    // stack decomposition at the point's own base coordinate
    let mut lists: Vec<Vec<AlgebraicNumber>> = Vec::new();
    for p in &ps.polys {
        if !p.contains_var(&cad.stack_axis) {
            continue;
        }
        let uni = p
            .substitute_rat(&cad.base_axis, base)
            .to_uni(&cad.stack_axis)?;
        if uni.is_zero() {
            return None;
        }
        if uni.degree() >= 1 {
            lists.push(isolate_real_roots(&uni.squarefree_part()).ok()?);
        }
    }
    let bounds: Vec<AlgebraicNumber> =
        merge_roots(&lists).into_iter().map(|(r, _)| r).collect();
    let mut below = 0usize;
    for b in &bounds {
        match b.cmp_rat(stack) {
            Ordering::Less => below += 1,
            Ordering::Equal => return None,
            Ordering::Greater => break,
        }
    }
    let column = cad.columns.get(base_idx)?;
    if stack.is_positive() {
        // quadrant points address cells by their positive-bound index
        let here_nonpos = bounds.iter().filter(|b| b.sign() <= 0).count();
        let own_nonpos = column.stack_bounds.iter().filter(|b| b.sign() <= 0).count();
        let pos_idx = below.checked_sub(here_nonpos)?;
        column.cells.get(own_nonpos + pos_idx)
    } else {
        column.cells.get(below)
    }
}

/// Display shapes for the classified quadrant cells: per-cell columns of
/// (base, stack-lower, stack-upper) approximations, clamped to a viewport
/// derived from the finite section points.
pub fn cell_shapes(analysis: &RegionAnalysis, columns_per_cell: usize) -> Vec<crate::report::CellShape> {
    let cad = &analysis.cad;
    let ps = &analysis.projection;
    let approx = |q: &Rat| -> f64 {
        crate::rat::to_decimal(q, 6).parse().unwrap_or(0.0)
    };
    // viewport: stretch to the largest finite bounds
    let mut max_base: f64 = 100.0;
    for b in &cad.base_bounds {
        max_base = max_base.max(approx(&b.interval().hi) * 1.2);
    }
    let mut max_stack: f64 = 100.0;
    for col in &cad.columns {
        for b in &col.stack_bounds {
            max_stack = max_stack.max(approx(&b.interval().hi) * 1.2);
        }
    }
    let mut shapes = Vec::new();
    for cell in cad.cells() {
        let multistationary = match cell.classification {
            CellClass::Multistationary => true,
            CellClass::OneSolution => false,
            _ => continue,
        };
        let (lo, hi) = base_interval_of(cad, cell);
        let lo_v = lo.as_ref().map(approx).unwrap_or(0.0).max(0.0);
        let hi_v = hi.as_ref().map(approx).unwrap_or(max_base).min(max_base);
        if hi_v <= lo_v {
            continue;
        }
        let mut cols = Vec::new();
        for i in 0..=columns_per_cell {
            let u = lo_v + (hi_v - lo_v) * (i as f64 + 0.5) / (columns_per_cell as f64 + 1.0);
            let u_rat = crate::rat::parse_rat(&format!("{u:.6}")).unwrap();
            let mut lists: Vec<Vec<AlgebraicNumber>> = Vec::new();
            let mut ok = true;
            for p in &ps.polys {
                if !p.contains_var(&cad.stack_axis) {
                    continue;
                }
                match p
                    .substitute_rat(&cad.base_axis, &u_rat)
                    .to_uni(&cad.stack_axis)
                {
                    Some(uni) if !uni.is_zero() => {
                        if uni.degree() >= 1 {
                            lists.push(
                                isolate_real_roots(&uni.squarefree_part()).unwrap_or_default(),
                            );
                        }
                    }
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            let bounds: Vec<AlgebraicNumber> =
                merge_roots(&lists).into_iter().map(|(r, _)| r).collect();
            let lower = if cell.stack_idx == 0 {
                0.0
            } else {
                bounds
                    .get(cell.stack_idx - 1)
                    .map(|b| approx(&b.interval().mid()))
                    .unwrap_or(0.0)
            };
            let upper = bounds
                .get(cell.stack_idx)
                .map(|b| approx(&b.interval().mid()))
                .unwrap_or(max_stack);
            cols.push((u, lower.max(0.0), upper.min(max_stack)));
        }
        if !cols.is_empty() {
            shapes.push(crate::report::CellShape { columns: cols, multistationary });
        }
    }
    shapes
}

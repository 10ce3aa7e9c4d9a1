//! Counting and enclosing all positive solutions of a reduced system at
//! fixed rational parameter values, and (parallel) grid sampling over
//! parameter boxes.
//!
//! At a point the two surviving equations are solved by resultant
//! elimination: isolate the positive roots of the squarefree resultant,
//! recover the partner coordinate from the linear subresultant, certify
//! each candidate by exact sign tests of both equations, then transport
//! positivity through the elimination trace.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::elimination::{back_substitute, Enclosure, Positivity, ReducedSystem};
use crate::interval::RatInterval;
use crate::poly::{resultant, subresultant_prs, MultiPoly, UniPoly};
use crate::rat::Rat;
use crate::realroots::{isolate_positive_roots, sign_at, AlgebraicNumber};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("eliminating resultant vanishes identically: positive-dimensional point")]
    ResultantVanishes,
    #[error("reduced system is not bivariate at this point")]
    NotBivariate,
    #[error("coordinate pairing ambiguous in both elimination orders")]
    PairingAmbiguity,
    #[error("certified solution sits on a tangency (multiple resultant root)")]
    Tangency,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecordPositivity {
    AllPositive,
    Rejected,
    Undetermined,
}

/// A certified steady-state enclosure.
#[derive(Clone, Debug)]
pub struct FixedPointRecord {
    /// Refinable enclosures of the surviving coordinates and parameters.
    pub assignment: BTreeMap<String, Enclosure>,
    /// Interval enclosures for every model variable after trace transport.
    pub enclosures: BTreeMap<String, RatInterval>,
    pub positivity: RecordPositivity,
    /// Filled by the stability pass.
    pub stability: Option<crate::stability::StabilityVerdict>,
}

#[derive(Clone, Debug)]
pub struct PointSolution {
    /// Certified all-positive solutions, ordered by the kept coordinate.
    pub records: Vec<FixedPointRecord>,
    /// Candidates whose positivity could not be decided within budget.
    pub undetermined: usize,
}

impl PointSolution {
    pub fn count(&self) -> usize {
        self.records.len()
    }
}

/// Substitutes the parameter values into the reduced equations.
fn specialize(
    rs: &ReducedSystem,
    values: &BTreeMap<String, Rat>,
) -> Result<(MultiPoly, MultiPoly, String, String), SolveError> {
    if rs.equations.len() != 2 || rs.positive_vars.len() != 2 {
        return Err(SolveError::NotBivariate);
    }
    let mut eqs = Vec::new();
    for eq in &rs.equations {
        let mut p = eq.clone();
        for (k, v) in values {
            p = p.substitute_rat(k, v);
        }
        for v in p.support_vars() {
            if !rs.positive_vars.contains(&v) {
                return Err(SolveError::NotBivariate);
            }
        }
        let p = p.canonical_scaled();
        let p = if p.is_zero() {
            p
        } else {
            let mono = p.monomial_content();
            p.div_monomial(&mono).canonical_scaled()
        };
        eqs.push(p);
    }
    let g2 = eqs.pop().unwrap();
    let g1 = eqs.pop().unwrap();
    if g1.is_zero() || g2.is_zero() {
        return Err(SolveError::ResultantVanishes);
    }
    Ok((g1, g2, rs.positive_vars[0].clone(), rs.positive_vars[1].clone()))
}

/// Candidate coordinate data from one elimination orientation: the
/// squarefree resultant in `kept`, and the linear-subresultant pair
/// (den, num) giving eliminated = num/den at each resultant root.
struct Orientation {
    kept: String,
    eliminated: String,
    resultant_sf: UniPoly,
    resultant_full: UniPoly,
    lin_den: UniPoly,
    lin_num: UniPoly,
    /// Leading coefficients of the equations in the eliminated variable.
    lead_coeffs: Vec<UniPoly>,
    eq_coeffs: Vec<Vec<UniPoly>>, // per equation, coefficients in `eliminated` as polys in `kept`
}

fn orient(
    g1: &MultiPoly,
    g2: &MultiPoly,
    eliminated: &str,
    kept: &str,
) -> Result<Option<Orientation>, SolveError> {
    let res = resultant(g1, g2, eliminated).map_err(|_| SolveError::NotBivariate)?;
    if res.is_zero() {
        return Err(SolveError::ResultantVanishes);
    }
    let res_uni = res.to_uni(kept).ok_or(SolveError::NotBivariate)?;
    let seq = subresultant_prs(g1, g2, eliminated);
    let linear = seq.iter().rev().find(|p| p.degree_in(eliminated) == 1);
    let Some(linear) = linear else {
        return Ok(None); // defective sequence; caller tries the swap
    };
    let mut parts = linear.coeffs_in(eliminated);
    let den = parts.pop().unwrap().to_uni(kept).ok_or(SolveError::NotBivariate)?;
    let num = parts
        .pop()
        .unwrap_or_else(|| MultiPoly::zero_with(linear.vars().to_vec()))
        .neg()
        .to_uni(kept)
        .ok_or(SolveError::NotBivariate)?;
    let mut eq_coeffs = Vec::new();
    for g in [g1, g2] {
        let coeffs = g
            .coeffs_in(eliminated)
            .into_iter()
            .map(|c| c.to_uni(kept).ok_or(SolveError::NotBivariate))
            .collect::<Result<Vec<_>, _>>()?;
        eq_coeffs.push(coeffs);
    }
    let lead_coeffs = eq_coeffs.iter().map(|c| c.last().unwrap().clone()).collect();
    Ok(Some(Orientation {
        kept: kept.to_string(),
        eliminated: eliminated.to_string(),
        resultant_sf: res_uni.squarefree_part(),
        resultant_full: res_uni,
        lin_den: den,
        lin_num: num,
        lead_coeffs,
        eq_coeffs,
    }))
}

/// The equation g with `eliminated := num/den` substituted and cleared:
/// sum_j c_j(kept) num^j den^(d-j).
fn certificate(coeffs: &[UniPoly], num: &UniPoly, den: &UniPoly) -> UniPoly {
    let d = coeffs.len() - 1;
    let mut acc = UniPoly::zero();
    for (j, c) in coeffs.iter().enumerate() {
        let mut term = c.clone();
        for _ in 0..j {
            term = term.mul(num);
        }
        for _ in j..d {
            term = term.mul(den);
        }
        acc = acc.add(&term);
    }
    acc
}

struct Candidate {
    kept_root: AlgebraicNumber,
    kept_name: String,
    elim_name: String,
    num: UniPoly,
    den: UniPoly,
}

/// Certified positive candidates in one orientation, or None when some
/// root hits the linear-subresultant ambiguity.
fn certified_candidates(o: &Orientation) -> Result<Option<Vec<Candidate>>, SolveError> {
    let roots = isolate_positive_roots(&o.resultant_sf).map_err(|_| SolveError::ResultantVanishes)?;
    // tangency guard: certified roots must be simple in the full resultant
    let res_deriv_gcd = o.resultant_full.gcd(&o.resultant_full.derivative());
    let mut out = Vec::new();
    for root in roots {
        let sa = sign_at(&o.lin_den, &root);
        if sa == 0 {
            return Ok(None);
        }
        let sb = sign_at(&o.lin_num, &root);
        // eliminated coordinate num/den must be strictly positive
        if sb * sa <= 0 {
            continue;
        }
        // certification: when some equation keeps full degree at the root,
        // subresultant specialization makes (num/den, root) the exact
        // unique common zero; otherwise fall back to substituting the
        // formula into both equations and testing for exact vanishing
        let degree_preserved = o
            .lead_coeffs
            .iter()
            .any(|lc| sign_at(lc, &root) != 0);
        if !degree_preserved {
            let mut genuine = true;
            for coeffs in &o.eq_coeffs {
                let cert = certificate(coeffs, &o.lin_num, &o.lin_den);
                if sign_at(&cert, &root) != 0 {
                    genuine = false;
                    break;
                }
            }
            if !genuine {
                continue;
            }
        }
        if res_deriv_gcd.degree() > 0 && sign_at(&res_deriv_gcd, &root) == 0 {
            return Err(SolveError::Tangency);
        }
        out.push(Candidate {
            kept_root: root,
            kept_name: o.kept.clone(),
            elim_name: o.eliminated.clone(),
            num: o.lin_num.clone(),
            den: o.lin_den.clone(),
        });
    }
    Ok(Some(out))
}

/// Complete list of strictly positive solutions at one parameter point.
/// `swap_order` eliminates the second surviving variable first; counts must
/// not depend on it.
pub fn solve_at_point_with_order(
    rs: &ReducedSystem,
    values: &BTreeMap<String, Rat>,
    tol: &Rat,
    swap_order: bool,
) -> Result<PointSolution, SolveError> {
    let (g1, g2, u, v) = specialize(rs, values)?;
    // prefer eliminating a variable in which some equation is degree 1
    let degree_one = |name: &str| {
        g1.degree_in(name) == 1 || g2.degree_in(name) == 1
    };
    let (first_elim, first_keep) = if degree_one(&u) && !degree_one(&v) {
        (u.clone(), v.clone())
    } else if degree_one(&v) && !degree_one(&u) {
        (v.clone(), u.clone())
    } else {
        (u.clone(), v.clone())
    };
    let primary = if swap_order {
        (first_keep.clone(), first_elim.clone())
    } else {
        (first_elim.clone(), first_keep.clone())
    };
    let fallback = (primary.1.clone(), primary.0.clone());
    let mut candidates = None;
    for (e, k) in [&primary, &fallback] {
        if let Some(o) = orient(&g1, &g2, e, k)? {
            match certified_candidates(&o)? {
                Some(c) => {
                    candidates = Some(c);
                    break;
                }
                None => continue,
            }
        }
    }
    let Some(candidates) = candidates else {
        return Err(SolveError::PairingAmbiguity);
    };

    let mut records = Vec::new();
    let mut undetermined = 0usize;
    for cand in candidates {
        let mut assignment: BTreeMap<String, Enclosure> = BTreeMap::new();
        for (k, val) in values {
            assignment.insert(k.clone(), Enclosure::Exact(val.clone()));
        }
        assignment.insert(cand.kept_name.clone(), Enclosure::Root(cand.kept_root.clone()));
        assignment.insert(
            cand.elim_name.clone(),
            Enclosure::RootFraction {
                root: cand.kept_root.clone(),
                num: cand.num.clone(),
                den: cand.den.clone(),
            },
        );
        match back_substitute(&rs.trace, &assignment, tol, 128) {
            Ok(out) => {
                let mut all_positive = true;
                let mut any_undetermined = false;
                for (_, p) in out.positivity.iter() {
                    match p {
                        Positivity::Positive => {}
                        Positivity::NonPositive => all_positive = false,
                        Positivity::Undetermined => any_undetermined = true,
                    }
                }
                if all_positive && !any_undetermined {
                    // reduced-system residual check over the enclosures
                    let mut boxes = BTreeMap::new();
                    for (name, iv) in &out.intervals {
                        boxes.insert(name.clone(), iv.clone());
                    }
                    for eq in [&g1, &g2] {
                        let sub: BTreeMap<String, RatInterval> = eq
                            .support_vars()
                            .into_iter()
                            .map(|v| (v.clone(), boxes[&v].clone()))
                            .collect();
                        debug_assert!(eq.interval_eval(&sub).contains_zero());
                    }
                    records.push(FixedPointRecord {
                        assignment,
                        enclosures: out.intervals,
                        positivity: RecordPositivity::AllPositive,
                        stability: None,
                    });
                } else if any_undetermined {
                    undetermined += 1;
                }
                // rejected candidates are dropped: some coordinate is
                // certainly nonpositive
            }
            Err(_) => undetermined += 1,
        }
    }
    Ok(PointSolution { records, undetermined })
}

pub fn solve_at_point(
    rs: &ReducedSystem,
    values: &BTreeMap<String, Rat>,
    tol: &Rat,
) -> Result<PointSolution, SolveError> {
    solve_at_point_with_order(rs, values, tol, false)
}

// ---------------------------------------------------------------------------
// grid sampling
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct SampleRange {
    pub param: String,
    pub start: Rat,
    pub stop: Rat,
    pub step: Rat,
}

impl SampleRange {
    pub fn new(param: &str, start: Rat, stop: Rat, step: Rat) -> Self {
        assert!(step > Rat::from_integer(0.into()), "step must be positive");
        assert!(start <= stop, "range must be nonempty");
        SampleRange { param: param.to_string(), start, stop, step }
    }

    pub fn points(&self) -> Vec<Rat> {
        let mut out = Vec::new();
        let mut x = self.start.clone();
        while x <= self.stop {
            out.push(x.clone());
            x += &self.step;
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointStatus {
    Ok,
    Undetermined,
    Degenerate,
}

#[derive(Clone, Debug)]
pub struct GridPoint {
    /// Swept parameter values, in range order.
    pub coords: Vec<Rat>,
    pub count: usize,
    pub status: PointStatus,
}

#[derive(Clone, Debug)]
pub struct GridResult {
    pub swept: Vec<String>,
    pub points: Vec<GridPoint>,
}

/// One solve per lattice point, in parallel; the output order is the
/// row-major lattice order regardless of scheduling.
pub fn grid_sample(
    rs: &ReducedSystem,
    ranges: &[SampleRange],
    fixed: &BTreeMap<String, Rat>,
    tol: &Rat,
) -> GridResult {
    assert!(
        (1..=3).contains(&ranges.len()),
        "grid sampling sweeps one to three parameters"
    );
    let axes: Vec<Vec<Rat>> = ranges.iter().map(|r| r.points()).collect();
    let mut lattice: Vec<Vec<Rat>> = vec![vec![]];
    for axis in &axes {
        let mut next = Vec::with_capacity(lattice.len() * axis.len());
        for prefix in &lattice {
            for v in axis {
                let mut p = prefix.clone();
                p.push(v.clone());
                next.push(p);
            }
        }
        lattice = next;
    }
    let points: Vec<GridPoint> = lattice
        .par_iter()
        .map(|coords| {
            let mut values = fixed.clone();
            for (r, v) in ranges.iter().zip(coords) {
                values.insert(r.param.clone(), v.clone());
            }
            match solve_at_point(rs, &values, tol) {
                Ok(sol) => GridPoint {
                    coords: coords.clone(),
                    count: sol.count(),
                    status: if sol.undetermined > 0 {
                        PointStatus::Undetermined
                    } else {
                        PointStatus::Ok
                    },
                },
                Err(_) => GridPoint {
                    coords: coords.clone(),
                    count: 0,
                    status: PointStatus::Degenerate,
                },
            }
        })
        .collect();
    GridResult { swept: ranges.iter().map(|r| r.param.clone()).collect(), points }
}

/// CSV, JSON, and scatter-SVG renderings of a grid.
pub fn slice_report(grid: &GridResult) -> (String, String, String) {
    (
        crate::report::grid_csv(grid),
        crate::report::grid_json(grid).to_string(),
        crate::report::grid_scatter_svg(grid),
    )
}

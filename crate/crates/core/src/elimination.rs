//! Graph-guided parametric Gaussian elimination: solve single equations
//! linear in an independent-set variable whose pivot coefficient is
//! sign-definite on the positive orthant, substitute, and keep a trace of
//! solution formulae for back-substitution.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use thiserror::Error;

use crate::interval::RatInterval;
use crate::poly::MultiPoly;
use crate::rat::Rat;
use crate::realroots::AlgebraicNumber;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EliminationError {
    #[error("pivot for {0} is not sign-definite on the positive orthant")]
    CaseSplitRequired(String),
    #[error("no linear sign-definite pivot for remaining variables {0:?}")]
    StuckNoLinearPivot(Vec<String>),
    #[error("system reduced to a nonzero constant equation")]
    Inconsistent,
    #[error("denominator interval straddles zero after refinement budget")]
    DenominatorStraddlesZero,
}

#[derive(Clone, Debug)]
pub struct EliminationStep {
    pub variable: String,
    /// The pivot equation at elimination time.
    pub pivot: MultiPoly,
    /// variable = numerator / denominator on the positive orthant.
    pub numerator: MultiPoly,
    pub denominator: MultiPoly,
    /// Sign of the denominator on the positive orthant: +1 or -1.
    pub pivot_sign: i32,
}

#[derive(Clone, Debug)]
pub struct ReducedSystem {
    pub equations: Vec<MultiPoly>,
    pub positive_vars: Vec<String>,
    pub positive_params: Vec<String>,
    /// Positivity constraints from substitutions that could not be shown
    /// entailed; polynomials required to be > 0.  Empty for the bundled
    /// models.
    pub extra_positivity: Vec<MultiPoly>,
    pub trace: Vec<EliminationStep>,
}

/// Pivot-order tie-break; `Opposite` exists to cross-check that solution
/// counts do not depend on the elimination path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TieBreak {
    Normal,
    Opposite,
}

#[derive(Clone)]
struct TrackedEq {
    poly: MultiPoly,
    /// For equations that entered carrying a free parameter (conservation
    /// laws), the state variables the original statement mentions: the law
    /// may only pivot one of those.
    law_direct: Option<BTreeSet<String>>,
}

/// Cleans one equation: graded canonical scaling, monomial content removed
/// (every indeterminate is positive, so monomial factors never vanish), and
/// exact division by any sign-definite pivot denominator that divides.
fn cleanup(poly: &MultiPoly, dens: &[MultiPoly]) -> MultiPoly {
    let mut p = poly.canonical_scaled();
    if p.is_zero() {
        return p;
    }
    let mono = p.monomial_content();
    if mono.total_degree() > 0 {
        p = p.div_monomial(&mono);
    }
    for d in dens {
        if d.is_constant() {
            continue;
        }
        let (stripped, _) = p.strip_factor(d);
        p = stripped;
    }
    p.canonical_scaled()
}

/// Eliminates every state variable outside `cover` from the system.
/// `state_vars` lists the variables (eliminable indeterminates); every
/// other symbol is treated as a positive parameter.  Variables are
/// processed highest index first (downstream species have the simplest
/// defining equations); each step picks the sign-definite linear pivot
/// equation with the fewest terms.
pub fn gauss_eliminate(
    system: &[MultiPoly],
    state_vars: &[String],
    params: &[String],
    cover: &BTreeSet<String>,
    tie: TieBreak,
) -> Result<ReducedSystem, EliminationError> {
    let mut equations: Vec<TrackedEq> = system
        .iter()
        .map(|p| {
            let scaled = p.canonical_scaled();
            let is_law = params.iter().any(|k| scaled.contains_var(k));
            let law_direct = is_law.then(|| {
                scaled
                    .support_vars()
                    .into_iter()
                    .filter(|v| state_vars.contains(v))
                    .collect()
            });
            TrackedEq { poly: scaled, law_direct }
        })
        .filter(|t| !t.poly.is_zero())
        .collect();
    let mut remaining: Vec<String> = state_vars
        .iter()
        .filter(|v| !cover.contains(*v))
        .cloned()
        .collect();
    let mut trace: Vec<EliminationStep> = Vec::new();
    let mut extra_positivity: Vec<MultiPoly> = Vec::new();
    let mut dens_seen: Vec<MultiPoly> = Vec::new();

    while !remaining.is_empty() {
        let mut best: Option<(usize, usize, usize)> = None; // (terms, var_rank, eq_idx)
        let mut saw_linear_non_definite: Option<String> = None;
        let var_order: Vec<usize> = match tie {
            TieBreak::Normal => (0..remaining.len()).rev().collect(),
            TieBreak::Opposite => (0..remaining.len()).collect(),
        };
        for (rank, &vi) in var_order.iter().enumerate() {
            let var = &remaining[vi];
            for (ei, eq) in equations.iter().enumerate() {
                if eq.poly.degree_in(var) != 1 {
                    continue;
                }
                if let Some(direct) = &eq.law_direct {
                    if !direct.contains(var) {
                        continue;
                    }
                }
                let coeff = eq.poly.coeffs_in(var).pop().unwrap();
                match coeff.orthant_sign() {
                    Some(s) if s != 0 => {
                        let key = (eq.poly.num_terms(), rank, ei);
                        if best.map_or(true, |b| key < b) {
                            best = Some(key);
                        }
                    }
                    _ => saw_linear_non_definite = Some(var.clone()),
                }
            }
        }
        let Some((_, rank, ei)) = best else {
            return Err(match saw_linear_non_definite {
                Some(v) => EliminationError::CaseSplitRequired(v),
                None => EliminationError::StuckNoLinearPivot(remaining),
            });
        };
        let vi = var_order[rank];
        let var = remaining.remove(vi);
        let pivot_eq = equations.remove(ei);
        let pivot = pivot_eq.poly;
        let mut coeffs = pivot.coeffs_in(&var);
        let den = coeffs.pop().unwrap();
        let rest = coeffs.pop().unwrap_or_else(|| MultiPoly::zero_with(pivot.vars().to_vec()));
        let num = rest.neg();
        let pivot_sign = den.orthant_sign().expect("pivot coefficient sign-definite");
        // per-step identity: substituting num/den into the pivot equation
        // yields the zero rational function
        let identity = den.mul(&num).add(&rest.mul(&den));
        assert!(identity.is_zero(), "pivot identity failed for {var}");
        // positivity of the eliminated variable: num/den > 0 on the orthant
        let prod = cleanup(&num.mul(&den), &dens_seen);
        match prod.orthant_sign() {
            Some(1) => {} // entailed by positivity of the remaining symbols
            _ => extra_positivity.push(prod),
        }
        dens_seen.push(den.canonical_scaled());
        // substitute var := num/den into every equation, clearing den
        let mut next: Vec<TrackedEq> = Vec::with_capacity(equations.len());
        for eq in &equations {
            let d = eq.poly.degree_in(&var);
            if d == 0 {
                next.push(eq.clone());
                continue;
            }
            let parts = eq.poly.coeffs_in(&var);
            let mut acc = MultiPoly::zero_with(eq.poly.vars().to_vec());
            for (j, part) in parts.iter().enumerate() {
                let mut term = part.clone();
                for _ in 0..j {
                    term = term.mul(&num);
                }
                for _ in j..d as usize {
                    term = term.mul(&den);
                }
                acc = acc.add(&term);
            }
            let acc = cleanup(&acc, &dens_seen);
            if !acc.is_zero() {
                next.push(TrackedEq { poly: acc, law_direct: eq.law_direct.clone() });
            }
        }
        // drop duplicates up to constant factor
        let mut deduped: Vec<TrackedEq> = Vec::with_capacity(next.len());
        for eq in next {
            if !deduped
                .iter()
                .any(|e| e.poly.proportional_to(&eq.poly).is_some())
            {
                deduped.push(eq);
            }
        }
        equations = deduped;
        trace.push(EliminationStep { variable: var, pivot, numerator: num, denominator: den, pivot_sign });
    }

    for eq in &equations {
        if eq.poly.is_constant() && !eq.poly.is_zero() {
            return Err(EliminationError::Inconsistent);
        }
    }

    let positive_vars: Vec<String> =
        state_vars.iter().filter(|v| cover.contains(*v)).cloned().collect();
    Ok(ReducedSystem {
        equations: equations.into_iter().map(|t| t.poly).collect(),
        positive_vars,
        positive_params: params.to_vec(),
        extra_positivity,
        trace,
    })
}

// ---------------------------------------------------------------------------
// back substitution
// ---------------------------------------------------------------------------

/// A value known exactly, as a fixed interval, or as a refinable algebraic
/// quantity (a root, or a rational function of a root).
#[derive(Clone, Debug)]
pub enum Enclosure {
    Exact(Rat),
    Interval(RatInterval),
    Root(AlgebraicNumber),
    RootFraction {
        root: AlgebraicNumber,
        num: crate::poly::UniPoly,
        den: crate::poly::UniPoly,
    },
}

impl Enclosure {
    pub fn interval(&self) -> Option<RatInterval> {
        match self {
            Enclosure::Exact(r) => Some(RatInterval::point(r.clone())),
            Enclosure::Interval(iv) => Some(iv.clone()),
            Enclosure::Root(a) => Some(a.interval().clone()),
            Enclosure::RootFraction { root, num, den } => {
                let iv = root.interval();
                let n = eval_uni_interval(num, iv);
                let d = eval_uni_interval(den, iv);
                n.div(&d)
            }
        }
    }

    /// One refinement step; false when the enclosure cannot shrink.
    pub fn refine_step(&mut self) -> bool {
        match self {
            Enclosure::Exact(_) | Enclosure::Interval(_) => false,
            Enclosure::Root(a) => {
                if a.interval().is_point() {
                    false
                } else {
                    a.bisect();
                    true
                }
            }
            Enclosure::RootFraction { root, .. } => {
                if root.interval().is_point() {
                    false
                } else {
                    root.bisect();
                    true
                }
            }
        }
    }
}

/// Interval image of a univariate polynomial over an interval.
pub fn eval_uni_interval(p: &crate::poly::UniPoly, iv: &RatInterval) -> RatInterval {
    p.eval_interval(iv)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Positivity {
    Positive,
    NonPositive,
    Undetermined,
}

#[derive(Clone, Debug)]
pub struct BackSubstitution {
    pub intervals: BTreeMap<String, RatInterval>,
    pub positivity: BTreeMap<String, Positivity>,
}

/// Resolves every eliminated variable to an interval enclosure by walking
/// the trace backwards, refining the refinable inputs until all output
/// widths reach `tol` (or the budget runs out).
pub fn back_substitute(
    trace: &[EliminationStep],
    assignment: &BTreeMap<String, Enclosure>,
    tol: &Rat,
    budget: usize,
) -> Result<BackSubstitution, EliminationError> {
    let mut inputs: BTreeMap<String, Enclosure> = assignment.clone();
    let mut last_err = EliminationError::DenominatorStraddlesZero;
    let bits = 128; // relative working precision
    let _ = precision_bits(tol);
    for _round in 0..=budget {
        match back_substitute_once(trace, &inputs, bits) {
            Ok(intervals) => {
                let wide = intervals
                    .iter()
                    .any(|(v, iv)| !assignment.contains_key(v) && iv.width() > *tol);
                // positivity must resolve, not just the widths: an interval
                // straddling zero keeps refining until the budget runs out
                let undecided = intervals.values().any(|iv| {
                    iv.lo <= Rat::zero() && iv.hi > Rat::zero()
                });
                if !wide && !undecided {
                    let positivity = intervals
                        .iter()
                        .map(|(v, iv)| {
                            let p = if iv.lo > Rat::zero() {
                                Positivity::Positive
                            } else if iv.hi <= Rat::zero() {
                                Positivity::NonPositive
                            } else {
                                Positivity::Undetermined
                            };
                            (v.clone(), p)
                        })
                        .collect();
                    return Ok(BackSubstitution { intervals, positivity });
                }
            }
            Err(e) => last_err = e,
        }
        // refine whatever can refine; if nothing can, report best effort
        let mut refined = false;
        for enc in inputs.values_mut() {
            for _ in 0..4 {
                if enc.refine_step() {
                    refined = true;
                }
            }
        }
        if !refined {
            return match back_substitute_once(trace, &inputs, bits) {
                Ok(intervals) => {
                    let positivity = intervals
                        .iter()
                        .map(|(v, iv)| {
                            let p = if iv.lo > Rat::zero() {
                                Positivity::Positive
                            } else if iv.hi <= Rat::zero() {
                                Positivity::NonPositive
                            } else {
                                Positivity::Undetermined
                            };
                            (v.clone(), p)
                        })
                        .collect();
                    Ok(BackSubstitution { intervals, positivity })
                }
                Err(e) => Err(e),
            };
        }
    }
    Err(last_err)
}

/// Fractional bits that keep dyadic rounding error far below `tol`.
fn precision_bits(tol: &Rat) -> u32 {
    let mut bits = 16u32;
    let mut w = Rat::from_integer(1.into());
    let half = Rat::new(1.into(), 2.into());
    while w > *tol && bits < 4096 {
        w *= &half;
        bits += 1;
    }
    bits + 16
}

fn back_substitute_once(
    trace: &[EliminationStep],
    inputs: &BTreeMap<String, Enclosure>,
    bits: u32,
) -> Result<BTreeMap<String, RatInterval>, EliminationError> {
    let mut resolved: BTreeMap<String, RatInterval> = BTreeMap::new();
    for (v, enc) in inputs {
        let iv = enc.interval().ok_or(EliminationError::DenominatorStraddlesZero)?;
        resolved.insert(v.clone(), iv.round_significant(bits));
    }
    for step in trace.iter().rev() {
        let num_iv = step.numerator.interval_eval(&boxes_for(&step.numerator, &resolved)?);
        let den_iv = step.denominator.interval_eval(&boxes_for(&step.denominator, &resolved)?);
        let value = num_iv
            .div(&den_iv)
            .ok_or(EliminationError::DenominatorStraddlesZero)?;
        resolved.insert(step.variable.clone(), value.round_significant(bits));
    }
    Ok(resolved)
}

fn boxes_for(
    p: &MultiPoly,
    resolved: &BTreeMap<String, RatInterval>,
) -> Result<BTreeMap<String, RatInterval>, EliminationError> {
    let mut out = BTreeMap::new();
    for v in p.support_vars() {
        let iv = resolved
            .get(&v)
            .ok_or(EliminationError::DenominatorStraddlesZero)?;
        out.insert(v, iv.clone());
    }
    Ok(out)
}

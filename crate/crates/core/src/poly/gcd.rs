//! Multivariate gcd by primitive subresultant remainder sequences with
//! content recursion, plus squarefree parts built on it.

use super::{resultant::prem, MultiPoly};

/// Content of `p` viewed as univariate in `var`: gcd of its coefficient
/// polynomials (which do not mention `var`).
pub fn content_in(p: &MultiPoly, var: &str) -> MultiPoly {
    let coeffs = p.coeffs_in(var);
    let mut acc: Option<MultiPoly> = None;
    for c in coeffs {
        if c.is_zero() {
            continue;
        }
        acc = Some(match acc {
            None => c,
            Some(g) => multi_gcd(&g, &c),
        });
        if let Some(g) = &acc {
            if g.is_constant() {
                break;
            }
        }
    }
    acc.unwrap_or_else(|| MultiPoly::zero_with(p.vars().to_vec()))
        .canonical_scaled()
}

/// Primitive part with respect to `var`.
pub fn primitive_part_in(p: &MultiPoly, var: &str) -> MultiPoly {
    if p.is_zero() {
        return p.clone();
    }
    let c = content_in(p, var);
    if c.is_constant() {
        return p.canonical_scaled();
    }
    p.divide_exact(&c)
        .expect("content must divide")
        .canonical_scaled()
}

/// gcd over Q[vars], canonical-scaled (integer primitive, positive leading
/// coefficient).  Verified by trial division before returning.
pub fn multi_gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    let g = multi_gcd_inner(a, b, 0);
    debug_assert!(g.divides(a) && g.divides(b), "gcd must divide both inputs");
    g
}

fn multi_gcd_inner(a: &MultiPoly, b: &MultiPoly, depth: usize) -> MultiPoly {
    if a.is_zero() {
        return b.canonical_scaled();
    }
    if b.is_zero() {
        return a.canonical_scaled();
    }
    let ones = |p: &MultiPoly| {
        MultiPoly::constant(
            &p.vars().iter().map(|s| s.as_str()).collect::<Vec<_>>(),
            num_traits::One::one(),
        )
    };
    if a.is_constant() || b.is_constant() {
        return ones(a);
    }
    // main variable: one occurring in both if possible
    let sa = a.support_vars();
    let sb = b.support_vars();
    let shared: Vec<&String> = sa.intersection(&sb).collect();
    if shared.is_empty() {
        return ones(a);
    }
    // prefer the shared variable of smallest combined degree: cheaper PRS
    let var = shared
        .iter()
        .min_by_key(|v| a.degree_in(v) + b.degree_in(v))
        .unwrap()
        .to_string();
    let ca = content_in(a, &var);
    let cb = content_in(b, &var);
    let pa = primitive_part_in(a, &var);
    let pb = primitive_part_in(b, &var);
    let cont_gcd = multi_gcd_inner(&ca, &cb, depth + 1);

    // primitive PRS on the primitive parts
    let (mut f, mut g) = if pa.degree_in(&var) >= pb.degree_in(&var) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    while !g.is_zero() && g.degree_in(&var) > 0 {
        let r = prem(&f, &g, &var);
        f = g;
        g = if r.is_zero() {
            r
        } else {
            primitive_part_in(&r, &var)
        };
    }
    let pp_gcd = if g.is_zero() {
        primitive_part_in(&f, &var)
    } else {
        // nonzero remainder of degree 0: primitive parts are coprime in var
        ones(a)
    };
    cont_gcd.mul(&pp_gcd).canonical_scaled()
}

/// Squarefree part over Q[vars]: same zero set, all factors to the first
/// power.  Recursion: split off the content with respect to a main
/// variable, desquare the primitive part there, and recurse on the
/// variable-free content.
pub fn squarefree_part_multi(p: &MultiPoly) -> MultiPoly {
    assert!(!p.is_zero(), "squarefree part of zero polynomial");
    if p.is_constant() {
        return MultiPoly::constant(
            &p.vars().iter().map(|s| s.as_str()).collect::<Vec<_>>(),
            num_traits::One::one(),
        );
    }
    let var = p.support_vars().into_iter().next().unwrap();
    let cont = content_in(p, &var);
    let pp = primitive_part_in(p, &var);
    let d = pp.derivative(&var);
    let sf_pp = if d.is_zero() {
        pp
    } else {
        let g = multi_gcd(&pp, &d);
        pp.divide_exact(&g).expect("gcd divides")
    };
    let sf_cont = if cont.is_constant() {
        cont
    } else {
        squarefree_part_multi(&cont)
    };
    sf_pp.mul(&sf_cont).canonical_scaled()
}

//! Exact real-root isolation, counting, and refinement over Q.
//!
//! Isolation runs Descartes-style bisection on the squarefree part;
//! counting uses Sturm sequences, which double as the independent oracle
//! for the isolation path.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::interval::RatInterval;
use crate::poly::{PolyError, UniPoly};
use crate::rat::{sign_of, Rat};

/// A real algebraic number: squarefree primitive integer defining
/// polynomial plus an isolating interval.  Either the interval is a single
/// rational point that is a root, or the defining polynomial changes sign
/// between the endpoints and has exactly one root inside.
#[derive(Clone, Debug)]
pub struct AlgebraicNumber {
    defining: UniPoly,
    interval: RatInterval,
}

impl AlgebraicNumber {
    pub fn new(defining: UniPoly, interval: RatInterval) -> Self {
        debug_assert!(!defining.is_zero());
        if interval.is_point() {
            debug_assert_eq!(defining.sign_at(&interval.lo), 0);
        } else {
            debug_assert!(
                defining.sign_at(&interval.lo) * defining.sign_at(&interval.hi) < 0,
                "isolating interval must change sign"
            );
        }
        AlgebraicNumber { defining, interval }
    }

    pub fn from_rational(r: Rat) -> Self {
        let defining = UniPoly::new(vec![-r.clone(), Rat::one()]).canonical();
        AlgebraicNumber { defining, interval: RatInterval::point(r) }
    }

    pub fn defining(&self) -> &UniPoly {
        &self.defining
    }

    pub fn interval(&self) -> &RatInterval {
        &self.interval
    }

    pub fn is_rational(&self) -> bool {
        self.interval.is_point()
    }

    pub fn rational_value(&self) -> Option<&Rat> {
        if self.is_rational() {
            Some(&self.interval.lo)
        } else {
            None
        }
    }

    /// One bisection step; exact midpoint hits collapse to a point.
    pub fn bisect(&mut self) {
        if self.interval.is_point() {
            return;
        }
        let mid = self.interval.mid();
        let s = self.defining.sign_at(&mid);
        if s == 0 {
            self.interval = RatInterval::point(mid);
        } else if s == self.defining.sign_at(&self.interval.lo) {
            self.interval.lo = mid;
        } else {
            self.interval.hi = mid;
        }
    }

    pub fn refine_to(&mut self, width: &Rat) {
        while !self.interval.is_point() && self.interval.width() > *width {
            self.bisect();
        }
    }

    /// Exact sign of the enclosed root.
    pub fn sign(&self) -> i32 {
        if let Some(r) = self.rational_value() {
            return sign_of(r);
        }
        let mut a = self.clone();
        loop {
            if a.interval.lo.is_positive() {
                return 1;
            }
            if a.interval.hi.is_negative() {
                return -1;
            }
            // zero inside: is the root exactly zero?
            if a.defining.eval(&Rat::zero()).is_zero() {
                // the unique root in the interval is 0 only if 0 isolates
                let zero = Rat::zero();
                if a.interval.contains(&zero) {
                    return 0;
                }
            }
            a.bisect();
            if let Some(r) = a.rational_value() {
                return sign_of(r);
            }
        }
    }

    pub fn decimal(&self, digits: usize) -> String {
        let mut a = self.clone();
        let mut width = Rat::one();
        for _ in 0..digits + 2 {
            width /= Rat::from_integer(10.into());
        }
        a.refine_to(&width);
        crate::rat::to_decimal(&a.interval.mid(), digits)
    }

    /// Total order among algebraic numbers; refines both as needed.  The
    /// gcd equality test is deferred behind bisection rounds: distinct
    /// roots usually separate cheaply, and only genuinely equal ones pay
    /// for a gcd.
    pub fn cmp_mut(&mut self, other: &mut AlgebraicNumber) -> Ordering {
        let mut rounds = 0usize;
        loop {
            if self.interval.hi < other.interval.lo {
                return Ordering::Less;
            }
            if other.interval.hi < self.interval.lo {
                return Ordering::Greater;
            }
            if self.is_rational() && other.is_rational() {
                return self.interval.lo.cmp(&other.interval.lo);
            }
            if rounds >= 24 && rounds % 8 == 0 {
                // overlapping: equal iff a shared defining factor has a
                // root in the overlap (then both isolated roots coincide)
                let g = self.defining.gcd(&other.defining);
                if !g.is_zero() && g.degree() > 0 {
                    let overlap_lo = self.interval.lo.clone().max(other.interval.lo.clone());
                    let overlap_hi = self.interval.hi.clone().min(other.interval.hi.clone());
                    if overlap_lo <= overlap_hi
                        && count_roots_closed(&g, &overlap_lo, &overlap_hi) > 0
                    {
                        return Ordering::Equal;
                    }
                }
            }
            self.bisect();
            other.bisect();
            rounds += 1;
        }
    }

    pub fn cmp_rat(&self, r: &Rat) -> Ordering {
        if let Some(v) = self.rational_value() {
            return v.cmp(r);
        }
        let mut a = self.clone();
        loop {
            if &a.interval.lo >= r {
                // root > lo >= r unless root == r == lo (lo is never a root here)
                return Ordering::Greater;
            }
            if &a.interval.hi <= r {
                return Ordering::Less;
            }
            if a.defining.eval(r).is_zero() {
                return Ordering::Equal;
            }
            a.bisect();
            if let Some(v) = a.rational_value() {
                return v.cmp(r);
            }
        }
    }
}

/// Ordered list of pairwise-distinct isolated roots.
pub type RootList = Vec<AlgebraicNumber>;

// ---------------------------------------------------------------------------
// Sturm sequences
// ---------------------------------------------------------------------------

/// Sturm chain of the squarefree part, positive scalings only: remainders
/// come from integer pseudo-division with a sign-corrected multiplier.
pub fn sturm_chain(p: &UniPoly) -> Vec<UniPoly> {
    let sf = p.squarefree_part();
    let mut chain = vec![sf.clone()];
    if sf.degree() == 0 {
        return chain;
    }
    chain.push(sf.derivative().integer_primitive());
    loop {
        let n = chain.len();
        let (a, b) = (&chain[n - 2], &chain[n - 1]);
        if b.is_zero() {
            chain.pop();
            break;
        }
        if b.degree() == 0 {
            break;
        }
        let mut r = a.pseudo_rem(b);
        // pseudo-division multiplied by lc(b)^(delta+1); a negative
        // multiplier flips signs and must be undone
        let delta = a.degree() - b.degree();
        if crate::rat::sign_of(b.leading()) < 0 && (delta + 1) % 2 == 1 {
            r = r.neg();
        }
        if r.is_zero() {
            break;
        }
        chain.push(r.neg().integer_primitive());
    }
    chain
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound<'a> {
    NegInf,
    At(&'a Rat),
    PosInf,
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut count = 0;
    let mut last = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn sign_at_bound(p: &UniPoly, b: Bound) -> i32 {
    match b {
        Bound::NegInf => p.sign_at_neg_inf(),
        Bound::At(x) => p.sign_at(x),
        Bound::PosInf => p.sign_at_pos_inf(),
    }
}

/// Distinct real roots of p in the half-open interval (lo, hi].
pub fn count_roots_half_open(p: &UniPoly, lo: Bound, hi: Bound) -> usize {
    let chain = sturm_chain(p);
    let va = variations(chain.iter().map(|q| sign_at_bound(q, lo)));
    let vb = variations(chain.iter().map(|q| sign_at_bound(q, hi)));
    va.saturating_sub(vb)
}

fn count_roots_closed(p: &UniPoly, lo: &Rat, hi: &Rat) -> usize {
    if lo > hi {
        return 0;
    }
    let sf = p.squarefree_part();
    let mut n = count_roots_half_open(p, Bound::At(lo), Bound::At(hi));
    if sf.eval(lo).is_zero() {
        n += 1;
    }
    n
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Openness {
    Open,
    Closed,
    OpenClosed,
    ClosedOpen,
}

/// Exact count of distinct real roots in the interval.
pub fn count_roots_in(
    p: &UniPoly,
    interval: &RatInterval,
    openness: Openness,
) -> Result<usize, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPoly);
    }
    let sf = p.squarefree_part();
    let mut n = count_roots_half_open(p, Bound::At(&interval.lo), Bound::At(&interval.hi));
    let lo_is_root = sf.eval(&interval.lo).is_zero();
    let hi_is_root = sf.eval(&interval.hi).is_zero();
    match openness {
        Openness::Open => {
            if hi_is_root {
                n -= 1;
            }
        }
        Openness::Closed => {
            if lo_is_root {
                n += 1;
            }
        }
        Openness::OpenClosed => {}
        Openness::ClosedOpen => {
            if lo_is_root {
                n += 1;
            }
            if hi_is_root {
                n -= 1;
            }
        }
    }
    Ok(n)
}

/// Distinct roots in the open ray (0, +inf).
pub fn count_positive_roots(p: &UniPoly) -> Result<usize, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPoly);
    }
    Ok(count_roots_half_open(p, Bound::At(&Rat::zero()), Bound::PosInf))
}

// ---------------------------------------------------------------------------
// Descartes bisection isolation
// ---------------------------------------------------------------------------

/// Sign-variation bound on the number of roots of `q` in the open unit
/// interval (0, 1).
fn descartes_01(q: &UniPoly) -> usize {
    // T(x) = (x+1)^n q(1/(x+1)); roots of q in (0,1) <-> roots of T in (0,inf)
    let t = q.reverse().shift(&Rat::one());
    let (_, t) = t.strip_zero_roots();
    variations(t.coeffs().iter().map(sign_of))
}

fn isolate_01(q: &UniPoly, lo: &Rat, hi: &Rat, out: &mut Vec<RatInterval>) {
    let v = descartes_01(q);
    if v == 0 {
        return;
    }
    if v == 1 {
        out.push(RatInterval::new(lo.clone(), hi.clone()));
        return;
    }
    let half = Rat::new(1.into(), 2.into());
    let mid = (lo + hi) * &half;
    let q_left = q.scale_arg(&half);
    let q_right = q_left.shift(&Rat::one()); // q((x+1)/2)
    if q_right.eval(&Rat::zero()).is_zero() {
        out.push(RatInterval::point(mid.clone()));
    }
    let (_, q_right) = q_right.strip_zero_roots();
    isolate_01(&q_left.integer_primitive(), lo, &mid, out);
    isolate_01(&q_right.integer_primitive(), &mid, hi, out);
}

/// Ensures the invariant "point root or strict sign change with a unique
/// root inside" for an interval holding exactly one root of `sf` in its
/// interior; the endpoints themselves may be other roots and are bisected
/// away.
fn normalize_interval(sf: &UniPoly, mut iv: RatInterval) -> RatInterval {
    loop {
        if iv.is_point() {
            return iv;
        }
        let sl = sf.sign_at(&iv.lo);
        let sh = sf.sign_at(&iv.hi);
        if sl != 0 && sh != 0 {
            debug_assert!(sl * sh < 0);
            return iv;
        }
        let mid = iv.mid();
        if sf.sign_at(&mid) == 0 {
            return RatInterval::point(mid);
        }
        // the unique interior root lies in exactly one open half
        let right = count_roots_half_open(sf, Bound::At(&mid), Bound::At(&iv.hi))
            - usize::from(sf.eval(&iv.hi).is_zero());
        if right == 1 {
            iv.lo = mid;
        } else {
            iv.hi = mid;
        }
    }
}

/// Isolates every distinct real root.  Output sorted ascending with
/// pairwise-disjoint intervals.
pub fn isolate_real_roots(p: &UniPoly) -> Result<RootList, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPoly);
    }
    if p.degree() == 0 {
        return Ok(vec![]);
    }
    let sf = p.squarefree_part();
    if sf.degree() == 0 {
        return Ok(vec![]);
    }
    let (k, q) = sf.strip_zero_roots();
    let mut roots: Vec<AlgebraicNumber> = Vec::new();
    if k > 0 {
        roots.push(AlgebraicNumber::new(sf.clone(), RatInterval::point(Rat::zero())));
    }
    if q.degree() > 0 {
        let bound = q.root_bound_pow2();
        // positive roots: r(x) = q(bound * x) on (0, 1)
        let scaled = q.scale_arg(&bound).integer_primitive();
        let mut ivs = Vec::new();
        isolate_01(&scaled, &Rat::zero(), &Rat::one(), &mut ivs);
        for iv in ivs {
            let mapped = if iv.is_point() {
                RatInterval::point(&iv.lo * &bound)
            } else {
                RatInterval::new(&iv.lo * &bound, &iv.hi * &bound)
            };
            roots.push(AlgebraicNumber::new(sf.clone(), normalize_interval(&sf, mapped)));
        }
        // negative roots: mirror
        let mirrored = q.mirror().scale_arg(&bound).integer_primitive();
        let mut ivs_neg = Vec::new();
        isolate_01(&mirrored, &Rat::zero(), &Rat::one(), &mut ivs_neg);
        for iv in ivs_neg {
            let mapped = if iv.is_point() {
                RatInterval::point(-(&iv.lo * &bound))
            } else {
                RatInterval::new(-(&iv.hi * &bound), -(&iv.lo * &bound))
            };
            roots.push(AlgebraicNumber::new(sf.clone(), normalize_interval(&sf, mapped)));
        }
    }
    roots.sort_by(|a, b| {
        let mut x = a.clone();
        let mut y = b.clone();
        x.cmp_mut(&mut y)
    });
    // same defining polynomial: intervals are already disjoint by Descartes
    Ok(roots)
}

/// Roots strictly greater than zero.
pub fn isolate_positive_roots(p: &UniPoly) -> Result<RootList, PolyError> {
    Ok(isolate_real_roots(p)?
        .into_iter()
        .filter(|r| r.sign() > 0)
        .collect())
}

/// Exact sign of p at the algebraic point a.  Zero is decided by a gcd
/// test; nonzero signs by interval evaluation under refinement.
pub fn sign_at(p: &UniPoly, a: &AlgebraicNumber) -> i32 {
    if p.is_zero() {
        return 0;
    }
    if let Some(r) = a.rational_value() {
        return p.sign_at(r);
    }
    let g = p.gcd(a.defining());
    if g.degree() > 0 && count_roots_closed(&g, &a.interval().lo, &a.interval().hi) > 0 {
        return 0;
    }
    let mut b = a.clone();
    loop {
        if let Some(r) = b.rational_value() {
            return p.sign_at(r);
        }
        if let Some(s) = p.eval_interval(b.interval()).definite_sign() {
            return s;
        }
        b.bisect();
    }
}

/// Merges root lists of several polynomials into one ascending list of
/// distinct roots; returns for each merged root the set of source indices
/// that share it.
pub fn merge_roots(lists: &[RootList]) -> Vec<(AlgebraicNumber, Vec<usize>)> {
    let mut merged: Vec<(AlgebraicNumber, Vec<usize>)> = Vec::new();
    for (src, list) in lists.iter().enumerate() {
        for root in list {
            let mut placed = false;
            let mut insert_at = merged.len();
            for (i, (existing, owners)) in merged.iter_mut().enumerate() {
                let mut r = root.clone();
                match existing.cmp_mut(&mut r) {
                    Ordering::Equal => {
                        owners.push(src);
                        placed = true;
                        break;
                    }
                    Ordering::Greater => {
                        insert_at = i;
                        break;
                    }
                    Ordering::Less => {}
                }
            }
            if !placed {
                merged.insert(insert_at, (root.clone(), vec![src]));
            }
        }
    }
    merged
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    #[test]
    fn isolate_sqrt_two() {
        let p = UniPoly::from_ints(&[-2, 0, 1]);
        let roots = isolate_real_roots(&p).unwrap();
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0].cmp_rat(&rat_int(-1)), Ordering::Less);
        assert_eq!(roots[0].cmp_rat(&rat_int(-2)), Ordering::Greater);
        assert_eq!(roots[1].cmp_rat(&rat_int(1)), Ordering::Greater);
        assert_eq!(roots[1].cmp_rat(&rat_int(2)), Ordering::Less);
        let mut r = roots[1].clone();
        r.refine_to(&rat(1, 1_000_000));
        assert!(r.interval().contains(&rat(14142135, 10000000)));
    }

    #[test]
    fn counts() {
        let p = UniPoly::from_ints(&[-2, 0, 1]);
        assert_eq!(count_positive_roots(&p).unwrap(), 1);
        // (x-1)^2 (x-3): distinct roots in (0,4) = 2
        let q = UniPoly::from_ints(&[-3, 7, -5, 1]);
        assert_eq!(
            count_roots_in(&q, &RatInterval::new(rat_int(0), rat_int(4)), Openness::Open).unwrap(),
            2
        );
        // boundary handling
        assert_eq!(
            count_roots_in(&q, &RatInterval::new(rat_int(1), rat_int(3)), Openness::Open).unwrap(),
            0
        );
        assert_eq!(
            count_roots_in(&q, &RatInterval::new(rat_int(1), rat_int(3)), Openness::Closed)
                .unwrap(),
            2
        );
        assert_eq!(
            count_roots_in(&q, &RatInterval::new(rat_int(1), rat_int(3)), Openness::OpenClosed)
                .unwrap(),
            1
        );
    }

    #[test]
    fn rational_roots_exact() {
        // x (x^2 + 5/2 x - 3/2)(x - 3): roots 0, 1/2, -3, 3
        let p = UniPoly::new(vec![rat_int(0), rat(-3, 2), rat(5, 2), rat_int(1)])
            .mul(&UniPoly::from_ints(&[-3, 1]));
        let roots = isolate_real_roots(&p).unwrap();
        assert_eq!(roots.len(), 4);
        assert!(roots
            .iter()
            .any(|r| r.rational_value() == Some(&rat_int(0))));
        for target in [rat(1, 2), rat_int(-3), rat_int(3)] {
            assert!(
                roots.iter().any(|r| r.cmp_rat(&target) == Ordering::Equal),
                "missing rational root {target}"
            );
        }
    }

    #[test]
    fn sign_at_works() {
        let sqrt2 = isolate_real_roots(&UniPoly::from_ints(&[-2, 0, 1]))
            .unwrap()
            .pop()
            .unwrap();
        assert_eq!(sign_at(&UniPoly::from_ints(&[0, 1]), &sqrt2), 1); // x > 0
        assert_eq!(sign_at(&UniPoly::from_ints(&[-2, 0, 1]), &sqrt2), 0); // x^2-2 = 0
        assert_eq!(sign_at(&UniPoly::from_ints(&[-3, 0, 1]), &sqrt2), -1); // x^2-3 < 0
        // gcd detects the shared factor even inside a product
        let prod = UniPoly::from_ints(&[-2, 0, 1]).mul(&UniPoly::from_ints(&[7, 1]));
        assert_eq!(sign_at(&prod, &sqrt2), 0);
    }

    #[test]
    fn refine_preserves_root() {
        let mut r = isolate_real_roots(&UniPoly::from_ints(&[-2, 0, 1]))
            .unwrap()
            .pop()
            .unwrap();
        let before = r.clone();
        r.refine_to(&rat(1, 1i64 << 40));
        assert!(r.interval().width() <= rat(1, 1i64 << 40));
        assert!(before.interval().lo <= r.interval().lo);
        assert!(r.interval().hi <= before.interval().hi);
        // idempotent at target width
        let w = r.interval().width();
        let mut again = r.clone();
        again.refine_to(&rat(1, 1i64 << 40));
        assert_eq!(again.interval().width(), w);
        // degenerate rational interval unchanged
        let mut exact = AlgebraicNumber::from_rational(rat_int(3));
        exact.refine_to(&rat(1, 1000));
        assert_eq!(exact.interval(), &RatInterval::point(rat_int(3)));
    }

    #[test]
    fn merge_detects_shared_roots() {
        let a = isolate_real_roots(&UniPoly::from_ints(&[-2, 0, 1])).unwrap(); // +-sqrt2
        let b = isolate_real_roots(&UniPoly::from_ints(&[2, -1, 2, -1])).unwrap(); // (x^2+2)(x-... ) check
        // (x-1)(x^2-2) shares sqrt2 with a
        let c = isolate_real_roots(&UniPoly::from_ints(&[2, -2, -1, 1])).unwrap();
        let merged = merge_roots(&[a, c]);
        // roots: -sqrt2 (both), 1 (second), sqrt2 (both)
        assert_eq!(merged.len(), 3);
        assert_eq!(merged[0].1, vec![0, 1]);
        assert_eq!(merged[1].1, vec![1]);
        assert_eq!(merged[2].1, vec![0, 1]);
        let _ = b;
    }

    #[test]
    fn sturm_matches_isolation_on_randoms() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(42);
        for _ in 0..200 {
            let deg = rng.gen_range(1..=9);
            let coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-15..=15)).collect();
            let p = UniPoly::from_ints(&coeffs);
            if p.is_zero() || p.degree() == 0 {
                continue;
            }
            let isolated = isolate_real_roots(&p).unwrap();
            let sturm = count_roots_half_open(&p, Bound::NegInf, Bound::PosInf);
            assert_eq!(isolated.len(), sturm, "count mismatch for {coeffs:?}");
            // every non-degenerate interval has a strict sign change
            for r in &isolated {
                if !r.is_rational() {
                    let sf = p.squarefree_part();
                    assert!(sf.sign_at(&r.interval().lo) * sf.sign_at(&r.interval().hi) < 0);
                }
            }
            // pairwise disjoint and increasing
            for w in isolated.windows(2) {
                assert!(w[0].interval().hi <= w[1].interval().lo || {
                    let mut x = w[0].clone();
                    let mut y = w[1].clone();
                    x.cmp_mut(&mut y) == Ordering::Less
                });
            }
        }
    }
}

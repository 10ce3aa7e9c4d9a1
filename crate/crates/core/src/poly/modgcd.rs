//! Modular univariate gcd over Z (small-prime images plus CRT lifting),
//! with an early exit for the overwhelmingly common coprime case.  Used
//! automatically once operands outgrow the primitive remainder sequence.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::UniPoly;
use crate::rat::Rat;

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    // deterministic Miller-Rabin for u64
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn primes_from(start: u64) -> impl Iterator<Item = u64> {
    (start..).filter(|n| n % 2 == 1 && is_prime_u64(*n))
}

fn reduce_mod(c: &BigInt, p: u64) -> u64 {
    use num_traits::ToPrimitive;
    let m = BigInt::from(p);
    let r = ((c % &m) + &m) % &m;
    r.to_u64().expect("residue fits")
}

/// Monic gcd of two polynomials mod p (coefficient vectors ascending).
fn gcd_mod_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let trim = |v: &mut Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    let mut f = a.to_vec();
    let mut g = b.to_vec();
    trim(&mut f);
    trim(&mut g);
    while !g.is_empty() {
        let glc_inv = inv_mod(*g.last().unwrap(), p);
        while f.len() >= g.len() && !f.is_empty() {
            let shift = f.len() - g.len();
            let factor = mul_mod(*f.last().unwrap(), glc_inv, p);
            for (i, gc) in g.iter().enumerate() {
                let sub = mul_mod(factor, *gc, p);
                let idx = shift + i;
                f[idx] = (f[idx] + p - sub) % p;
            }
            trim(&mut f);
        }
        std::mem::swap(&mut f, &mut g);
    }
    if let Some(lc) = f.last().copied() {
        let inv = inv_mod(lc, p);
        for c in &mut f {
            *c = mul_mod(*c, inv, p);
        }
    }
    f
}

/// Modular gcd; inputs arbitrary, result canonical (integer primitive,
/// positive leading coefficient).
pub fn gcd_modular(a: &UniPoly, b: &UniPoly) -> UniPoly {
    let fa = a.canonical();
    let fb = b.canonical();
    if fa.is_zero() {
        return fb;
    }
    if fb.is_zero() {
        return fa;
    }
    if fa.degree() == 0 || fb.degree() == 0 {
        return UniPoly::constant(Rat::one());
    }
    let ai: Vec<BigInt> = fa.coeffs().iter().map(|c| c.numer().clone()).collect();
    let bi: Vec<BigInt> = fb.coeffs().iter().map(|c| c.numer().clone()).collect();
    let lc_gcd: BigInt = num_integer::Integer::gcd(ai.last().unwrap(), bi.last().unwrap());
    let mut deg_min = usize::MAX;
    let mut acc: Vec<BigInt> = Vec::new();
    let mut modulus = BigInt::one();
    let mut last_lift: Option<UniPoly> = None;
    for p in primes_from(1 << 59).take(65536) {
        if (ai.last().unwrap() % p).is_zero() || (bi.last().unwrap() % p).is_zero() {
            continue;
        }
        let ap: Vec<u64> = ai.iter().map(|c| reduce_mod(c, p)).collect();
        let bp: Vec<u64> = bi.iter().map(|c| reduce_mod(c, p)).collect();
        let gp = gcd_mod_p(&ap, &bp, p);
        if gp.len() <= 1 {
            return UniPoly::constant(Rat::one()); // coprime
        }
        let deg = gp.len() - 1;
        if deg > deg_min {
            continue; // unlucky prime
        }
        if deg < deg_min {
            deg_min = deg;
            acc = vec![BigInt::zero(); deg + 1];
            modulus = BigInt::one();
            last_lift = None;
        }
        // scale to the integer leading coefficient and CRT-combine
        let scale = reduce_mod(&lc_gcd, p);
        let scaled: Vec<u64> = gp.iter().map(|c| mul_mod(*c, scale, p)).collect();
        let pm = BigInt::from(p);
        if modulus.is_one() {
            acc = scaled.iter().map(|c| BigInt::from(*c)).collect();
            modulus = pm;
        } else {
            // x = acc (mod modulus), x = scaled (mod p)
            let m_mod_p = reduce_mod(&modulus, p);
            let m_inv = inv_mod(m_mod_p, p);
            for (c, s) in acc.iter_mut().zip(&scaled) {
                let c_mod_p = reduce_mod(c, p);
                let diff = (*s + p - c_mod_p) % p;
                let t = mul_mod(diff, m_inv, p);
                *c += &modulus * BigInt::from(t);
            }
            modulus *= pm;
        }
        // symmetric lift; accept once stable and dividing both inputs
        let half = &modulus / BigInt::from(2);
        let lifted: Vec<Rat> = acc
            .iter()
            .map(|c| {
                let mut v = c.clone();
                if v > half {
                    v -= &modulus;
                }
                Rat::from_integer(v)
            })
            .collect();
        let candidate = UniPoly::new(lifted).canonical();
        if candidate.is_zero() {
            continue;
        }
        if last_lift.as_ref() == Some(&candidate) {
            let (_, ra) = fa.div_rem(&candidate);
            if ra.is_zero() {
                let (_, rb) = fb.div_rem(&candidate);
                if rb.is_zero() {
                    return candidate;
                }
            }
        }
        last_lift = Some(candidate);
    }
    // fall back to the remainder-sequence path
    super::uni::gcd_prs(&fa, &fb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_int;

    #[test]
    fn modular_matches_prs() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(9);
        for _ in 0..40 {
            let mut mk = |deg: usize| {
                UniPoly::new((0..=deg).map(|_| rat_int(rng.gen_range(-50..=50))).collect())
            };
            let g = mk(3);
            let a = mk(5).mul(&g);
            let b = mk(4).mul(&g);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let m = gcd_modular(&a, &b);
            let p = crate::poly::uni::gcd_prs(&a.canonical(), &b.canonical());
            assert_eq!(m, p);
        }
    }

    #[test]
    fn coprime_early_exit() {
        let a = UniPoly::from_ints(&[1, 0, 1]); // x^2 + 1
        let b = UniPoly::from_ints(&[-2, 0, 1]); // x^2 - 2
        assert_eq!(gcd_modular(&a, &b).degree(), 0);
    }
}

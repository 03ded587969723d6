//! Roots of f modulo primes and prime powers, and the root-counting function ω_f.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyarith::FactoredPoly;
use crate::primes::{self, is_prime, mul_mod, pow_mod};

/// Largest modulus handled by `omega`.
pub const OMEGA_LIMIT: u64 = 1 << 48;

/// The roots of f modulo `p^v`, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootSet {
    pub p: u64,
    pub v: u32,
    pub residues: Vec<u64>,
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }
}

// Dense polynomials over F_p, lowest degree first, no trailing zeros.
type Fp = Vec<u64>;

fn trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn monic(a: Fp, p: u64) -> Fp {
    match a.last() {
        Some(&l) if l != 1 => {
            let inv = inv_mod(l, p);
            a.into_iter().map(|c| mul_mod(c, inv, p)).collect()
        }
        _ => a,
    }
}

fn divrem(a: &[u64], b: &[u64], p: u64) -> (Fp, Fp) {
    let mut r = a.to_vec();
    if r.len() < b.len() {
        return (Vec::new(), trim(r));
    }
    let db = b.len() - 1;
    let inv = inv_mod(b[db], p);
    let mut q = vec![0u64; r.len() - db];
    for i in (0..q.len()).rev() {
        let c = mul_mod(r[i + db], inv, p);
        q[i] = c;
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + p - mul_mod(c, bj, p)) % p;
            }
        }
    }
    r.truncate(db);
    (trim(q), trim(r))
}

fn mulmod_poly(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    divrem(&trim(out), m, p).1
}

fn powmod_poly(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Fp {
    let mut result: Fp = vec![1];
    let mut b = divrem(base, m, p).1;
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod_poly(&result, &b, m, p);
        }
        b = mulmod_poly(&b, &b, m, p);
        e >>= 1;
    }
    divrem(&result, m, p).1
}

fn gcd_poly(mut a: Fp, mut b: Fp, p: u64) -> Fp {
    while !b.is_empty() {
        let r = divrem(&a, &b, p).1;
        a = b;
        b = r;
    }
    monic(a, p)
}

fn sub_poly(a: &[u64], b: &[u64], p: u64) -> Fp {
    let n = a.len().max(b.len());
    trim((0..n).map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p).collect())
}

fn split_linear(g: Fp, p: u64, rng: &mut ChaCha8Rng, out: &mut Vec<u64>) {
    match g.len() {
        0 | 1 => {}
        2 => out.push((p - g[0]) % p),
        _ => loop {
            let a = rng.gen_range(0..p);
            let h = powmod_poly(&[a, 1], (p - 1) / 2, &g, p);
            let d = gcd_poly(g.clone(), sub_poly(&h, &[1], p), p);
            if d.len() > 1 && d.len() < g.len() {
                let (q, _) = divrem(&g, &d, p);
                split_linear(d, p, rng, out);
                split_linear(monic(q, p), p, rng, out);
                return;
            }
        },
    }
}

fn eval_mod(c: &[u64], u: u64, p: u64) -> u64 {
    c.iter().rev().fold(0, |acc, &x| (mul_mod(acc, u, p) + x) % p)
}

fn seed_for(c: &[u64], p: u64) -> u64 {
    c.iter().fold(0xcbf2_9ce4_8422_2325 ^ p, |h, &x| (h ^ x).wrapping_mul(0x0100_0000_01b3))
}

/// Roots of `f` modulo the prime `p < 2^32`.
pub fn roots_mod_p(f: &FactoredPoly, p: u64) -> Result<RootSet> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p >= 1 << 32 {
        return Err(Error::ScaleExceeded(format!("root finding needs p < 2^32, got {p}")));
    }
    let c = f.poly().reduce_mod(p);
    let residues = roots_of_reduced(&c, p)?;
    Ok(RootSet { p, v: 1, residues })
}

/// Roots mod `p` of an already reduced coefficient vector.
pub(crate) fn roots_of_reduced(c: &[u64], p: u64) -> Result<Vec<u64>> {
    let lead_vanishes = c.last() == Some(&0);
    if p < 64 || lead_vanishes {
        if p >= 1 << 16 {
            return Err(Error::ScaleExceeded(format!("p = {p} divides the leading coefficient")));
        }
        return Ok((0..p).filter(|&u| eval_mod(c, u, p) == 0).collect());
    }
    let fp = monic(trim(c.to_vec()), p);
    if fp.len() <= 1 {
        return Ok(Vec::new());
    }
    let xp = powmod_poly(&[0, 1], p, &fp, p);
    let g = gcd_poly(fp.clone(), sub_poly(&xp, &[0, 1], p), p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed_for(c, p));
    let mut out = Vec::with_capacity(g.len());
    split_linear(g, p, &mut rng, &mut out);
    out.sort_unstable();
    Ok(out)
}

fn eval_mod_u128(c: &[u128], u: u128, m: u128) -> u128 {
    c.iter().rev().fold(0, |acc, &x| (acc * u % m + x) % m)
}

/// All roots of `f` modulo `p^v`, by Hensel lifting simple roots and scanning above singular ones.
pub fn lift_roots(f: &FactoredPoly, p: u64, v: u32) -> Result<RootSet> {
    if v == 0 {
        return Err(Error::Domain("exponent must be >= 1".into()));
    }
    let modulus = (p as u128)
        .checked_pow(v)
        .filter(|&m| m <= u64::MAX as u128)
        .ok_or_else(|| Error::ScaleExceeded(format!("{p}^{v} exceeds 2^64")))?;
    let base = roots_mod_p(f, p)?;
    let full: Vec<u128> = f.poly().reduce_mod(modulus as u64).into_iter().map(u128::from).collect();
    let deriv: Vec<u64> = match f.poly().derivative() {
        Some(d) => d.reduce_mod(p),
        None => vec![0],
    };
    let p128 = p as u128;
    let mut level: Vec<u128> = base.residues.iter().map(|&r| r as u128).collect();
    let mut pk = p128;
    for _ in 1..v {
        let next_mod = pk * p128;
        let mut next = Vec::new();
        for &r in &level {
            let dr = eval_mod(&deriv, (r % p128) as u64, p);
            if dr != 0 {
                let val = eval_mod_u128(&full, r, modulus) % next_mod;
                let q = ((val / pk) % p128) as u64;
                let t = mul_mod(p - q % p, inv_mod(dr, p), p) % p;
                next.push(r + t as u128 * pk);
            } else {
                for t in 0..p128 {
                    let cand = r + t * pk;
                    if eval_mod_u128(&full, cand, modulus).is_multiple_of(next_mod) {
                        next.push(cand);
                    }
                }
            }
        }
        level = next;
        pk = next_mod;
    }
    let mut residues: Vec<u64> = level.into_iter().map(|r| r as u64).collect();
    residues.sort_unstable();
    Ok(RootSet { p, v, residues })
}

/// p-adic valuation of a nonzero big integer.
pub fn valuation(n: &BigUint, p: u64) -> u32 {
    if n.is_zero() {
        return u32::MAX;
    }
    let pb = BigUint::from(p);
    let mut n = n.clone();
    let mut v = 0;
    while (&n % &pb).is_zero() {
        n /= &pb;
        v += 1;
    }
    v
}

/// The per-prime root bound `d · p^{θ(p)/2}`, θ(p) the valuation of |Δ_f| at p.
pub fn huxley_bound(f: &FactoredPoly, p: u64) -> f64 {
    let theta = valuation(f.discriminant_abs(), p);
    f.d() as f64 * (p as f64).powf(theta as f64 / 2.0)
}

/// The uniform root bound `d · sqrt(|Δ_f|)`.
pub fn global_root_bound(f: &FactoredPoly) -> f64 {
    let disc = f.discriminant_abs().to_f64().unwrap_or(f64::INFINITY);
    f.d() as f64 * disc.sqrt()
}

/// ω_f with a memo of prime-power counts; safe to share across threads.
#[derive(Debug)]
pub struct Omega {
    f: FactoredPoly,
    cache: RwLock<HashMap<(u64, u32), u64>>,
}

impl Omega {
    pub fn new(f: &FactoredPoly) -> Self {
        Omega { f: f.clone(), cache: RwLock::new(HashMap::new()) }
    }

    pub fn poly(&self) -> &FactoredPoly {
        &self.f
    }

    /// ω_f(p^v).
    pub fn prime_power(&self, p: u64, v: u32) -> Result<u64> {
        if let Some(&n) = self.cache.read().unwrap().get(&(p, v)) {
            return Ok(n);
        }
        let n = lift_roots(&self.f, p, v)?.len() as u64;
        self.cache.write().unwrap().insert((p, v), n);
        Ok(n)
    }

    /// ω_f(k) as the product over the factorization of k.
    pub fn at(&self, k: u64) -> Result<u64> {
        if k == 0 {
            return Err(Error::Domain("omega(0) is undefined".into()));
        }
        if k > OMEGA_LIMIT {
            return Err(Error::ScaleExceeded(format!("omega argument {k} above 2^48")));
        }
        self.of_factored(&primes::factor(k))
    }

    /// ω_f of the integer with the given factorization (distinct primes).
    pub fn of_factored(&self, fac: &[(u64, u32)]) -> Result<u64> {
        let mut acc = 1u64;
        for &(p, v) in fac {
            acc *= self.prime_power(p, v)?;
            if acc == 0 {
                break;
            }
        }
        Ok(acc)
    }
}

/// ω_f(k) without memoization.
pub fn omega(f: &FactoredPoly, k: u64) -> Result<u64> {
    Omega::new(f).at(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::polyarith::{build_factored, parse_poly};

    fn fp(factors: &[&str]) -> FactoredPoly {
        build_factored(factors.iter().map(|s| parse_poly(s).unwrap()).collect()).unwrap()
    }

    #[test]
    fn roots_mod_p_examples() {
        let f = fp(&["t^2+1"]);
        assert_eq!(roots_mod_p(&f, 5).unwrap().residues, vec![2, 3]);
        assert!(roots_mod_p(&f, 3).unwrap().is_empty());
        assert_eq!(roots_mod_p(&f, 2).unwrap().residues, vec![1]);
        assert_eq!(roots_mod_p(&f, 4), Err(Error::NotPrime(4)));
    }

    #[test]
    fn roots_mod_p_large_prime() {
        let f = fp(&["t^2+1"]);
        let p = 4_294_967_291; // largest prime below 2^32, 3 mod 4
        assert!(roots_mod_p(&f, p).unwrap().is_empty());
        let p = 4_294_967_197; // 1 mod 4
        let r = roots_mod_p(&f, p).unwrap().residues;
        assert_eq!(r.len(), 2);
        for u in r {
            assert_eq!((mul_mod(u, u, p) + 1) % p, 0);
        }
    }

    #[test]
    fn lift_examples() {
        let f = fp(&["t^2+1"]);
        assert_eq!(lift_roots(&f, 5, 2).unwrap().residues, vec![7, 18]);
        assert!(lift_roots(&f, 2, 2).unwrap().is_empty());
        let t = fp(&["t"]);
        for (p, v) in [(2, 5), (3, 3), (101, 2)] {
            assert_eq!(lift_roots(&t, p, v).unwrap().residues, vec![0]);
        }
        assert!(lift_roots(&f, 3, 41).is_err());
    }

    #[test]
    fn singular_lifting_matches_scan() {
        let f = fp(&["t^2-2"]);
        for (p, v) in [(2u64, 1u32), (2, 2), (2, 3), (7, 3)] {
            let m = p.pow(v);
            assert_eq!(lift_roots(&f, p, v).unwrap().residues, oracle::roots_mod_scan(&f, m), "{p}^{v}");
        }
        let g = fp(&["t", "t+4"]);
        for v in 1..=5 {
            assert_eq!(lift_roots(&g, 2, v).unwrap().residues, oracle::roots_mod_scan(&g, 2u64.pow(v)));
        }
    }

    #[test]
    fn omega_examples() {
        let f = fp(&["t^2+1"]);
        assert_eq!(omega(&f, 10).unwrap(), 2);
        assert_eq!(omega(&f, 4).unwrap(), 0);
        assert_eq!(omega(&f, 1).unwrap(), 1);
        assert!(omega(&f, 0).is_err());
    }

    #[test]
    fn roots_match_scan_for_small_primes() {
        let polys = [fp(&["t^2+1"]), fp(&["t^2-2"]), fp(&["t", "t^2+1"]), fp(&["3t^2+t+5"]), fp(&["t^3-t-1"])];
        for f in &polys {
            for p in primes::primes_up_to(1000) {
                assert_eq!(roots_mod_p(f, p).unwrap().residues, oracle::roots_mod_scan(f, p), "{} mod {p}", f.poly());
            }
        }
    }
}

//! Prime ideals of ℚ(√m), m ≡ 2, 3 (mod 4) squarefree, as (prime, residue class) tags, and the
//! counts C_α(x) of n whose n + √m has a prime ideal factor dividing no other k + √m.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyarith::{build_factored, FactoredPoly, IntPoly};
use crate::primes::{self, is_prime, mul_mod, pow_mod};
use crate::smoothsieve::{prime_divisor_lists, psi, PPlus};

pub const MAX_X: u64 = 100_000;
pub const MAX_WINDOW_END: u64 = 2_000_000;

/// Calibration constant for |C_α(x) − (x − Ψ_f(x, x))| <= K x / log x, fixed before measurement.
pub const PROP54_CONSTANT: f64 = 4.0;

/// The field ℚ(√m) with α = √m and f(t) = t² − m, so f(−α) = 0.
#[derive(Clone, Debug)]
pub struct QuadContext {
    m: u64,
    f: FactoredPoly,
}

fn squarefree(m: u64) -> bool {
    primes::factor(m).iter().all(|&(_, v)| v == 1)
}

impl QuadContext {
    pub fn new(m: u64) -> Result<Self> {
        if m < 2 || !squarefree(m) || !matches!(m % 4, 2 | 3) {
            return Err(Error::Domain(format!("m = {m} must be squarefree, >= 2 and 2 or 3 mod 4")));
        }
        let f = build_factored(vec![IntPoly::from_i64(&[-(m as i64), 0, 1])?])?;
        Ok(QuadContext { m, f })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// t² − m.
    pub fn poly(&self) -> &FactoredPoly {
        &self.f
    }

    /// Field discriminant 4m.
    pub fn disc(&self) -> u64 {
        4 * self.m
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

/// Splitting of a rational prime. For split p the two prime ideals are (p, √m − u) for the two
/// roots u; such an ideal divides (n + √m) exactly when n ≡ −u (mod p).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadPrimeClass {
    pub p: u64,
    pub kind: Splitting,
    pub roots: Vec<u64>,
    pub in_p_k: bool,
}

/// Square root of a quadratic residue `a` modulo an odd prime.
pub fn tonelli_shanks(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let z = (2..p).find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)?;
    let (mut m, mut c, mut t, mut r) = (s, pow_mod(z, q, p), pow_mod(a, q, p), pow_mod(a, q.div_ceil(2), p));
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

pub fn classify_prime(ctx: &QuadContext, p: u64) -> Result<QuadPrimeClass> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let m = ctx.m;
    if (2 * m).is_multiple_of(p) {
        return Ok(QuadPrimeClass { p, kind: Splitting::Ramified, roots: vec![m % p % p], in_p_k: false });
    }
    Ok(match tonelli_shanks(m % p, p) {
        Some(u) => {
            let mut roots = vec![u, p - u];
            roots.sort_unstable();
            QuadPrimeClass { p, kind: Splitting::Split, roots, in_p_k: true }
        }
        None => QuadPrimeClass { p, kind: Splitting::Inert, roots: Vec::new(), in_p_k: false },
    })
}

/// Number of prime ideals of norm at most `x`.
pub fn prime_ideal_count(ctx: &QuadContext, x: u64) -> Result<u64> {
    let mut count = 0;
    for p in primes::primes_up_to(x) {
        count += match classify_prime(ctx, p)?.kind {
            Splitting::Split => 2,
            Splitting::Ramified => 1,
            Splitting::Inert => u64::from(p.saturating_mul(p) <= x),
        };
    }
    Ok(count)
}

/// Which k the uniqueness condition compares against: [0, end] or [1, end].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExclusionStart {
    Zero,
    One,
}

impl ExclusionStart {
    fn first(self) -> u64 {
        match self {
            ExclusionStart::Zero => 0,
            ExclusionStart::One => 1,
        }
    }
}

/// One qualifying prime ideal for a counted n: the prime and the class n mod p.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub n: u64,
    pub p: u128,
    pub class: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct CAlphaReport {
    pub m: u64,
    pub lo: u64,
    pub hi: u64,
    pub exclusion: ExclusionStart,
    pub count: u64,
    pub witnesses: Vec<Witness>,
}

/// Members of the class n (mod p) inside [start, end].
fn class_size(n: u64, p: u128, start: u64, end: u64) -> u128 {
    let c = n as u128 % p;
    let upto = |t: u64| -> u128 {
        // #{k in [0, t] : k ≡ c}
        let t = t as u128;
        if t < c {
            0
        } else {
            (t - c) / p + 1
        }
    };
    upto(end) - if start == 0 { 0 } else { upto(start - 1) }
}

/// Counts n in `lo..=hi` having a prime ideal factor of n + √m that divides no k + √m with
/// k in [start, hi], k ≠ n. Witnesses name the largest such prime.
pub fn windowed_count(ctx: &QuadContext, lo: u64, hi: u64, exclusion: ExclusionStart) -> Result<CAlphaReport> {
    if hi > MAX_WINDOW_END {
        return Err(Error::ScaleExceeded(format!("window end {hi} above {MAX_WINDOW_END}")));
    }
    let mut witnesses = Vec::new();
    if lo <= hi {
        let lists = prime_divisor_lists(&ctx.f, lo, hi)?;
        let start = exclusion.first();
        for (i, ps) in lists.iter().enumerate() {
            let n = lo + i as u64;
            if let Some(&p) = ps.iter().rev().find(|&&p| class_size(n, p, start, hi) == 1) {
                witnesses.push(Witness { n, p, class: n as u128 % p });
            }
        }
    }
    Ok(CAlphaReport { m: ctx.m, lo, hi, exclusion, count: witnesses.len() as u64, witnesses })
}

/// C_α(x): n in [1, x] with a prime ideal dividing n + √m and no other k + √m, k in [1, x].
pub fn c_alpha(ctx: &QuadContext, x: u64) -> Result<CAlphaReport> {
    if x > MAX_X {
        return Err(Error::ScaleExceeded(format!("x = {x} above {MAX_X}")));
    }
    windowed_count(ctx, 1, x, ExclusionStart::One)
}

/// The count over (N, N+M] with exclusion range starting at 0 (or 1 when requested).
pub fn windowed_cassels(ctx: &QuadContext, n: u64, m: u64, exclusion: ExclusionStart) -> Result<CAlphaReport> {
    windowed_count(ctx, n + 1, n + m, exclusion)
}

#[derive(Clone, Debug, Serialize)]
pub struct Prop54Report {
    pub m: u64,
    pub x: u64,
    pub c_alpha: u64,
    pub psi_xx: u64,
    pub non_smooth: u64,
    pub residual: u64,
    pub ratio_log: f64,
    pub ratio_x: f64,
    pub prime_ideals_upto_x: u64,
    pub calibration_constant: f64,
    pub within_calibration: bool,
}

/// C_α(x) against x − Ψ_f(x, x), with the normalized residual.
pub fn verify_prop54(ctx: &QuadContext, x: u64) -> Result<Prop54Report> {
    let c = c_alpha(ctx, x)?.count;
    let psi_xx = psi(&ctx.f, x, x as f64)?.psi;
    let non_smooth = x - psi_xx;
    let residual = c.abs_diff(non_smooth);
    let lx = (x as f64).ln();
    let ratio_log = if x > 1 { residual as f64 * lx / x as f64 } else { 0.0 };
    Ok(Prop54Report {
        m: ctx.m,
        x,
        c_alpha: c,
        psi_xx,
        non_smooth,
        residual,
        ratio_log,
        ratio_x: residual as f64 / x as f64,
        prime_ideals_upto_x: prime_ideal_count(ctx, x)?,
        calibration_constant: PROP54_CONSTANT,
        within_calibration: ratio_log <= PROP54_CONSTANT,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma52Row {
    pub threshold: u64,
    pub rational_hits: u64,
    pub ideal_hits: u64,
    pub mismatches: Vec<u64>,
}

/// For each threshold X and each n in [1, nmax], compares two conditions: some prime p > X
/// divides n² − m (read from the P⁺ sieve), and some split prime ideal of norm > X divides
/// n + √m (trial-division factorization, each ideal (p, √m − u) tested by n ≡ −u mod p).
pub fn lemma52_check(ctx: &QuadContext, nmax: u64, thresholds: &[u64]) -> Result<Vec<Lemma52Row>> {
    let table = crate::smoothsieve::pplus_range(&ctx.f, 1, nmax, 2.0, None, &Default::default())?;
    let mut classes: HashMap<u64, QuadPrimeClass> = HashMap::new();
    // Per n: P⁺(n² − m) and the largest norm of a split ideal dividing n + √m.
    let mut rows: Vec<(u128, u64)> = Vec::with_capacity(nmax as usize);
    for n in 1..=nmax {
        let pplus = match table.pplus_at(n) {
            Some(PPlus::Finite(p)) => *p,
            other => return Err(Error::Domain(format!("unexpected P+ {other:?} at n = {n}"))),
        };
        let norm = (n as i128 * n as i128 - ctx.m as i128).unsigned_abs() as u64;
        let mut best = 0;
        for (p, _) in primes::factor(norm) {
            if let std::collections::hash_map::Entry::Vacant(e) = classes.entry(p) {
                e.insert(classify_prime(ctx, p)?);
            }
            let cls = &classes[&p];
            if cls.in_p_k && cls.roots.iter().any(|&u| (n % p + u) % p == 0) {
                best = best.max(p);
            }
        }
        rows.push((pplus, best));
    }
    Ok(thresholds
        .iter()
        .map(|&t| {
            let mut row = Lemma52Row { threshold: t, rational_hits: 0, ideal_hits: 0, mismatches: Vec::new() };
            for (i, &(pplus, best)) in rows.iter().enumerate() {
                let a = pplus > t as u128;
                let b = best > t;
                row.rational_hits += u64::from(a);
                row.ideal_hits += u64::from(b);
                if a != b {
                    row.mismatches.push(i as u64 + 1);
                }
            }
            row
        })
        .collect())
}

/// All n in [1, nmax] with n ≡ n0 (mod p) and p^v | n² − m, i.e. 𝔭^v | n + √m for the split
/// ideal 𝔭 containing n0 + √m.
pub fn ideal_power_class(ctx: &QuadContext, p: u64, v: u32, n0: u64, nmax: u64) -> Vec<u64> {
    let pv = (p as u128).pow(v);
    (1..=nmax)
        .filter(|&n| n % p == n0 % p && (n as i128 * n as i128 - ctx.m as i128).rem_euclid(pv as i128) == 0)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_examples() {
        let k = QuadContext::new(2).unwrap();
        let c = classify_prime(&k, 7).unwrap();
        assert_eq!((c.kind, c.roots.clone(), c.in_p_k), (Splitting::Split, vec![3, 4], true));
        let c = classify_prime(&k, 2).unwrap();
        assert_eq!((c.kind, c.in_p_k), (Splitting::Ramified, false));
        assert_eq!(classify_prime(&k, 5).unwrap().kind, Splitting::Inert);
        assert_eq!(classify_prime(&k, 9), Err(Error::NotPrime(9)));
        assert!(QuadContext::new(5).is_err());
        assert!(QuadContext::new(8).is_err());
        assert!(QuadContext::new(4).is_err());
    }

    #[test]
    fn tonelli_shanks_agrees_with_scan() {
        for p in primes::primes_up_to(2000).into_iter().skip(1) {
            for a in 0..p.min(60) {
                let scan = (0..p).find(|&r| mul_mod(r, r, p) == a);
                let ts = tonelli_shanks(a, p);
                assert_eq!(scan.is_some(), ts.is_some(), "a = {a}, p = {p}");
                if let Some(r) = ts {
                    assert_eq!(mul_mod(r, r, p), a);
                }
            }
        }
    }

    #[test]
    fn c_alpha_examples() {
        let k = QuadContext::new(2).unwrap();
        assert_eq!(c_alpha(&k, 1).unwrap().count, 0);
        assert_eq!(c_alpha(&k, 2).unwrap().count, 1);
        let r = c_alpha(&k, 3).unwrap();
        assert_eq!(r.count, 2);
        assert_eq!(r.witnesses[1], Witness { n: 3, p: 7, class: 3 });
        assert_eq!(windowed_cassels(&k, 10, 0, ExclusionStart::Zero).unwrap().count, 0);
    }

    #[test]
    fn prime_ideal_count_small() {
        let k = QuadContext::new(2).unwrap();
        assert_eq!(prime_ideal_count(&k, 10).unwrap(), 4);
    }
}

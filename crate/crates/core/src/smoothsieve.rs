//! Exact Ψ_f(x, y) and largest prime factors of f(n) by a segmented sieve over root classes.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modroots::roots_of_reduced;
use crate::polyarith::FactoredPoly;
use crate::primes::{self, isqrt};

pub const DEFAULT_SEGMENT: usize = 1 << 20;
/// Largest prime the root table will sieve with.
pub const SIEVE_PRIME_LIMIT: u64 = 100_000_000;
/// Largest range accepted by the trial-division oracle.
pub const ORACLE_LIMIT: u64 = 100_000;

/// Largest prime factor of |f(n)|; `Infinite` encodes f(n) = 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PPlus {
    Finite(u128),
    Big(BigUint),
    Infinite,
}

impl PPlus {
    pub fn le(&self, bound: u128) -> bool {
        matches!(self, PPlus::Finite(v) if *v <= bound)
    }

    pub fn gt(&self, bound: u128) -> bool {
        !self.le(bound)
    }
}

impl std::fmt::Display for PPlus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PPlus::Finite(v) => write!(f, "{v}"),
            PPlus::Big(v) => write!(f, "{v}"),
            PPlus::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for PPlus {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Largest integer not exceeding a real smoothness bound, saturating.
pub fn y_floor(y: f64) -> u128 {
    if y >= 1.7e38 {
        u128::MAX
    } else {
        y.floor() as u128
    }
}

fn check_y(y: f64) -> Result<()> {
    if y.is_nan() || y < 1.0 {
        return Err(Error::Domain(format!("smoothness bound y = {y} must be >= 1")));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct SieveOptions {
    pub segment: usize,
}

impl Default for SieveOptions {
    fn default() -> Self {
        SieveOptions { segment: DEFAULT_SEGMENT }
    }
}

/// Primes up to a limit together with the roots of f modulo each.
#[derive(Clone, Debug)]
pub struct RootTable {
    limit: u64,
    entries: Vec<(u64, Vec<u64>)>,
}

impl RootTable {
    pub fn build(f: &FactoredPoly, limit: u64) -> Result<Self> {
        if limit > SIEVE_PRIME_LIMIT {
            return Err(Error::ScaleExceeded(format!("sieve needs primes up to {limit}, limit {SIEVE_PRIME_LIMIT}")));
        }
        let poly = f.poly();
        let entries = primes::primes_up_to(limit)
            .into_par_iter()
            .map(|p| roots_of_reduced(&poly.reduce_mod(p), p).map(|r| (p, r)))
            .collect::<Result<Vec<_>>>()?;
        Ok(RootTable { limit, entries })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn entries(&self) -> &[(u64, Vec<u64>)] {
        &self.entries
    }

    fn upto(&self, bound: u64) -> &[(u64, Vec<u64>)] {
        let k = self.entries.partition_point(|(p, _)| *p <= bound);
        &self.entries[..k]
    }
}

/// Per-n smoothness data over `lo..=hi`.
#[derive(Clone, Debug, Serialize)]
pub struct SmoothTable {
    pub lo: u64,
    pub hi: u64,
    pub y: f64,
    pub flags: Vec<bool>,
    pub pplus: Option<Vec<PPlus>>,
    pub psi: u64,
}

impl SmoothTable {
    pub fn is_smooth(&self, n: u64) -> bool {
        self.flags[(n - self.lo) as usize]
    }

    pub fn pplus_at(&self, n: u64) -> Option<&PPlus> {
        self.pplus.as_ref().map(|v| &v[(n - self.lo) as usize])
    }

    /// Number of smooth n in `lo..=n`.
    pub fn count_upto(&self, n: u64) -> u64 {
        if n < self.lo {
            return 0;
        }
        let end = ((n - self.lo + 1) as usize).min(self.flags.len());
        self.flags[..end].iter().filter(|&&b| b).count() as u64
    }
}

/// Upper bound for max |f(n)| on `0..=hi`.
fn magnitude_bound(f: &FactoredPoly, hi: u64) -> BigUint {
    let h = BigUint::from(hi.max(1));
    f.poly()
        .coeffs()
        .iter()
        .rev()
        .fold(BigUint::zero(), |acc, c| acc * &h + c.abs().to_biguint().unwrap())
}

fn sqrt_limit(bound: &BigUint) -> u64 {
    bound.sqrt().to_u64().unwrap_or(u64::MAX)
}

fn eval_i128(c: &[i128], n: u64) -> Option<i128> {
    let n = n as i128;
    c.iter().rev().try_fold(0i128, |acc, &x| acc.checked_mul(n)?.checked_add(x))
}

struct SegOut {
    flags: Vec<bool>,
    pplus: Option<Vec<PPlus>>,
}

trait Word: Copy + PartialOrd {
    fn from_u128(v: u128) -> Self;
    fn to_u128(self) -> u128;
    fn rem(self, p: u64) -> u64;
    fn div(self, p: u64) -> Self;
}

impl Word for u64 {
    fn from_u128(v: u128) -> Self {
        v as u64
    }
    fn to_u128(self) -> u128 {
        self as u128
    }
    fn rem(self, p: u64) -> u64 {
        self % p
    }
    fn div(self, p: u64) -> Self {
        self / p
    }
}

impl Word for u128 {
    fn from_u128(v: u128) -> Self {
        v
    }
    fn to_u128(self) -> u128 {
        self
    }
    fn rem(self, p: u64) -> u64 {
        (self % p as u128) as u64
    }
    fn div(self, p: u64) -> Self {
        self / p as u128
    }
}

#[inline]
fn first_hit(a: u64, root: u64, p: u64) -> u64 {
    a + (root + p - a % p) % p
}

fn sieve_words<T: Word>(
    vals: &[u128],
    a: u64,
    table: &[(u64, Vec<u64>)],
    yf: u128,
    want_pplus: bool,
) -> SegOut {
    let len = vals.len();
    let b = a + len as u64 - 1;
    let mut cof: Vec<T> = vals.iter().map(|&v| T::from_u128(v)).collect();
    let mut hit = if want_pplus { vec![1u64; len] } else { Vec::new() };
    for (p, roots) in table {
        let p = *p;
        for &r in roots {
            let mut n = first_hit(a, r, p);
            while n <= b {
                let i = (n - a) as usize;
                let mut c = cof[i];
                if vals[i] != 0 {
                    while c.rem(p) == 0 {
                        c = c.div(p);
                    }
                    cof[i] = c;
                    if want_pplus {
                        hit[i] = p;
                    }
                }
                n += p;
            }
        }
    }
    finish(vals.iter().map(|&v| v == 0), cof.into_iter().map(|c| c.to_u128()), &hit, yf, want_pplus, len)
}

fn finish(
    zero: impl Iterator<Item = bool>,
    cof: impl Iterator<Item = u128>,
    hit: &[u64],
    yf: u128,
    want_pplus: bool,
    len: usize,
) -> SegOut {
    let mut flags = Vec::with_capacity(len);
    let mut pp = Vec::with_capacity(if want_pplus { len } else { 0 });
    for (i, (z, c)) in zero.zip(cof).enumerate() {
        if z {
            flags.push(false);
            if want_pplus {
                pp.push(PPlus::Infinite);
            }
            continue;
        }
        if want_pplus {
            let v = if c > 1 { c } else { hit[i] as u128 };
            flags.push(v <= yf);
            pp.push(PPlus::Finite(v));
        } else {
            flags.push(c <= yf);
        }
    }
    SegOut { flags, pplus: want_pplus.then_some(pp) }
}

fn sieve_big(f: &FactoredPoly, a: u64, b: u64, table: &RootTable, ylimit: Option<u64>, yf: u128, want_pplus: bool) -> SegOut {
    let vals: Vec<BigUint> = (a..=b).map(|n| f.eval(n as i64).abs().to_biguint().unwrap()).collect();
    let maxv = vals.iter().max().cloned().unwrap_or_default();
    let mut lim = sqrt_limit(&maxv);
    if let Some(y) = ylimit {
        lim = lim.min(y);
    }
    let len = vals.len();
    let mut cof = vals.clone();
    let mut hit = vec![1u64; len];
    for (p, roots) in table.upto(lim) {
        let p = *p;
        for &r in roots {
            let mut n = first_hit(a, r, p);
            while n <= b {
                let i = (n - a) as usize;
                if !vals[i].is_zero() {
                    while (&cof[i] % p).is_zero() {
                        cof[i] /= p;
                    }
                    hit[i] = p;
                }
                n += p;
            }
        }
    }
    let ybig = BigUint::from(yf);
    let mut flags = Vec::with_capacity(len);
    let mut pp = Vec::new();
    for i in 0..len {
        if vals[i].is_zero() {
            flags.push(false);
            pp.push(PPlus::Infinite);
            continue;
        }
        let v = if cof[i] > BigUint::one() { cof[i].clone() } else { BigUint::from(hit[i]) };
        flags.push(if want_pplus { v <= ybig } else { cof[i] <= ybig });
        pp.push(match v.to_u128() {
            Some(s) => PPlus::Finite(s),
            None => PPlus::Big(v),
        });
    }
    SegOut { flags, pplus: want_pplus.then_some(pp) }
}

fn sieve_segment(
    f: &FactoredPoly,
    small: Option<&[i128]>,
    a: u64,
    b: u64,
    table: &RootTable,
    ylimit: Option<u64>,
    yf: u128,
    want_pplus: bool,
) -> SegOut {
    let fast: Option<Vec<u128>> = small.and_then(|c| {
        (a..=b)
            .map(|n| eval_i128(c, n).and_then(|v| v.checked_abs()).map(|v| v as u128))
            .collect()
    });
    let Some(vals) = fast else {
        return sieve_big(f, a, b, table, ylimit, yf, want_pplus);
    };
    let maxv = vals.iter().copied().max().unwrap_or(0);
    let mut lim = isqrt(maxv).min(u64::MAX as u128) as u64;
    if let Some(y) = ylimit {
        lim = lim.min(y);
    }
    let entries = table.upto(lim);
    if maxv <= u64::MAX as u128 {
        sieve_words::<u64>(&vals, a, entries, yf, want_pplus)
    } else {
        sieve_words::<u128>(&vals, a, entries, yf, want_pplus)
    }
}

fn run(
    f: &FactoredPoly,
    lo: u64,
    hi: u64,
    y: f64,
    table: Option<&RootTable>,
    want_pplus: bool,
    opts: &SieveOptions,
) -> Result<SmoothTable> {
    check_y(y)?;
    if lo > hi {
        return Ok(SmoothTable { lo, hi, y, flags: Vec::new(), pplus: want_pplus.then(Vec::new), psi: 0 });
    }
    if hi > i64::MAX as u64 {
        return Err(Error::ScaleExceeded("range end above 2^63".into()));
    }
    let yf = y_floor(y);
    let ylimit = (!want_pplus).then(|| yf.min(u64::MAX as u128) as u64);
    let mut need = sqrt_limit(&magnitude_bound(f, hi));
    if let Some(yl) = ylimit {
        need = need.min(yl);
    }
    let owned;
    let table = match table {
        Some(t) if t.limit() >= need => t,
        _ => {
            owned = RootTable::build(f, need)?;
            &owned
        }
    };
    let small = f.poly().small_coeffs();
    let seg = opts.segment.max(1) as u64;
    let starts: Vec<u64> = (0..).map(|k| lo + k * seg).take_while(|&s| s <= hi).collect();
    let parts: Vec<SegOut> = starts
        .par_iter()
        .map(|&a| sieve_segment(f, small.as_deref(), a, (a + seg - 1).min(hi), table, ylimit, yf, want_pplus))
        .collect();
    let mut flags = Vec::with_capacity((hi - lo + 1) as usize);
    let mut pplus = want_pplus.then(|| Vec::with_capacity((hi - lo + 1) as usize));
    for part in parts {
        flags.extend(part.flags);
        if let (Some(all), Some(p)) = (pplus.as_mut(), part.pplus) {
            all.extend(p);
        }
    }
    let psi = flags.iter().filter(|&&b| b).count() as u64;
    Ok(SmoothTable { lo, hi, y, flags, pplus, psi })
}

/// Ψ_f(x, y) with per-n smoothness flags on `1..=x`.
pub fn psi(f: &FactoredPoly, x: u64, y: f64) -> Result<SmoothTable> {
    psi_range(f, 1, x, y, None, &SieveOptions::default())
}

/// Smoothness flags on `lo..=hi`, reusing `table` when it reaches far enough.
pub fn psi_range(
    f: &FactoredPoly,
    lo: u64,
    hi: u64,
    y: f64,
    table: Option<&RootTable>,
    opts: &SieveOptions,
) -> Result<SmoothTable> {
    run(f, lo, hi, y, table, false, opts)
}

/// Exact P+(|f(n)|) on `lo..=hi`, flags relative to `y`.
pub fn pplus_range(
    f: &FactoredPoly,
    lo: u64,
    hi: u64,
    y: f64,
    table: Option<&RootTable>,
    opts: &SieveOptions,
) -> Result<SmoothTable> {
    run(f, lo, hi, y, table, true, opts)
}

/// Exact P+(|f(n)|) for `1 <= n <= x`. Requires `B^2 > max |f(n)|` so that any cofactor left
/// after removing primes up to B is prime. Flags are relative to y = B.
pub fn pplus_table(f: &FactoredPoly, x: u64, bound: u64) -> Result<SmoothTable> {
    let maxv = (1..=x.max(1)).fold(BigInt::zero(), |m, n| m.max(f.eval(n as i64).abs()));
    let b = BigInt::from(bound);
    if &b * &b <= maxv {
        return Err(Error::Hypothesis(format!("B = {bound} has B^2 <= max |f(n)| = {maxv}")));
    }
    pplus_range(f, 1, x, bound as f64, None, &SieveOptions::default())
}

/// Ψ_f(x, y) by trial division of every |f(n)|, for `x <= 10^5`.
pub fn psi_oracle(f: &FactoredPoly, x: u64, y: f64) -> Result<u64> {
    check_y(y)?;
    if x > ORACLE_LIMIT {
        return Err(Error::ScaleExceeded(format!("oracle limited to x <= {ORACLE_LIMIT}")));
    }
    let yf = y_floor(y);
    let mut count = 0;
    for n in 1..=x {
        if crate::oracle::pplus_value(f, n)?.le(yf) {
            count += 1;
        }
    }
    Ok(count)
}

/// Distinct prime divisors of |f(n)| for each n in `lo..=hi`, ascending; empty for f(n) = 0.
pub fn prime_divisor_lists(f: &FactoredPoly, lo: u64, hi: u64) -> Result<Vec<Vec<u128>>> {
    let small = f
        .poly()
        .small_coeffs()
        .ok_or_else(|| Error::ScaleExceeded("coefficients must fit in 64 bits".into()))?;
    let vals: Vec<u128> = (lo..=hi)
        .map(|n| eval_i128(&small, n).and_then(|v| v.checked_abs()).map(|v| v as u128))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::ScaleExceeded("values must fit in 127 bits".into()))?;
    let maxv = vals.iter().copied().max().unwrap_or(0);
    let lim = isqrt(maxv).min(SIEVE_PRIME_LIMIT as u128 + 1) as u64;
    let table = RootTable::build(f, lim)?;
    let mut cof = vals.clone();
    let mut out: Vec<Vec<u128>> = vec![Vec::new(); vals.len()];
    for (p, roots) in table.entries() {
        let p = *p;
        for &r in roots {
            let mut n = first_hit(lo, r, p);
            while n <= hi {
                let i = (n - lo) as usize;
                if vals[i] != 0 {
                    while cof[i].is_multiple_of(p as u128) {
                        cof[i] /= p as u128;
                    }
                    out[i].push(p as u128);
                }
                n += p;
            }
        }
    }
    for (i, list) in out.iter_mut().enumerate() {
        list.sort_unstable();
        if vals[i] != 0 && cof[i] > 1 {
            list.push(cof[i]);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyarith::{build_factored, parse_poly};

    fn fp(factors: &[&str]) -> FactoredPoly {
        build_factored(factors.iter().map(|s| parse_poly(s).unwrap()).collect()).unwrap()
    }

    #[test]
    fn psi_examples() {
        let t = fp(&["t"]);
        let s = psi(&t, 10, 3.0).unwrap();
        assert_eq!(s.psi, 7);
        let set: Vec<u64> = (1..=10).filter(|&n| s.is_smooth(n)).collect();
        assert_eq!(set, vec![1, 2, 3, 4, 6, 8, 9]);
        let q = fp(&["t^2+1"]);
        let s = psi(&q, 10, 5.0).unwrap();
        assert_eq!((1..=10).filter(|&n| s.is_smooth(n)).collect::<Vec<_>>(), vec![1, 2, 3, 7]);
        assert_eq!(psi(&q, 10, 200.0).unwrap().psi, 10);
        assert_eq!(psi_oracle(&t, 100, 5.0).unwrap(), 34);
        assert_eq!(psi_oracle(&q, 10, 5.0).unwrap(), 4);
        assert_eq!(psi_oracle(&q, 0, 5.0).unwrap(), 0);
        assert_eq!(psi(&q, 0, 5.0).unwrap().psi, 0);
    }

    #[test]
    fn pplus_examples() {
        let q = fp(&["t^2+1"]);
        let s = pplus_table(&q, 10, 25).unwrap();
        assert_eq!(s.pplus_at(7), Some(&PPlus::Finite(5)));
        assert_eq!(s.pplus_at(9), Some(&PPlus::Finite(41)));
        let m = fp(&["t^2-2"]);
        let s = pplus_table(&m, 1, 10).unwrap();
        assert_eq!(s.pplus_at(1), Some(&PPlus::Finite(1)));
        assert!(matches!(pplus_table(&q, 10, 10), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn zero_values_are_never_smooth() {
        let f = fp(&["t-5", "t-7"]);
        let s = pplus_range(&f, 1, 20, 1e9, None, &SieveOptions::default()).unwrap();
        assert!(!s.is_smooth(5) && !s.is_smooth(7));
        assert_eq!(s.pplus_at(5), Some(&PPlus::Infinite));
        assert_eq!(s.pplus_at(6), Some(&PPlus::Finite(1)));
        assert!(s.is_smooth(6));
    }

    #[test]
    fn big_values_take_the_slow_path() {
        let f = fp(&["t^9+t+1"]);
        // rational root test passes: ±1 are not roots
        let x = 40_000;
        let s = psi_range(&f, x - 30, x, 1e6, None, &SieveOptions::default()).unwrap();
        for n in x - 30..=x {
            let v = f.eval(n as i64).to_biguint().unwrap();
            let mut r = v.clone();
            for p in primes::primes_up_to(1_000_000) {
                while (&r % p).is_zero() {
                    r /= p;
                }
            }
            assert_eq!(s.is_smooth(n), r.is_one(), "n = {n}");
        }
    }

    #[test]
    fn segment_size_does_not_matter() {
        let f = fp(&["t", "t^2+1"]);
        let base = pplus_range(&f, 1, 3000, 50.0, None, &SieveOptions::default()).unwrap();
        for seg in [1, 7, 64, 1000] {
            let other = pplus_range(&f, 1, 3000, 50.0, None, &SieveOptions { segment: seg }).unwrap();
            assert_eq!(base.flags, other.flags);
            assert_eq!(base.pplus, other.pplus);
        }
    }

    #[test]
    fn prime_divisors_small() {
        let f = fp(&["t^2-2"]);
        let lists = prime_divisor_lists(&f, 1, 10).unwrap();
        assert_eq!(lists[0], Vec::<u128>::new());
        assert_eq!(lists[1], vec![2]);
        assert_eq!(lists[3], vec![2, 7]);
        assert_eq!(lists[9], vec![2, 7]);
    }
}

//! Primitive prime divisors of A_n = n² + b, the count R_b(x), irreducible arctangents N(x),
//! and the comparison of R_b(x) with x − Ψ_f(x, x) for f = t² + b.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyarith::{build_factored, FactoredPoly, IntPoly};
use crate::primes::{self, isqrt};
use crate::smoothsieve::{pplus_table, psi, PPlus};

pub const MAX_X: u64 = 100_000_000;
/// Indices n <= |b| go through the quadratic definition scan, so |b| stays small.
pub const MAX_ABS_B: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Criterion,
    Direct,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimDivRecord {
    pub b: i64,
    pub n: u64,
    pub pplus: u64,
    pub has_primitive: bool,
    pub method: Method,
}

/// First index of the sequence A_n for the definition scan. The counting range is [1, x] either
/// way; starting at 0 adds A_0 = b to the earlier terms.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SequenceStart {
    Zero,
    #[default]
    One,
}

fn check_b(b: i64) -> Result<()> {
    if b <= 0 {
        let s = isqrt(b.unsigned_abs() as u128);
        if s * s == b.unsigned_abs() as u128 {
            return Err(Error::Hypothesis(format!("-b = {} is an integer square", -(b as i128))));
        }
    }
    if b.unsigned_abs() > MAX_ABS_B {
        return Err(Error::ScaleExceeded(format!("|b| = {} above {MAX_ABS_B}", b.unsigned_abs())));
    }
    Ok(())
}

fn term(b: i64, n: u64) -> i128 {
    n as i128 * n as i128 + b as i128
}

/// t² + b.
pub fn sequence_poly(b: i64) -> Result<FactoredPoly> {
    check_b(b)?;
    build_factored(vec![IntPoly::from_i64(&[b, 0, 1])?])
}

fn direct(b: i64, n: u64, start: SequenceStart) -> bool {
    let first = match start {
        SequenceStart::Zero => 0,
        SequenceStart::One => 1,
    };
    let an = term(b, n).unsigned_abs() as u64;
    primes::factor(an).into_iter().any(|(d, _)| {
        (first..n).all(|k| {
            let ak = term(b, k);
            ak == 0 || ak.rem_euclid(d as i128) != 0
        })
    })
}

pub fn has_primitive_divisor(b: i64, n: u64) -> Result<PrimDivRecord> {
    has_primitive_divisor_from(b, n, SequenceStart::One)
}

/// Uses P⁺(n² + b) > 2n for n > |b| and the definition otherwise.
pub fn has_primitive_divisor_from(b: i64, n: u64, start: SequenceStart) -> Result<PrimDivRecord> {
    check_b(b)?;
    if n == 0 {
        return Err(Error::Domain("index n must be >= 1".into()));
    }
    if n > MAX_X {
        return Err(Error::ScaleExceeded(format!("n = {n} above {MAX_X}")));
    }
    let pplus = primes::pplus_trial(term(b, n).unsigned_abs()).unwrap_or(0) as u64;
    Ok(if n > b.unsigned_abs() {
        PrimDivRecord { b, n, pplus, has_primitive: pplus > 2 * n, method: Method::Criterion }
    } else {
        PrimDivRecord { b, n, pplus, has_primitive: direct(b, n, start), method: Method::Direct }
    })
}

/// One record per n in [1, x]; the criterion part reads P⁺ from a sieve with bound 2x + |b|.
pub fn records(b: i64, x: u64, start: SequenceStart) -> Result<Vec<PrimDivRecord>> {
    let f = sequence_poly(b)?;
    if x > MAX_X {
        return Err(Error::ScaleExceeded(format!("x = {x} above {MAX_X}")));
    }
    let cut = b.unsigned_abs().min(x);
    let mut out = Vec::with_capacity(x as usize);
    for n in 1..=cut {
        out.push(has_primitive_divisor_from(b, n, start)?);
    }
    if x > cut {
        let table = pplus_table(&f, x, 2 * x + b.unsigned_abs())?;
        for n in cut + 1..=x {
            let pplus = match table.pplus_at(n) {
                Some(PPlus::Finite(p)) => *p as u64,
                other => return Err(Error::Domain(format!("unexpected P+ {other:?} at n = {n}"))),
            };
            out.push(PrimDivRecord { b, n, pplus, has_primitive: pplus > 2 * n, method: Method::Criterion });
        }
    }
    Ok(out)
}

/// R_b(x): n in [1, x] for which n² + b has a primitive divisor.
pub fn r_b(b: i64, x: u64) -> Result<u64> {
    Ok(records(b, x, SequenceStart::One)?.iter().filter(|r| r.has_primitive).count() as u64)
}

#[derive(Clone, Debug, Serialize)]
pub struct ArctanReport {
    pub x: u64,
    pub count: u64,
    /// At n = 1 the criterion P⁺(n² + 1) > 2n fails (P⁺(2) = 2) while arctan 1 is counted.
    pub n1_criterion_disagrees: bool,
}

/// Flags for n in [1, x]: arctan n irreducible, via P⁺(n² + 1) > 2n for n >= 2 and counted at
/// n = 1. P⁺ here comes from trial division on the largest-prime-divisor lists of n² + 1.
pub fn arctan_flags(x: u64) -> Result<Vec<bool>> {
    if x > MAX_X {
        return Err(Error::ScaleExceeded(format!("x = {x} above {MAX_X}")));
    }
    if x == 0 {
        return Ok(Vec::new());
    }
    let f = sequence_poly(1)?;
    let lists = crate::smoothsieve::prime_divisor_lists(&f, 1, x)?;
    Ok(lists
        .iter()
        .enumerate()
        .map(|(i, ps)| {
            let n = i as u128 + 1;
            n == 1 || ps.last().is_some_and(|&p| p > 2 * n)
        })
        .collect())
}

/// N(x), the number of n in [1, x] with arctan n irreducible.
pub fn n_arctan(x: u64) -> Result<ArctanReport> {
    let count = arctan_flags(x)?.iter().filter(|&&b| b).count() as u64;
    Ok(ArctanReport { x, count, n1_criterion_disagrees: x >= 1 })
}

#[derive(Clone, Debug, Serialize)]
pub struct Prop63Report {
    pub b: i64,
    pub x: u64,
    pub r_b: u64,
    pub psi_xx: u64,
    pub non_smooth: u64,
    pub residual: u64,
    /// r log x / (x log log x), absent when log log x <= 0.
    pub ratio_loglog: Option<f64>,
    pub ratio_x: f64,
}

/// R_b(x) against x − Ψ_f(x, x) for f = t² + b.
pub fn verify_prop63(b: i64, x: u64) -> Result<Prop63Report> {
    let f = sequence_poly(b)?;
    if x == 0 {
        return Err(Error::Domain("x must be >= 1".into()));
    }
    let r = r_b(b, x)?;
    let psi_xx = psi(&f, x, x as f64)?.psi;
    let non_smooth = x - psi_xx;
    let residual = r.abs_diff(non_smooth);
    let xf = x as f64;
    let ll = xf.ln().ln();
    Ok(Prop63Report {
        b,
        x,
        r_b: r,
        psi_xx,
        non_smooth,
        residual,
        ratio_loglog: (ll > 0.0).then(|| residual as f64 * xf.ln() / (xf * ll)),
        ratio_x: residual as f64 / xf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert!(has_primitive_divisor(1, 2).unwrap().has_primitive);
        assert!(!has_primitive_divisor(1, 3).unwrap().has_primitive);
        let r = has_primitive_divisor(1, 7).unwrap();
        assert_eq!((r.pplus, r.has_primitive, r.method), (5, false, Method::Criterion));
        let one = has_primitive_divisor(1, 1).unwrap();
        assert_eq!((one.has_primitive, one.method), (true, Method::Direct));
        assert!(matches!(r_b(-4, 10), Err(Error::Hypothesis(_))));
        assert!(matches!(has_primitive_divisor(0, 3), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn r1_ten() {
        let recs = records(1, 10, SequenceStart::One).unwrap();
        let set: Vec<u64> = recs.iter().filter(|r| r.has_primitive).map(|r| r.n).collect();
        assert_eq!(set, vec![1, 2, 4, 5, 6, 9, 10]);
        assert_eq!(n_arctan(10).unwrap().count, 7);
        assert_eq!(n_arctan(3).unwrap().count, 2);
    }

    #[test]
    fn small_x_below_b() {
        let rep = verify_prop63(-7, 5).unwrap();
        assert_eq!(rep.x, 5);
        assert!(records(-7, 5, SequenceStart::One).unwrap().iter().all(|r| r.method == Method::Direct));
    }
}

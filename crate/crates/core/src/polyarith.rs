//! Exact integer polynomials, validated factorizations, discriminants and the threshold T0.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::primes;

/// Nonzero polynomial with integer coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

fn trim(mut c: Vec<BigInt>) -> Vec<BigInt> {
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    c
}

fn raw_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn raw_derivative(a: &[BigInt]) -> Vec<BigInt> {
    trim(a.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
}

impl IntPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        let coeffs = trim(coeffs);
        if coeffs.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(IntPoly { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn lead(&self) -> &BigInt {
        self.coeffs.last().expect("nonzero polynomial")
    }

    pub fn eval(&self, n: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * n + c)
    }

    pub fn eval_i64(&self, n: i64) -> BigInt {
        self.eval(&BigInt::from(n))
    }

    /// Coefficients as `i128` when every one fits in `i64`.
    pub fn small_coeffs(&self) -> Option<Vec<i128>> {
        self.coeffs.iter().map(|c| c.to_i64().map(i128::from)).collect()
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        IntPoly { coeffs: raw_mul(&self.coeffs, &other.coeffs) }
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    /// The derivative, or `None` for a constant.
    pub fn derivative(&self) -> Option<IntPoly> {
        IntPoly::new(raw_derivative(&self.coeffs)).ok()
    }

    /// Positive gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Coefficients of `f(t + shift)`.
    pub fn taylor_shift(&self, shift: &BigInt) -> Vec<BigInt> {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = &c[j + 1] * shift;
                c[j] += t;
            }
        }
        c
    }

    /// Coefficients reduced into `[0, m)`.
    pub fn reduce_mod(&self, m: u64) -> Vec<u64> {
        let mb = BigInt::from(m);
        self.coeffs.iter().map(|c| c.mod_floor(&mb).to_u64().unwrap()).collect()
    }

    /// Some rational root `num/den` (den > 0), if one exists.
    pub fn rational_root(&self) -> Result<Option<(BigInt, BigInt)>> {
        if self.coeffs[0].is_zero() {
            return Ok(Some((BigInt::zero(), BigInt::one())));
        }
        let too_big = || Error::ScaleExceeded("rational-root test needs |a0|, |lead| < 2^63".into());
        let a0 = self.coeffs[0].abs().to_u64().ok_or_else(too_big)?;
        let an = self.lead().abs().to_u64().ok_or_else(too_big)?;
        let n = self.degree();
        for q in divisors(an) {
            for p in divisors(a0) {
                if primes::gcd(p, q) != 1 {
                    continue;
                }
                for s in [1i64, -1] {
                    let num = BigInt::from(p) * s;
                    let den = BigInt::from(q);
                    let mut acc = BigInt::zero();
                    for (i, c) in self.coeffs.iter().enumerate() {
                        acc += c * num.pow(i as u32) * den.pow((n - i) as u32);
                    }
                    if acc.is_zero() {
                        return Ok(Some((num, den)));
                    }
                }
            }
        }
        Ok(None)
    }

    /// Signed discriminant; 1 for linear polynomials.
    pub fn discriminant(&self) -> BigInt {
        let n = self.degree();
        if n == 0 {
            return BigInt::zero();
        }
        if n == 1 {
            return BigInt::one();
        }
        let d = raw_derivative(&self.coeffs);
        let r = resultant(&self.coeffs, &d);
        let sign = if (n * (n - 1) / 2).is_multiple_of(2) { 1 } else { -1 };
        r * sign / self.lead()
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, v) in primes::factor(n) {
        let cur = ds.clone();
        let mut pk = 1u64;
        for _ in 0..v {
            pk *= p;
            ds.extend(cur.iter().map(|d| d * pk));
        }
    }
    ds.sort_unstable();
    ds
}

/// Resultant via the Sylvester matrix and fraction-free elimination.
pub fn resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for r in 0..n {
        for (i, c) in f.iter().rev().enumerate() {
            mat[r][r + i] = c.clone();
        }
    }
    for r in 0..m {
        for (i, c) in g.iter().rev().enumerate() {
            mat[n + r][r + i] = c.clone();
        }
    }
    bareiss_det(mat)
}

fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if neg {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            let a = c.abs();
            if i == 0 || !a.is_one() {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// Parses `"[c0,c1,...]"` (lowest degree first) or a symbolic sum such as `"t^2-2"`.
pub fn parse_poly(text: &str) -> Result<IntPoly> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Syntax("empty polynomial".into()));
    }
    if let Some(body) = s.strip_prefix('[') {
        let body = body.strip_suffix(']').ok_or_else(|| Error::Syntax(format!("unclosed list: {text}")))?;
        if body.is_empty() {
            return Err(Error::Syntax("empty coefficient list".into()));
        }
        let coeffs = body
            .split(',')
            .map(|t| t.trim_matches('"').parse::<BigInt>().map_err(|_| Error::Syntax(format!("bad coefficient {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        return IntPoly::new(coeffs);
    }
    parse_symbolic(&s)
}

fn parse_symbolic(s: &str) -> Result<IntPoly> {
    let bad = |why: &str| Error::Syntax(format!("{why} in {s:?}"));
    let b = s.as_bytes();
    let mut i = 0;
    let mut terms: BTreeMap<usize, BigInt> = BTreeMap::new();
    while i < b.len() {
        let mut sign = BigInt::one();
        if b[i] == b'+' || b[i] == b'-' {
            if b[i] == b'-' {
                sign = -sign;
            }
            i += 1;
        } else if i > 0 {
            return Err(bad("expected + or -"));
        }
        let start = i;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        let coef = if i > start { s[start..i].parse::<BigInt>().unwrap() } else { BigInt::one() };
        let has_digits = i > start;
        if i < b.len() && b[i] == b'*' {
            if !has_digits {
                return Err(bad("dangling *"));
            }
            i += 1;
            if i >= b.len() || b[i] != b't' {
                return Err(bad("expected t after *"));
            }
        }
        let mut exp = 0usize;
        if i < b.len() && b[i] == b't' {
            i += 1;
            exp = 1;
            if i < b.len() && b[i] == b'^' {
                i += 1;
                let es = i;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                if es == i {
                    return Err(bad("missing exponent"));
                }
                exp = s[es..i].parse().map_err(|_| bad("exponent too large"))?;
            }
        } else if !has_digits {
            return Err(bad("empty term"));
        }
        *terms.entry(exp).or_insert_with(BigInt::zero) += sign * coef;
    }
    let deg = *terms.keys().next_back().ok_or_else(|| bad("no terms"))?;
    let mut coeffs = vec![BigInt::zero(); deg + 1];
    for (e, c) in terms {
        coeffs[e] = c;
    }
    IntPoly::new(coeffs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Irreducibility {
    Proven,
    Asserted,
}

/// A radical polynomial given as its distinct irreducible factors.
#[derive(Clone, Debug)]
pub struct FactoredPoly {
    factors: Vec<IntPoly>,
    product: IntPoly,
    discriminant_abs: BigUint,
    status: Vec<Irreducibility>,
    sign_flipped: bool,
}

/// Validates the factor list and computes |Δ_f| from factor discriminants and pairwise resultants.
pub fn build_factored(factors: Vec<IntPoly>) -> Result<FactoredPoly> {
    if factors.is_empty() {
        return Err(Error::EmptyFactorList);
    }
    let mut norm = Vec::with_capacity(factors.len());
    let mut flips = 0;
    for f in factors {
        if f.degree() == 0 {
            return Err(Error::Domain(format!("constant factor {f}")));
        }
        let f = if f.lead().is_negative() {
            flips += 1;
            f.neg()
        } else {
            f
        };
        let c = f.content();
        if !c.is_one() {
            return Err(Error::NonPrimitive(f.to_string(), c.to_string()));
        }
        if norm.contains(&f) {
            return Err(Error::DuplicateFactor(f.to_string()));
        }
        norm.push(f);
    }
    let mut status = Vec::with_capacity(norm.len());
    for f in &norm {
        if f.degree() >= 2 {
            if let Some((p, q)) = f.rational_root()? {
                let root = if q.is_one() { p.to_string() } else { format!("{p}/{q}") };
                return Err(Error::RationalRoot { factor: f.to_string(), root });
            }
        }
        status.push(if f.degree() <= 3 { Irreducibility::Proven } else { Irreducibility::Asserted });
    }
    let mut disc = BigInt::one();
    for (i, f) in norm.iter().enumerate() {
        disc *= f.discriminant();
        for g in &norm[i + 1..] {
            let r = resultant(f.coeffs(), g.coeffs());
            disc *= &r * &r;
        }
    }
    if disc.is_zero() {
        return Err(Error::Hypothesis("factors share a root, so the product is not squarefree".into()));
    }
    let product = norm.iter().skip(1).fold(norm[0].clone(), |acc, f| acc.mul(f));
    Ok(FactoredPoly {
        factors: norm,
        product,
        discriminant_abs: disc.abs().to_biguint().unwrap(),
        status,
        sign_flipped: flips % 2 == 1,
    })
}

/// Serializable description of a factored polynomial.
#[derive(Clone, Debug, Serialize)]
pub struct PolySummary {
    pub poly: String,
    pub factors: Vec<String>,
    pub degrees: Vec<usize>,
    pub g: usize,
    pub d: usize,
    pub discriminant_abs: String,
    pub irreducibility: Vec<Irreducibility>,
    pub unproven_irreducibility: bool,
    pub sign_flipped: bool,
    pub t0: Option<u64>,
}

impl FactoredPoly {
    pub fn factors(&self) -> &[IntPoly] {
        &self.factors
    }

    /// The expanded product `f = f_1 ... f_g`.
    pub fn poly(&self) -> &IntPoly {
        &self.product
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.factors.iter().map(IntPoly::degree).collect()
    }

    pub fn g(&self) -> usize {
        self.factors.len()
    }

    pub fn d(&self) -> usize {
        self.product.degree()
    }

    pub fn discriminant_abs(&self) -> &BigUint {
        &self.discriminant_abs
    }

    pub fn status(&self) -> &[Irreducibility] {
        &self.status
    }

    /// True when some factor's irreducibility was taken on trust.
    pub fn has_warning(&self) -> bool {
        self.status.contains(&Irreducibility::Asserted)
    }

    /// True when the input product had negative leading coefficient.
    pub fn sign_flipped(&self) -> bool {
        self.sign_flipped
    }

    pub fn eval(&self, n: i64) -> BigInt {
        self.product.eval_i64(n)
    }

    /// T0 for the normalized orientation (leading coefficient positive).
    pub fn t0(&self) -> Result<u64> {
        t0(&self.product, 1)
    }

    pub fn summary(&self) -> PolySummary {
        PolySummary {
            poly: self.product.to_string(),
            factors: self.factors.iter().map(ToString::to_string).collect(),
            degrees: self.degrees(),
            g: self.g(),
            d: self.d(),
            discriminant_abs: self.discriminant_abs.to_string(),
            irreducibility: self.status.clone(),
            unproven_irreducibility: self.has_warning(),
            sign_flipped: self.sign_flipped,
            t0: self.t0().ok(),
        }
    }
}

/// Parses a JSON array whose entries are coefficient arrays or symbolic strings.
pub fn parse_factors(text: &str) -> Result<Vec<IntPoly>> {
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Syntax(format!("factor list is not JSON: {e}")))?;
    let items = v.as_array().ok_or_else(|| Error::Syntax("factor list must be a JSON array".into()))?;
    items
        .iter()
        .map(|item| match item {
            serde_json::Value::String(s) => parse_poly(s),
            serde_json::Value::Array(cs) => {
                let coeffs = cs
                    .iter()
                    .map(|c| match c {
                        serde_json::Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string()),
                        serde_json::Value::String(s) => Ok(s.clone()),
                        other => Err(Error::Syntax(format!("bad coefficient {other}"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                parse_poly(&format!("[{}]", coeffs.join(",")))
            }
            other => Err(Error::Syntax(format!("bad factor {other}"))),
        })
        .collect()
}

fn shift_nonnegative(c: &IntPoly, t: u64) -> bool {
    c.taylor_shift(&BigInt::from(t)).iter().all(|x| !x.is_negative())
}

fn cauchy_bound(c: &IntPoly) -> BigInt {
    let lead = c.lead().abs();
    let max = c.coeffs()[..c.degree()].iter().map(|x| x.abs()).max().unwrap_or_default();
    BigInt::one() + max.div_ceil(&lead)
}

/// Least integer `T >= 2` such that `(sign·f)'(T+s)` and `sign·f(T+s) - 1` have no negative
/// coefficients in `s`. Such `T` makes `sign·f` strictly increasing and `> 1` on `(T, ∞)`, and
/// the property is monotone in `T`, so binary search applies below the Cauchy root bound.
pub fn t0(f: &IntPoly, sign: i32) -> Result<u64> {
    if f.degree() == 0 {
        return Err(Error::ConstantPolynomial);
    }
    let g = if sign < 0 { f.neg() } else { f.clone() };
    if g.lead().is_negative() {
        return Err(Error::Hypothesis("sign·f must tend to +infinity".into()));
    }
    let deriv = g.derivative().expect("nonconstant");
    let mut minus_one = g.coeffs().to_vec();
    minus_one[0] -= 1;
    let minus_one = IntPoly::new(minus_one)?;
    let hi = cauchy_bound(&deriv).max(cauchy_bound(&minus_one)).max(BigInt::from(2));
    let mut hi = hi.to_u64().ok_or_else(|| Error::ScaleExceeded("T0 above 2^64".into()))?;
    let ok = |t: u64| shift_nonnegative(&deriv, t) && shift_nonnegative(&minus_one, t);
    debug_assert!(ok(hi));
    let mut lo = 2u64;
    if ok(lo) {
        return Ok(lo);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn parsing_examples() {
        let f = p("[1,0,1]");
        assert_eq!(f.degree(), 2);
        assert_eq!(f, p("t^2+1"));
        assert_eq!(p("t^2-2").coeffs(), &[BigInt::from(-2), BigInt::zero(), BigInt::one()]);
        assert_eq!(parse_poly("[0]"), Err(Error::ZeroPolynomial));
        assert_eq!(p("2*t^2 + 3t + 1"), IntPoly::from_i64(&[1, 3, 2]).unwrap());
        assert_eq!(p("-t+10"), IntPoly::from_i64(&[10, -1]).unwrap());
        assert!(matches!(parse_poly("t^"), Err(Error::Syntax(_))));
        assert!(matches!(parse_poly("t^2++1"), Err(Error::Syntax(_))));
        assert!(matches!(parse_poly("x^2"), Err(Error::Syntax(_))));
        assert!(matches!(parse_poly(""), Err(Error::Syntax(_))));
        assert_eq!(parse_poly("t-t"), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn display_round_trips() {
        for s in ["t^2+1", "t^3+t", "2t^2+3t+1", "-t^5+7", "t", "-3"] {
            let f = p(s);
            assert_eq!(f.to_string(), s);
            assert_eq!(p(&f.to_string()), f);
        }
    }

    #[test]
    fn eval_examples() {
        assert_eq!(p("t^2+1").eval_i64(3), BigInt::from(10));
        assert_eq!(p("t^2-2").eval_i64(1), BigInt::from(-1));
        assert_eq!(p("2t^2+3t+1").eval_i64(4), BigInt::from(45));
        let big = p("t^7+1").eval_i64(1 << 40);
        assert_eq!(big, BigInt::from(2).pow(280) + 1);
    }

    #[test]
    fn discriminants() {
        assert_eq!(p("t^2+1").discriminant(), BigInt::from(-4));
        assert_eq!(p("3t^2+5t-7").discriminant(), BigInt::from(25 + 84));
        // cubic t^3 + a t + b: -4a^3 - 27b^2
        assert_eq!(p("t^3-t+1").discriminant(), BigInt::from(4 - 27));
        assert_eq!(p("2t+5").discriminant(), BigInt::one());
    }

    #[test]
    fn build_examples() {
        let f = build_factored(vec![p("t^2+1")]).unwrap();
        assert_eq!((f.g(), f.d()), (1, 2));
        assert_eq!(f.discriminant_abs(), &BigUint::from(4u32));
        let f = build_factored(vec![p("t"), p("t^2+1")]).unwrap();
        assert_eq!((f.g(), f.d()), (2, 3));
        assert_eq!(f.discriminant_abs(), &BigUint::from(4u32));
        assert_eq!(f.discriminant_abs(), &f.poly().discriminant().abs().to_biguint().unwrap());
        assert!(matches!(build_factored(vec![p("t^2-1")]), Err(Error::RationalRoot { .. })));
        assert!(matches!(build_factored(vec![p("t"), p("t")]), Err(Error::DuplicateFactor(_))));
        assert!(matches!(build_factored(vec![p("2t+2")]), Err(Error::NonPrimitive(..))));
        assert!(matches!(build_factored(vec![p("6t^2+t-1")]), Err(Error::RationalRoot { .. })));
        assert_eq!(build_factored(vec![]).unwrap_err(), Error::EmptyFactorList);
        let q = build_factored(vec![p("t^4+1")]).unwrap();
        assert!(q.has_warning());
        assert_eq!(q.discriminant_abs(), &BigUint::from(256u32));
        let n = build_factored(vec![p("-t^2-1")]).unwrap();
        assert!(n.sign_flipped());
        assert_eq!(n.poly(), &p("t^2+1"));
    }

    #[test]
    fn t0_examples() {
        assert_eq!(t0(&p("t^2+1"), 1).unwrap(), 2);
        assert_eq!(t0(&p("t^2-2"), 1).unwrap(), 2);
        assert_eq!(t0(&p("t-10"), 1).unwrap(), 11);
        assert_eq!(t0(&p("-t+10"), -1).unwrap(), 11);
        assert_eq!(t0(&p("5"), 1), Err(Error::ConstantPolynomial));
        assert!(t0(&p("-t^2"), 1).is_err());
    }

    #[test]
    fn t0_is_valid_by_scan() {
        for s in ["t^2+1", "t^2-2", "t-10", "t^3+t", "t^3+3t^2+2t+2", "t^3-50t", "t^4-20t^3+7", "3t^2-40t-1"] {
            let f = p(s);
            let t = t0(&f, 1).unwrap() as i64;
            let vals: Vec<BigInt> = (t + 1..t + 400).map(|n| f.eval_i64(n)).collect();
            assert!(vals.windows(2).all(|w| w[1] > w[0]), "{s}");
            assert!(vals[0] > BigInt::one(), "{s}");
        }
    }
}

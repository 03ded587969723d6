//! Independent brute-force reference implementations used to cross-check the fast paths.

use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::polyarith::FactoredPoly;
use crate::primes::pplus_trial;
use crate::smoothsieve::PPlus;

/// Roots of f modulo `m` by evaluating every residue.
pub fn roots_mod_scan(f: &FactoredPoly, m: u64) -> Vec<u64> {
    if m < 1 << 31 {
        let c = f.poly().reduce_mod(m);
        return (0..m).filter(|&u| c.iter().rev().fold(0u64, |acc, &x| (acc * u + x) % m) == 0).collect();
    }
    let c: Vec<u128> = f.poly().reduce_mod(m).into_iter().map(u128::from).collect();
    let m128 = m as u128;
    (0..m)
        .filter(|&u| c.iter().rev().fold(0u128, |acc, &x| (acc * u as u128 + x) % m128) == 0)
        .collect()
}

/// ω_f(k) by residue scan.
pub fn omega_scan(f: &FactoredPoly, k: u64) -> u64 {
    roots_mod_scan(f, k).len() as u64
}

/// P+(|f(n)|) by trial division.
pub fn pplus_value(f: &FactoredPoly, n: u64) -> Result<PPlus> {
    let v = f
        .eval(n as i64)
        .abs()
        .to_u128()
        .filter(|&v| v < 1u128 << 80)
        .ok_or_else(|| Error::ScaleExceeded(format!("|f({n})| too large for trial division")))?;
    Ok(match pplus_trial(v) {
        None => PPlus::Infinite,
        Some(p) => PPlus::Finite(p),
    })
}

/// Smallest-prime-factor table on `0..=n`.
fn spf_table(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// ω_f from the factorization of k, each prime-power count found by exhaustive search over
/// all residues mod p and then all p lifts of every root at each higher level.
pub struct OmegaBrute {
    coeffs: Vec<num_bigint::BigInt>,
    memo: std::collections::HashMap<(u64, u32), u64>,
}

impl OmegaBrute {
    pub fn new(f: &FactoredPoly) -> Self {
        OmegaBrute { coeffs: f.poly().coeffs().to_vec(), memo: Default::default() }
    }

    fn reduced(&self, m: u128) -> Vec<u128> {
        let mb = num_bigint::BigInt::from(m);
        self.coeffs.iter().map(|c| (((c % &mb) + &mb) % &mb).to_u128().unwrap()).collect()
    }

    pub fn prime_power(&mut self, p: u64, v: u32) -> u64 {
        if let Some(&c) = self.memo.get(&(p, v)) {
            return c;
        }
        let p128 = p as u128;
        let eval = |c: &[u128], u: u128, m: u128| c.iter().rev().fold(0u128, |acc, &x| (acc * u % m + x) % m);
        let red = self.reduced(p128);
        let mut roots: Vec<u128> = (0..p128).filter(|&u| eval(&red, u, p128) == 0).collect();
        let mut pk = p128;
        for _ in 1..v {
            let next = pk * p128;
            let red = self.reduced(next);
            roots = roots
                .iter()
                .flat_map(|&r| (0..p128).map(move |t| r + t * pk))
                .filter(|&u| eval(&red, u, next) == 0)
                .collect();
            pk = next;
        }
        let c = roots.len() as u64;
        self.memo.insert((p, v), c);
        c
    }

    pub fn at(&mut self, mut k: u64) -> u64 {
        let mut acc = 1;
        let mut d = 2u64;
        while k > 1 {
            if d * d > k {
                return acc * self.prime_power(k, 1);
            }
            if k.is_multiple_of(d) {
                let mut v = 0;
                while k.is_multiple_of(d) {
                    k /= d;
                    v += 1;
                }
                acc *= self.prime_power(d, v);
                if acc == 0 {
                    return 0;
                }
            }
            d += 1;
        }
        acc
    }
}

/// V/W sums evaluated by literal nested loops over every integer in each summation range,
/// skipping only terms with Λ = 0.
#[derive(Clone, Debug)]
pub struct LiteralVW {
    pub lhs: u64,
    pub v21: f64,
    pub w21: f64,
    /// Index m−1 holds the depth-m value.
    pub v_plus: Vec<f64>,
    pub w_plus: Vec<f64>,
    /// Index i−1 holds the i-th tail term.
    pub v_minus: Vec<f64>,
    pub w_minus: Vec<f64>,
}

struct Lit<'a> {
    h: u64,
    fx: u64,
    y: f64,
    spf: Vec<u32>,
    vals: Vec<(u128, bool)>,
    omega: &'a mut OmegaBrute,
}

impl Lit<'_> {
    fn lam(&self, k: u64) -> f64 {
        if k < 2 {
            return 0.0;
        }
        let p = self.spf[k as usize] as u64;
        let mut r = k;
        while r.is_multiple_of(p) {
            r /= p;
        }
        if r == 1 {
            (p as f64).ln()
        } else {
            0.0
        }
    }

    fn pplus(&self, mut k: u64) -> u64 {
        let mut best = 1;
        while k > 1 {
            let p = self.spf[k as usize] as u64;
            best = best.max(p);
            k /= p;
        }
        best
    }

    fn le_y(&self, p: u64) -> bool {
        p as f64 <= self.y
    }

    fn le_sqrt_y(&self, p: u64) -> bool {
        (p as f64) * (p as f64) <= self.y
    }

    fn count(&self, kappa: u64) -> u64 {
        self.vals.iter().filter(|(v, smooth)| *smooth && v % kappa as u128 == 0).count() as u64
    }

    // ordered tuples k_j.. with prod <= h, P+ <= y; leaf weight * count(prod)
    fn plus_rec(&self, prod: u64, rest: usize, w: f64) -> f64 {
        if rest == 0 {
            return w * self.count(prod) as f64;
        }
        let mut acc = 0.0;
        for k in 1..=self.h / prod {
            let l = self.lam(k);
            if l == 0.0 || !self.le_y(self.pplus(k)) {
                continue;
            }
            acc += self.plus_rec(prod * k, rest - 1, w * l);
        }
        acc
    }

    fn minus_rec(&mut self, prod: u64, rest: usize, w: f64) -> f64 {
        let mut acc = 0.0;
        if rest == 0 {
            for k in self.h / prod + 1..=self.fx {
                let l = self.lam(k);
                if l == 0.0 || !self.le_y(self.pplus(k)) {
                    continue;
                }
                acc += w * l * self.omega.at(prod * k) as f64;
            }
            return acc;
        }
        for k in 1..=self.h / prod {
            let l = self.lam(k);
            if l == 0.0 || !self.le_y(self.pplus(k)) {
                continue;
            }
            acc += self.minus_rec(prod * k, rest - 1, w * l);
        }
        acc
    }
}

/// Literal transcription of every V/W sum up to the given depth.
pub fn vw_literal(f: &FactoredPoly, x: u64, z: u64, y: f64, depth: usize, omega: &mut OmegaBrute) -> Result<LiteralVW> {
    let fx = f.eval(x as i64).to_u64().filter(|&v| v <= 5_000_000);
    let fx = fx.ok_or_else(|| Error::ScaleExceeded("literal oracle needs f(x) <= 5e6".into()))?;
    let fz = f.eval(z as i64).to_f64().unwrap();
    let log_fz = fz.ln();
    let log_ratio = (fz / x as f64).ln();
    let yf = crate::smoothsieve::y_floor(y);
    let mut vals = Vec::new();
    for n in z + 1..=x {
        let v = f.eval(n as i64).abs().to_u128().unwrap();
        vals.push((v, pplus_trial(v).is_some_and(|p| p <= yf)));
    }
    let mut lit = Lit { h: x - z, fx, y, spf: spf_table(fx as usize), vals, omega };
    let lhs = lit.vals.iter().filter(|v| v.1).count() as u64;

    let mut v21 = 0.0;
    for k in 1..=fx {
        let l = lit.lam(k);
        let p = lit.pplus(k);
        if l != 0.0 && !lit.le_sqrt_y(p) && lit.le_y(p) {
            v21 += l * lit.count(k) as f64;
        }
    }
    let mut w21 = 0.0;
    for k1 in 1..=fx {
        let l1 = lit.lam(k1);
        if l1 == 0.0 || !lit.le_sqrt_y(lit.pplus(k1)) {
            continue;
        }
        for k2 in 1..=fx {
            let l2 = lit.lam(k2);
            if l2 == 0.0 || !lit.le_sqrt_y(lit.pplus(k2)) {
                continue;
            }
            let l = k1 / gcd(k1, k2) * k2;
            w21 += l1 * l2 * lit.count(l) as f64;
        }
    }

    let h = lit.h;
    let mut v_plus = Vec::new();
    let mut w_plus = Vec::new();
    let mut v_minus = Vec::new();
    let mut w_minus = Vec::new();
    for m in 1..=depth {
        let mut vp = 0.0;
        for k1 in 1..=h {
            let l = lit.lam(k1);
            let p = lit.pplus(k1);
            if l == 0.0 || lit.le_sqrt_y(p) || !lit.le_y(p) {
                continue;
            }
            vp += lit.plus_rec(k1, m - 1, l);
        }
        let mut wp = 0.0;
        for k1 in 1..=h {
            for k2 in 1..=h {
                let (l1, l2) = (lit.lam(k1), lit.lam(k2));
                if l1 == 0.0 || l2 == 0.0 || !lit.le_sqrt_y(lit.pplus(k1)) || !lit.le_sqrt_y(lit.pplus(k2)) {
                    continue;
                }
                let l = k1 / gcd(k1, k2) * k2;
                if l <= h {
                    wp += lit.plus_rec(l, m - 1, l1 * l2);
                }
            }
        }
        v_plus.push(vp / (log_fz * log_ratio.powi(m as i32 - 1)));
        w_plus.push(wp / (log_fz.powi(2) * log_ratio.powi(m as i32 - 1)));

        let i = m;
        let vm = lit.minus_rec(1, i - 1, 1.0);
        let mut wm = 0.0;
        if i == 1 {
            for k1 in 1..=fx {
                let l1 = lit.lam(k1);
                if l1 == 0.0 || !lit.le_y(lit.pplus(k1)) {
                    continue;
                }
                for k2 in 1..=fx {
                    let l2 = lit.lam(k2);
                    if l2 == 0.0 || !lit.le_y(lit.pplus(k2)) {
                        continue;
                    }
                    let l = k1 / gcd(k1, k2) * k2;
                    if l > h {
                        wm += l1 * l2 * lit.omega.at(l) as f64;
                    }
                }
            }
        } else {
            for k1 in 1..=h {
                for k2 in 1..=h {
                    let (l1, l2) = (lit.lam(k1), lit.lam(k2));
                    if l1 == 0.0 || l2 == 0.0 || !lit.le_y(lit.pplus(k1)) || !lit.le_y(lit.pplus(k2)) {
                        continue;
                    }
                    let l = k1 / gcd(k1, k2) * k2;
                    if l <= h {
                        wm += lit.minus_rec(l, i - 2, l1 * l2);
                    }
                }
            }
        }
        v_minus.push(vm / (log_fz * log_ratio.powi(i as i32 - 1)));
        w_minus.push(wm / (log_fz.powi(2) * log_ratio.powi(i as i32 - 1)));
    }
    Ok(LiteralVW { lhs, v21: v21 / log_fz, w21: w21 / log_fz.powi(2), v_plus, w_plus, v_minus, w_minus })
}

/// Prime ideal uniqueness in ℚ(√m) by literal enumeration: n in `lo..=hi` is counted when some
/// prime p | n² − m has no k in `start..=hi`, k ≠ n, with p | k² − m and k + √m in the same
/// ideal (p, √m + n) as n + √m. Quadratic in the range; meant for hi up to a few thousand.
pub fn ideal_unique_brute(m: u64, lo: u64, hi: u64, start: u64) -> Vec<u64> {
    let m = m as i128;
    let mut out = Vec::new();
    for n in lo..=hi {
        let norm = (n as i128 * n as i128 - m).unsigned_abs() as u64;
        let unique = crate::primes::factor(norm.max(1)).into_iter().any(|(p, _)| {
            let p = p as i128;
            (start..=hi).filter(|&k| k != n).all(|k| {
                let k = k as i128;
                // The ideal (p, √m + n) contains k + √m iff p divides both k² − m and k − n.
                (k * k - m).rem_euclid(p) != 0 || (k - n as i128).rem_euclid(p) != 0
            })
        });
        if unique {
            out.push(n);
        }
    }
    out
}

/// Primitive divisor of A_n = n² + b straight from the definition: a prime d | A_n dividing no
/// nonzero A_k for 1 <= k < n.
pub fn primitive_divisor_brute(b: i64, n: u64) -> bool {
    let a = |k: u64| k as i128 * k as i128 + b as i128;
    let an = a(n).unsigned_abs() as u64;
    crate::primes::factor(an.max(1))
        .into_iter()
        .any(|(d, _)| (1..n).all(|k| a(k) == 0 || a(k).rem_euclid(d as i128) != 0))
}

//! Small-prime sieve, deterministic primality and trial-division factoring.

/// All primes `<= limit`, in increasing order.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    let mut i = 2usize;
    while i <= n {
        if !composite[i] {
            out.push(i as u64);
            if let Some(sq) = i.checked_mul(i) {
                let mut j = sq;
                while j <= n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        i += 1;
    }
    out
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Prime factorization by trial division, as sorted `(p, v)` pairs. `factor(1)` is empty.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "factor(0)");
    let mut out = Vec::new();
    let take = |n: &mut u64, p: u64, out: &mut Vec<(u64, u32)>| {
        if (*n).is_multiple_of(p) {
            let mut v = 0;
            while (*n).is_multiple_of(p) {
                *n /= p;
                v += 1;
            }
            out.push((p, v));
        }
    };
    take(&mut n, 2, &mut out);
    take(&mut n, 3, &mut out);
    let mut p = 5u64;
    while n > 1 && p.saturating_mul(p) <= n {
        if is_prime(n) {
            break;
        }
        take(&mut n, p, &mut out);
        take(&mut n, p + 2, &mut out);
        p += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `Some((p, v))` when `k = p^v` with `v >= 1`, `None` otherwise (so Λ(k) = 0).
pub fn mangoldt(k: u64) -> Option<(u64, u32)> {
    if k < 2 {
        return None;
    }
    let f = factor(k);
    if f.len() == 1 {
        Some(f[0])
    } else {
        None
    }
}

/// Λ(k) as a float.
pub fn mangoldt_log(k: u64) -> f64 {
    mangoldt(k).map_or(0.0, |(p, _)| (p as f64).ln())
}

/// Largest prime factor of `n` by plain trial division; `P+(0)` is `None` (infinite), `P+(1) = 1`.
pub fn pplus_trial(n: u128) -> Option<u128> {
    if n == 0 {
        return None;
    }
    if let Ok(small) = u64::try_from(n) {
        return Some(pplus_trial_u64(small) as u128);
    }
    let mut n = n;
    let mut best = 1u128;
    let mut d = 2u128;
    while d * d <= n {
        while n.is_multiple_of(d) {
            n /= d;
            best = d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        best = best.max(n);
    }
    Some(best)
}

fn pplus_trial_u64(mut n: u64) -> u64 {
    let mut best = 1;
    for d in [2, 3] {
        while n.is_multiple_of(d) {
            n /= d;
            best = d;
        }
    }
    let mut d = 5;
    while d <= n / d {
        for q in [d, d + 2] {
            while n.is_multiple_of(q) {
                n /= q;
                best = q;
            }
        }
        d += 6;
    }
    if n > 1 {
        best = best.max(n);
    }
    best
}

pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

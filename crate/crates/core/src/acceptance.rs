//! The acceptance suite: ten numbered checks, each yielding a pass/fail verdict and a few
//! deterministic detail lines. Shared by the `verify` command and the acceptance test target.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{cassels_coeff, gamma_f, thm11_main_term};
use crate::dickman::{rho, rho_rk4_grid};
use crate::error::Result;
use crate::modroots::{global_root_bound, huxley_bound, Omega};
use crate::oracle::{self, OmegaBrute};
use crate::polyarith::{build_factored, parse_poly, FactoredPoly};
use crate::primes::{self, gcd};
use crate::smoothsieve::{pplus_range, pplus_table, psi, psi_oracle, PPlus, SieveOptions};
use crate::{primdiv, quadfield, vwmachinery as vw};

pub const CRITERIA: [(u32, &str); 10] = [
    (1, "closed-form constants"),
    (2, "Dickman function solvers"),
    (3, "sieve against trial division"),
    (4, "Dickman consistency of the classical count"),
    (5, "main term monitor"),
    (6, "V/W machinery"),
    (7, "root-count suite"),
    (8, "quadratic-field bridge"),
    (9, "primitive divisors and arctangents"),
    (10, "determinism across thread counts"),
];

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub title: String,
    pub passed: bool,
    pub details: Vec<String>,
}

/// `v` rounded to 12 significant digits, printed in shortest form.
pub fn sig12(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let r: f64 = format!("{v:.11e}").parse().unwrap();
    if r != 0.0 && !(1e-4..1e15).contains(&r.abs()) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

/// Collects verdicts and detail lines for one criterion.
struct Checker {
    passed: bool,
    details: Vec<String>,
}

impl Checker {
    fn new() -> Self {
        Checker { passed: true, details: Vec::new() }
    }

    fn check(&mut self, ok: bool, line: impl Into<String>) {
        let line = line.into();
        self.passed &= ok;
        self.details.push(format!("[{}] {line}", if ok { "ok" } else { "FAIL" }));
    }

    fn note(&mut self, line: impl Into<String>) {
        self.details.push(format!("      {}", line.into()));
    }
}

fn fp(factors: &[&str]) -> Result<FactoredPoly> {
    build_factored(factors.iter().map(|s| parse_poly(s)).collect::<Result<Vec<_>>>()?)
}

fn name(factors: &[&str]) -> String {
    factors.iter().map(|s| format!("({s})")).collect()
}

fn criterion1(c: &mut Checker) -> Result<()> {
    let g = gamma_f(2, 1, 1.0)?;
    let exact = (19.0 + 105f64.sqrt()) / 32.0;
    c.check((g - exact).abs() <= 1e-12, format!("gamma(2,1,1) = {} vs (19+sqrt 105)/32 = {}", sig12(g), sig12(exact)));
    let cc = cassels_coeff(2)?;
    c.check((cc - 0.5430164).abs() < 1e-7 && cc > 0.543, format!("cassels_coeff(2) = {}", sig12(cc)));
    let mut worst = 0f64;
    for d in 2..=100u32 {
        worst = worst.max((cassels_coeff(d)? - (1.0 - gamma_f(d, 1, 1.0)? / d as f64)).abs());
    }
    c.check(worst <= 1e-12, format!("max |cassels(d) - (1 - gamma(d,1,1)/d)| over d in [2,100] = {}", sig12(worst)));
    Ok(())
}

fn criterion2(c: &mut Checker) -> Result<()> {
    let mut worst = 0f64;
    for i in 0..=1000 {
        let u = 1.0 + i as f64 / 1000.0;
        worst = worst.max((rho(u)? - (1.0 - u.ln())).abs());
    }
    c.check(worst <= 1e-10, format!("max |rho(u) - (1 - log u)| on [1,2] = {}", sig12(worst)));

    let h = 1e-4;
    let grid = rho_rk4_grid(10.0, h);
    let mut worst = 0f64;
    for (i, &v) in grid.iter().enumerate().step_by(7) {
        worst = worst.max((v - rho(i as f64 * h)?).abs());
    }
    c.check(worst <= 1e-8, format!("max |Chebyshev - RK4 (h = 1e-4)| on [0,10] = {}", sig12(worst)));

    let (mut resid, mut order) = (0f64, true);
    let dh = 1e-5;
    for i in 0..19 * 64 {
        let u = 1.0 + (i as f64 + 0.5) / 64.0;
        let deriv = (rho(u + dh)? - rho(u - dh)?) / (2.0 * dh);
        resid = resid.max((u * deriv + rho(u - 1.0)?).abs());
        order &= 0.0 < rho(u)? && rho(u)? < rho(u - 1.0)?;
    }
    c.check(resid <= 1e-8, format!("max delay-equation residual at mesh midpoints in (1,20) = {}", sig12(resid)));
    c.check(order, "0 < rho(u) < rho(u-1) at every midpoint");
    Ok(())
}

const SIEVE_POLYS: [&[&str]; 5] = [&["t"], &["t^2+1"], &["t^2-2"], &["t", "t^2+1"], &["t+1", "t^2+2"]];

fn criterion3(c: &mut Checker) -> Result<()> {
    const X: u64 = 2000;
    for fs in SIEVE_POLYS {
        let f = fp(fs)?;
        let truth: Vec<PPlus> = (1..=X).map(|n| oracle::pplus_value(&f, n)).collect::<Result<_>>()?;
        let mut mismatches = 0u64;
        for y in [1.0, 2.0, 3.0, 5.0, 10.0, 50.0] {
            let table = psi(&f, X, y)?;
            let mut count = 0;
            for x in 1..=X {
                count += u64::from(truth[x as usize - 1].le(y as u128));
                mismatches += u64::from(table.count_upto(x) != count);
            }
        }
        // y = x and y = x^2 move with x, so they are read off per-n largest prime factors.
        let sieved = pplus_range(&f, 1, X, 2.0, None, &SieveOptions::default())?;
        for n in 1..=X {
            mismatches += u64::from(sieved.pplus_at(n) != Some(&truth[n as usize - 1]));
        }
        for x in 1..=X {
            for y in [x as u128, x as u128 * x as u128] {
                let lib = (1..=x).filter(|&n| sieved.pplus_at(n).is_some_and(|p| p.le(y))).count();
                let tru = truth[..x as usize].iter().filter(|p| (*p).le(y)).count();
                mismatches += u64::from(lib != tru);
            }
        }
        let mut direct = 0;
        for x in (1..=60).chain((97..=X).step_by(97)) {
            for y in [x as f64, (x * x) as f64, 7.0] {
                direct += 1;
                mismatches += u64::from(psi(&f, x, y)?.psi != psi_oracle(&f, x, y)?);
            }
        }
        c.check(mismatches == 0, format!("psi vs oracle for f = {}: all x <= {X}, 8 y values, {direct} direct calls, {mismatches} mismatches", name(fs)));

        let maxv = (1..=X).map(|n| f.eval(n as i64).magnitude().clone()).max().unwrap();
        let bound = primes::isqrt(u128::try_from(maxv).unwrap_or(u128::MAX)) as u64 + 1;
        let table = pplus_table(&f, X, bound)?;
        let bad = (1..=X).filter(|&n| table.pplus_at(n) != Some(&truth[n as usize - 1])).count();
        c.check(bad == 0, format!("pplus_table (B = {bound}) vs trial division for f = {}: {bad} mismatches", name(fs)));
    }
    Ok(())
}

fn criterion4(c: &mut Checker) -> Result<()> {
    let f = fp(&["t"])?;
    let count = psi(&f, 1_000_000, 1000.0)?.psi;
    let ratio = count as f64 / 1e6;
    let r2 = rho(2.0)?;
    c.check((ratio - r2).abs() <= 0.02, format!("Psi(10^6, 10^3) = {count}, ratio {} vs rho(2) = {}, difference {} (tolerance 0.02)", sig12(ratio), sig12(r2), sig12(ratio - r2)));
    // Second-order term of the de Bruijn expansion, (1 - Euler gamma) rho(u - 1) / log x.
    let corrected = r2 + (1.0 - 0.577_215_664_901_532_9) * rho(1.0)? / 1e6f64.ln();
    c.note(format!("with the 1/log x correction the prediction is {}, difference {}", sig12(corrected), sig12(ratio - corrected)));
    Ok(())
}

fn criterion5(c: &mut Checker) -> Result<()> {
    let f = fp(&["t^2+1"])?;
    let x = 1_000_000u64;
    for u in [1.0, 1.5, 2.0] {
        let y = (x as f64).powf(1.0 / u);
        let count = psi(&f, x, y)?.psi;
        let main = thm11_main_term(&f, x as f64, u)?;
        let ratio = count as f64 / main.value;
        let line = format!(
            "u = {u}: Psi = {count}, main term = {} (coefficient {}), ratio {}, u within admissible range: {}",
            sig12(main.value),
            sig12(main.coefficient),
            sig12(ratio),
            main.u_in_range
        );
        if u == 1.0 {
            c.check((count as f64) < main.value, line);
        } else {
            c.check(ratio < 1.2, line);
        }
    }
    Ok(())
}

const VW_POLYS: [&[&str]; 4] = [&["t^2+1"], &["t^2-2"], &["t", "t^2+1"], &["t+1", "t^2+2"]];
const VW_XZ: [(u64, u64); 5] = [(60, 20), (100, 30), (150, 40), (200, 60), (300, 100)];
const VW_Y: [f64; 3] = [30.0, 300.0, 3000.0];
/// The literal nested loops run where f(x) stays below this.
const VW_LITERAL_FX: u64 = 100_000;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-10 * a.abs().max(b.abs()).max(1.0)
}

fn criterion6(c: &mut Checker) -> Result<()> {
    let (mut total, mut nonzero, mut literal, mut depth3) = (0, 0, 0, 0);
    let (mut fail21, mut fail_lit, mut fail_mono, mut fail31, mut fail_split, mut kappas) = (0, 0, 0, 0, 0, 0);
    for fs in VW_POLYS {
        let f = fp(fs)?;
        let omega = Omega::new(&f);
        let mut brute = OmegaBrute::new(&f);
        for (x, z) in VW_XZ {
            for y in VW_Y {
                total += 1;
                let inst = vw::VWInstance::new(&f, x, z, y, 1);
                let r21 = vw::vw_prop21(&inst)?;
                nonzero += u64::from(r21.lhs > 0);
                // Verdicts are strict on a nonempty left side.
                fail21 += u64::from(!r21.verdict_2_1);
                let d1 = vw::vw_prop32_with(&inst, &omega, true)?;
                let d2 = vw::vw_prop32_with(&vw::VWInstance::new(&f, x, z, y, 2), &omega, true)?;
                for r in [&d1, &d2] {
                    fail21 += u64::from(!r.verdict_2_1);
                    fail_mono += u64::from(r.monotone_v != Some(true) || r.monotone_w != Some(true));
                }
                if fs.len() == 1 && y == 300.0 {
                    let d3 = vw::vw_prop32_with(&vw::VWInstance::new(&f, x, z, y, 3), &omega, false)?;
                    depth3 += 1;
                    fail21 += u64::from(!d3.verdict_2_1);
                }
                let sp = vw::split_check(&inst, &omega)?;
                fail_split += u64::from(!sp.heads_match || !sp.tails_bounded);
                let ks: Vec<u64> = (1..=inst.h()).collect();
                kappas += ks.len();
                fail31 += vw::lemma31_with(&inst, &omega, &ks)?.iter().filter(|r| !r.verdict).count();

                let fx = f.eval(x as i64);
                if fx <= VW_LITERAL_FX.into() {
                    literal += 1;
                    let lit = oracle::vw_literal(&f, x, z, y, 2, &mut brute)?;
                    let mut ok = r21.lhs == lit.lhs && close(r21.v, lit.v21) && close(r21.w, lit.w21);
                    for (m, r) in [(1usize, &d1), (2, &d2)] {
                        ok &= close(r.v_plus.unwrap(), lit.v_plus[m - 1]) && close(r.w_plus.unwrap(), lit.w_plus[m - 1]);
                        for i in 0..m {
                            ok &= close(r.v_minus[i], lit.v_minus[i]) && close(r.w_minus[i], lit.w_minus[i]);
                        }
                    }
                    fail_lit += u64::from(!ok);
                }
            }
        }
    }
    c.check(total >= 50 && fail21 == 0, format!("inequality (2.1): {total} instances, {nonzero} with nonzero left side, {fail21} failures (depths 1-2 on all, depth 3 on {depth3})"));
    c.check(fail_lit == 0, format!("component sums vs literal nested loops: {literal} instances, {fail_lit} mismatches"));
    c.check(fail_mono == 0, format!("depth-2 monotone relations: {fail_mono} failures"));
    c.check(fail31 == 0, format!("one-step recursion: {kappas} (instance, kappa) pairs, {fail31} failures"));
    c.check(fail_split == 0, format!("depth-1 heads equal, tails bounded: {fail_split} failures"));
    c.note("literal oracle restricted to f(x) <= 10^5 (quadratics at every x, cubics at x = 60)");
    Ok(())
}

const OMEGA_POLYS: [&[&str]; 3] = [&["t^2+1"], &["t^2-2"], &["t", "t^2+1"]];
const OMEGA_SCAN_MAX: u64 = 10_000;
const LEMMA42_SCAN_MAX: u64 = 200_000;

fn criterion7(c: &mut Checker) -> Result<()> {
    for fs in OMEGA_POLYS {
        let f = fp(fs)?;
        let omega = Omega::new(&f);
        let mut brute = OmegaBrute::new(&f);
        let scan: Vec<u64> = (0..=OMEGA_SCAN_MAX).map(|k| if k == 0 { 0 } else { oracle::omega_scan(&f, k) }).collect();
        let mut bad = 0;
        for k in 1..=OMEGA_SCAN_MAX {
            bad += u64::from(omega.at(k)? != scan[k as usize]);
        }
        let mut pairs = 0;
        for a in 1..=OMEGA_SCAN_MAX {
            for b in 1..=OMEGA_SCAN_MAX / a {
                if gcd(a, b) == 1 {
                    pairs += 1;
                    bad += u64::from(scan[(a * b) as usize] != scan[a as usize] * scan[b as usize]);
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
        let mut sampled = 0;
        while sampled < 20_000 {
            let (a, b) = (rng.gen_range(1..=10_000u64), rng.gen_range(1..=10_000u64));
            if gcd(a, b) != 1 {
                continue;
            }
            sampled += 1;
            bad += u64::from(omega.at(a * b)? != omega.at(a)? * omega.at(b)?);
        }
        c.check(bad == 0, format!("{}: omega vs residue scan for k <= {OMEGA_SCAN_MAX}, {pairs} coprime pairs with ab <= {OMEGA_SCAN_MAX}, {sampled} sampled pairs a, b <= 10^4: {bad} failures", name(fs)));

        let global = global_root_bound(&f);
        let disc = f.discriminant_abs();
        let (mut hux, mut hensel, mut cross, mut checked) = (0, 0, 0, 0);
        for p in primes::primes_up_to(1000) {
            let w1 = omega.prime_power(p, 1)?;
            let ramified = disc % p == num_bigint::BigUint::from(0u32);
            for v in 1..=4u32 {
                let w = omega.prime_power(p, v)?;
                checked += 1;
                hux += u64::from(w as f64 > huxley_bound(&f, p) || w as f64 > global);
                hensel += u64::from(!ramified && w != w1);
                if p.pow(v) <= 1_000_000 {
                    cross += u64::from(w != brute.prime_power(p, v));
                }
            }
        }
        c.check(hux + hensel + cross == 0, format!("{}: {checked} prime powers p <= 1000, v <= 4: Huxley bound {hux}, Hensel stability {hensel}, lift search {cross} failures", name(fs)));

        let small: Vec<u64> = primes::primes_up_to(50);
        let bound = global;
        let (mut tuples, mut scanned, mut fails) = (0, 0, 0);
        let mut tuple = Vec::new();
        lemma42_walk(&small, 0, &mut tuple, &mut |t: &[(u64, u32)]| -> Result<()> {
            tuples += 1;
            let modulus: u64 = t.iter().map(|&(p, v)| p.pow(v)).product();
            let lhs = if modulus <= LEMMA42_SCAN_MAX {
                scanned += 1;
                oracle::omega_scan(&f, modulus)
            } else {
                omega.of_factored(t)?
            };
            let mut rhs = 1.0;
            for &(p, v) in t {
                rhs *= if disc % p == num_bigint::BigUint::from(0u32) { bound } else { omega.prime_power(p, v)? as f64 };
            }
            fails += u64::from(lhs as f64 > rhs);
            Ok(())
        })?;
        c.check(fails == 0, format!("{}: product bound over {tuples} tuples (p <= 50, v <= 3, m <= 3), {scanned} by residue scan: {fails} failures", name(fs)));
    }
    c.note(format!("scan oracles limited to k <= {OMEGA_SCAN_MAX} and moduli <= {LEMMA42_SCAN_MAX}; larger cases use the library with multiplicativity checked by sampling"));
    Ok(())
}

/// Visits every tuple of 1 to 3 prime powers on distinct primes in increasing order.
fn lemma42_walk(
    primes: &[u64],
    from: usize,
    tuple: &mut Vec<(u64, u32)>,
    visit: &mut dyn FnMut(&[(u64, u32)]) -> Result<()>,
) -> Result<()> {
    for i in from..primes.len() {
        for v in 1..=3 {
            tuple.push((primes[i], v));
            visit(tuple)?;
            if tuple.len() < 3 {
                lemma42_walk(primes, i + 1, tuple, visit)?;
            }
            tuple.pop();
        }
    }
    Ok(())
}

fn criterion8(c: &mut Checker) -> Result<()> {
    let k2 = quadfield::QuadContext::new(2)?;
    let small: Vec<u64> = (1..=3).map(|x| quadfield::c_alpha(&k2, x).map(|r| r.count)).collect::<Result<_>>()?;
    c.check(small == [0, 1, 2], format!("C(x) for m = 2, x = 1, 2, 3: {small:?}"));

    for m in [2u64, 3, 6] {
        let k = quadfield::QuadContext::new(m)?;
        let thresholds = [2 * m, 100, 1000, 10_000];
        let rows = quadfield::lemma52_check(&k, 10_000, &thresholds)?;
        let bad: usize = rows.iter().map(|r| r.mismatches.len()).sum();
        let scan: Vec<u64> = (0..=2 * m).collect();
        let low = quadfield::lemma52_check(&k, 10_000, &scan)?;
        let empirical = low.iter().rev().take_while(|r| r.mismatches.is_empty()).last().map_or(2 * m + 1, |r| r.threshold);
        c.check(bad == 0, format!("m = {m}: prime / ideal paths agree for n <= 10^4 at thresholds {thresholds:?} ({bad} mismatches); empirical threshold {empirical}"));
    }

    let mut prev = f64::INFINITY;
    for x in [1000u64, 10_000, 100_000] {
        let r = quadfield::verify_prop54(&k2, x)?;
        c.check(
            r.within_calibration && r.ratio_x < prev,
            format!(
                "x = {x}: C = {}, x - Psi(x,x) = {}, residual {}, r log x / x = {} (constant {}), r/x = {}",
                r.c_alpha,
                r.non_smooth,
                r.residual,
                sig12(r.ratio_log),
                quadfield::PROP54_CONSTANT,
                sig12(r.ratio_x)
            ),
        );
        prev = r.ratio_x;
    }

    let win = quadfield::windowed_cassels(&k2, 100, 50, quadfield::ExclusionStart::Zero)?;
    let want = oracle::ideal_unique_brute(2, 101, 150, 0).len() as u64;
    c.check(win.count == want, format!("window (100, 150]: count {} vs enumeration {want}", win.count));
    let smoke = quadfield::windowed_cassels(&k2, 1_000_000, 1, quadfield::ExclusionStart::Zero)?;
    c.note(format!("window (10^6, 10^6 + 1]: count {} (smoke run; the 51/100 proportion is not checked)", smoke.count));
    Ok(())
}

fn criterion9(c: &mut Checker) -> Result<()> {
    let r10 = primdiv::r_b(1, 10)?;
    let def = (1..=10).filter(|&n| oracle::primitive_divisor_brute(1, n)).count() as u64;
    c.check(r10 == 7 && def == 7, format!("R_1(10) = {r10}, definition scan {def}"));

    let arctan = primdiv::arctan_flags(10_000)?;
    let recs = primdiv::records(1, 10_000, primdiv::SequenceStart::One)?;
    let (mut a, mut r, mut first_bad) = (0u64, 0u64, None);
    for (flag, rec) in arctan.iter().zip(&recs) {
        a += u64::from(*flag);
        r += u64::from(rec.has_primitive);
        if a != r && first_bad.is_none() {
            first_bad = Some(rec.n);
        }
    }
    c.check(first_bad.is_none(), format!("N(x) = R_1(x) for every x <= 10^4 (N(10^4) = {a}); first mismatch {first_bad:?}"));

    let lower = cassels_coeff(2)?;
    for b in [1i64, 2, 3] {
        let rb = primdiv::r_b(b, 1_000_000)?;
        let ratio = rb as f64 / 1e6;
        let ok = ratio > lower && (b != 1 || (0.5377 < ratio && ratio < 0.86));
        c.check(ok, format!("R_{b}(10^6) = {rb}, ratio {} (lower {}, log 2 = {})", sig12(ratio), sig12(lower), sig12(2f64.ln())));
    }

    let (mut px, mut pl) = (f64::INFINITY, f64::INFINITY);
    for x in [10_000u64, 100_000, 1_000_000] {
        let rep = primdiv::verify_prop63(1, x)?;
        let ll = rep.ratio_loglog.unwrap_or(f64::NAN);
        c.check(
            rep.ratio_x < px && ll < pl,
            format!(
                "x = {x}: R = {}, x - Psi(x,x) = {}, residual {}, r/x = {}, r log x / (x log log x) = {}",
                rep.r_b,
                rep.non_smooth,
                rep.residual,
                sig12(rep.ratio_x),
                sig12(ll)
            ),
        );
        px = rep.ratio_x;
        pl = ll;
    }
    Ok(())
}

fn run_one(id: u32) -> CriterionResult {
    let mut c = Checker::new();
    let outcome = match id {
        1 => criterion1(&mut c),
        2 => criterion2(&mut c),
        3 => criterion3(&mut c),
        4 => criterion4(&mut c),
        5 => criterion5(&mut c),
        6 => criterion6(&mut c),
        7 => criterion7(&mut c),
        8 => criterion8(&mut c),
        9 => criterion9(&mut c),
        10 => criterion10(&mut c),
        _ => Err(crate::Error::Domain(format!("no criterion {id}"))),
    };
    if let Err(e) = outcome {
        c.check(false, format!("error: {e}"));
    }
    let title = CRITERIA.iter().find(|t| t.0 == id).map_or("unknown", |t| t.1);
    CriterionResult { id, title: title.to_string(), passed: c.passed, details: c.details }
}

/// Runs one criterion by number.
pub fn run_criterion(id: u32) -> CriterionResult {
    run_one(id)
}

fn criterion10(c: &mut Checker) -> Result<()> {
    let pool = |n: usize| rayon::ThreadPoolBuilder::new().num_threads(n).build().expect("thread pool");
    let render_all = || render(&(1..=9).map(run_one).collect::<Vec<_>>());
    let single = pool(1).install(render_all);
    let multi = pool(4).install(render_all);
    let again = pool(4).install(render_all);
    c.check(single == multi && multi == again, format!("criteria 1-9 rendered on 1, 4 and 4 threads: {} bytes, identical: {}", single.len(), single == multi && multi == again));
    Ok(())
}

/// All ten criteria in order.
pub fn run_all() -> Vec<CriterionResult> {
    (1..=10).map(run_one).collect()
}

/// One criterion's verdict line followed by its indented details.
pub fn render_criterion(r: &CriterionResult) -> String {
    let mut out = format!("criterion {:>2}: {} ({})\n", r.id, if r.passed { "PASS" } else { "FAIL" }, r.title);
    for d in &r.details {
        let _ = writeln!(out, "    {d}");
    }
    out
}

/// The pass/fail table with detail lines; contains no timings, so equal inputs give equal bytes.
pub fn render(results: &[CriterionResult]) -> String {
    let mut out: String = results.iter().map(render_criterion).collect();
    let passed = results.iter().filter(|r| r.passed).count();
    let _ = writeln!(out, "{passed}/{} criteria passed", results.len());
    out
}

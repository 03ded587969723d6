//! Exact evaluation of the V/W sums that bound Ψ_f(x, y) − Ψ_f(z, y), the one-step recursion
//! that splits them by depth, and the four weighted prime-power sums behind their estimates.

use std::cell::RefCell;
use std::collections::HashMap;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modroots::Omega;
use crate::polyarith::FactoredPoly;
use crate::primes;
use crate::smoothsieve::{psi_range, y_floor, SieveOptions};

pub const MAX_X: u64 = 10_000;
pub const MAX_FX: u64 = 100_000_000;
pub const MAX_DEPTH: usize = 3;
pub const LEMMA41_MAX_X: u64 = 10_000_000;

/// Neumaier-compensated sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct Accumulator {
    sum: f64,
    comp: f64,
}

impl Accumulator {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct InstanceSpec {
    pub x: u64,
    pub z: u64,
    pub y: f64,
    #[serde(default = "one")]
    pub depth: usize,
}

fn one() -> usize {
    1
}

/// A desk-scale instance: `x > z > T0(f)`, `y >= 1`.
#[derive(Clone, Debug)]
pub struct VWInstance {
    pub f: FactoredPoly,
    pub x: u64,
    pub z: u64,
    pub y: f64,
    pub depth: usize,
}

impl VWInstance {
    pub fn new(f: &FactoredPoly, x: u64, z: u64, y: f64, depth: usize) -> Self {
        VWInstance { f: f.clone(), x, z, y, depth }
    }

    pub fn h(&self) -> u64 {
        self.x - self.z
    }
}

/// One prime power `k = p^v` with Λ(k) = log p.
#[derive(Clone, Copy, Debug)]
struct PrimePower {
    k: u64,
    p: u64,
    v: u32,
    lam: f64,
}

type Fac = Vec<(u64, u32)>;

fn fac_mul(a: &Fac, p: u64, v: u32) -> Fac {
    let mut out = a.clone();
    match out.iter_mut().find(|e| e.0 == p) {
        Some(e) => e.1 += v,
        None => {
            out.push((p, v));
            out.sort_unstable();
        }
    }
    out
}

fn lcm_pp(a: &PrimePower, b: &PrimePower) -> (u64, Fac) {
    if a.p == b.p {
        let v = a.v.max(b.v);
        (a.k.max(b.k), vec![(a.p, v)])
    } else {
        let mut f = vec![(a.p, a.v), (b.p, b.v)];
        f.sort_unstable();
        (a.k * b.k, f)
    }
}

/// Shared state for one instance: smooth values in (z, x], prime powers, memoized counts.
struct Ctx<'a> {
    h: u64,
    fx: u64,
    y: f64,
    log_fz: f64,
    log_ratio: f64,
    smooth_vals: Vec<u64>,
    pp: Vec<PrimePower>,
    omega: &'a Omega,
    s_memo: RefCell<HashMap<u64, u64>>,
}

impl<'a> Ctx<'a> {
    fn new(inst: &VWInstance, omega: &'a Omega, need_ratio: bool) -> Result<Self> {
        let f = &inst.f;
        if inst.y.is_nan() || inst.y < 1.0 {
            return Err(Error::Domain(format!("need y >= 1, got {}", inst.y)));
        }
        if inst.x > MAX_X {
            return Err(Error::ScaleExceeded(format!("x = {} above {MAX_X}", inst.x)));
        }
        let t0 = f.t0()?;
        if !(inst.x > inst.z && inst.z > t0) {
            return Err(Error::Hypothesis(format!("need x > z > T0 = {t0}, got x = {}, z = {}", inst.x, inst.z)));
        }
        if inst.depth == 0 || inst.depth > MAX_DEPTH {
            return Err(Error::Domain(format!("depth must be in 1..={MAX_DEPTH}")));
        }
        let fx = f.eval(inst.x as i64).to_u64().filter(|&v| v <= MAX_FX);
        let fx = fx.ok_or_else(|| Error::ScaleExceeded(format!("f(x) above {MAX_FX}")))?;
        let fz = f.eval(inst.z as i64).to_f64().unwrap();
        if need_ratio && fz <= inst.x as f64 {
            return Err(Error::Hypothesis(format!("need f(z) > x, got f(z) = {fz}")));
        }
        let table = psi_range(f, inst.z + 1, inst.x, inst.y, None, &SieveOptions::default())?;
        let smooth_vals = (inst.z + 1..=inst.x)
            .filter(|&n| table.is_smooth(n))
            .map(|n| f.eval(n as i64).to_u64().unwrap())
            .collect();
        let ymax = y_floor(inst.y).min(fx as u128) as u64;
        let mut pp = Vec::new();
        for p in primes::primes_up_to(ymax) {
            let lam = (p as f64).ln();
            let (mut k, mut v) = (p, 1);
            while k <= fx {
                pp.push(PrimePower { k, p, v, lam });
                match k.checked_mul(p) {
                    Some(n) => k = n,
                    None => break,
                }
                v += 1;
            }
        }
        pp.sort_unstable_by_key(|e| e.k);
        Ok(Ctx {
            h: inst.h(),
            fx,
            y: inst.y,
            log_fz: fz.ln(),
            log_ratio: (fz / inst.x as f64).ln(),
            smooth_vals,
            pp,
            omega,
            s_memo: RefCell::new(HashMap::new()),
        })
    }

    fn lhs(&self) -> u64 {
        self.smooth_vals.len() as u64
    }

    /// #{z < n <= x : κ | f(n), f(n) y-smooth}.
    fn s(&self, kappa: u64) -> u64 {
        if let Some(&c) = self.s_memo.borrow().get(&kappa) {
            return c;
        }
        let c = self.smooth_vals.iter().filter(|&&v| v % kappa == 0).count() as u64;
        self.s_memo.borrow_mut().insert(kappa, c);
        c
    }

    fn le_sqrt_y(&self, p: u64) -> bool {
        ((p as u128 * p as u128) as f64) <= self.y
    }

    fn omega_of(&self, fac: &Fac) -> Result<u64> {
        self.omega.of_factored(fac)
    }

    /// Sum over ordered tuples of `rest` more prime powers (P+ <= y) with κ·k_j... <= h,
    /// of Λ(k_j)... · S(κ · k_j...).
    fn plus_tail(&self, kappa: u64, rest: usize, weight: f64, acc: &mut Accumulator) {
        if rest == 0 {
            acc.add(weight * self.s(kappa) as f64);
            return;
        }
        for e in &self.pp {
            let Some(next) = kappa.checked_mul(e.k).filter(|&n| n <= self.h) else { break };
            if self.s(next) == 0 {
                continue;
            }
            self.plus_tail(next, rest - 1, weight * e.lam, acc);
        }
    }

    /// Sum over ordered prefixes of `rest` prime powers with product <= h, then one final k with
    /// h < κ·k <= κ·f(x), of Λ-weights times ω_f of the full product.
    fn minus_tail(&self, kappa: u64, fac: &Fac, rest: usize, weight: f64, acc: &mut Accumulator) -> Result<()> {
        if rest > 0 {
            for e in &self.pp {
                let Some(next) = kappa.checked_mul(e.k).filter(|&n| n <= self.h) else { break };
                let nf = fac_mul(fac, e.p, e.v);
                if self.omega_of(&nf)? == 0 {
                    continue;
                }
                self.minus_tail(next, &nf, rest - 1, weight * e.lam, acc)?;
            }
            return Ok(());
        }
        let lo = self.h / kappa;
        let start = self.pp.partition_point(|e| e.k <= lo);
        for e in &self.pp[start..] {
            let w = self.omega_of(&fac_mul(fac, e.p, e.v))?;
            if w > 0 {
                acc.add(weight * e.lam * w as f64);
            }
        }
        Ok(())
    }

    fn v_plus(&self, m: usize) -> f64 {
        let mut acc = Accumulator::default();
        for e in &self.pp {
            if e.k > self.h {
                break;
            }
            if self.le_sqrt_y(e.p) || self.s(e.k) == 0 {
                continue;
            }
            self.plus_tail(e.k, m - 1, e.lam, &mut acc);
        }
        acc.value() / (self.log_fz * self.log_ratio.powi(m as i32 - 1))
    }

    fn w_plus(&self, m: usize) -> f64 {
        let mut acc = Accumulator::default();
        let small: Vec<&PrimePower> = self.pp.iter().filter(|e| self.le_sqrt_y(e.p) && e.k <= self.h).collect();
        for a in &small {
            for b in &small {
                let (l, _) = lcm_pp(a, b);
                if l > self.h || self.s(l) == 0 {
                    continue;
                }
                self.plus_tail(l, m - 1, a.lam * b.lam, &mut acc);
            }
        }
        acc.value() / (self.log_fz.powi(2) * self.log_ratio.powi(m as i32 - 1))
    }

    fn v_minus(&self, i: usize) -> Result<f64> {
        let mut acc = Accumulator::default();
        self.minus_tail(1, &Vec::new(), i - 1, 1.0, &mut acc)?;
        Ok(acc.value() / (self.log_fz * self.log_ratio.powi(i as i32 - 1)))
    }

    fn w_minus(&self, i: usize) -> Result<f64> {
        let mut acc = Accumulator::default();
        if i == 1 {
            for a in &self.pp {
                for b in &self.pp {
                    let (l, fac) = lcm_pp(a, b);
                    if l <= self.h {
                        continue;
                    }
                    let w = self.omega_of(&fac)?;
                    if w > 0 {
                        acc.add(a.lam * b.lam * w as f64);
                    }
                }
            }
        } else {
            for a in &self.pp {
                if a.k > self.h {
                    break;
                }
                for b in &self.pp {
                    if b.k > self.h {
                        break;
                    }
                    let (l, fac) = lcm_pp(a, b);
                    if l > self.h || self.omega_of(&fac)? == 0 {
                        continue;
                    }
                    self.minus_tail(l, &fac, i - 2, a.lam * b.lam, &mut acc)?;
                }
            }
        }
        Ok(acc.value() / (self.log_fz.powi(2) * self.log_ratio.powi(i as i32 - 1)))
    }

    /// Prop 2.1 sums split at h: (V over k <= h, V over k > h, W over [k1, k2] <= h, W beyond).
    fn prop21_parts(&self) -> [f64; 4] {
        let mut acc: [Accumulator; 4] = Default::default();
        for e in &self.pp {
            if !self.le_sqrt_y(e.p) {
                let s = self.s(e.k);
                if s > 0 {
                    acc[usize::from(e.k > self.h)].add(e.lam * s as f64);
                }
            }
        }
        let small: Vec<&PrimePower> = self.pp.iter().filter(|e| self.le_sqrt_y(e.p)).collect();
        for a in &small {
            if self.s(a.k) == 0 {
                continue;
            }
            for b in &small {
                let (l, _) = lcm_pp(a, b);
                if l > self.fx {
                    continue;
                }
                let s = self.s(l);
                if s > 0 {
                    acc[2 + usize::from(l > self.h)].add(a.lam * b.lam * s as f64);
                }
            }
        }
        let (l1, l2) = (self.log_fz, self.log_fz.powi(2));
        [acc[0].value() / l1, acc[1].value() / l1, acc[2].value() / l2, acc[3].value() / l2]
    }

    fn prop21(&self) -> (f64, f64) {
        let [vh, vt, wh, wt] = self.prop21_parts();
        (vh + vt, wh + wt)
    }
}

/// Exact V/W values with inequality verdicts. Verdicts on an empty left side pass vacuously.
#[derive(Clone, Debug, Serialize)]
pub struct VWReport {
    pub x: u64,
    pub z: u64,
    pub y: f64,
    pub h: u64,
    pub t0: u64,
    pub depth: Option<usize>,
    pub lhs: u64,
    pub v: f64,
    pub w: f64,
    pub v_plus: Option<f64>,
    pub w_plus: Option<f64>,
    pub v_minus: Vec<f64>,
    pub w_minus: Vec<f64>,
    pub rhs_2_1: f64,
    pub rhs_2_2: f64,
    pub verdict_2_1: bool,
    pub verdict_2_2: bool,
    pub empty_lhs: bool,
    pub monotone_v: Option<bool>,
    pub monotone_w: Option<bool>,
}

fn report(inst: &VWInstance, lhs: u64, v: f64, w: f64) -> Result<VWReport> {
    let l = lhs as f64;
    let rhs_2_1 = v + l.sqrt() * w.sqrt();
    let rhs_2_2 = v + w / 2.0 + (v * w + w * w / 4.0).sqrt();
    Ok(VWReport {
        x: inst.x,
        z: inst.z,
        y: inst.y,
        h: inst.h(),
        t0: inst.f.t0()?,
        depth: None,
        lhs,
        v,
        w,
        v_plus: None,
        w_plus: None,
        v_minus: Vec::new(),
        w_minus: Vec::new(),
        rhs_2_1,
        rhs_2_2,
        verdict_2_1: lhs == 0 || l < rhs_2_1,
        verdict_2_2: lhs == 0 || l < rhs_2_2,
        empty_lhs: lhs == 0,
        monotone_v: None,
        monotone_w: None,
    })
}

/// V and W of the first (undivided) bound; the depth field is ignored.
pub fn vw_prop21(inst: &VWInstance) -> Result<VWReport> {
    let omega = Omega::new(&inst.f);
    let ctx = Ctx::new(&VWInstance { depth: 1, ..inst.clone() }, &omega, false)?;
    let (v, w) = ctx.prop21();
    report(inst, ctx.lhs(), v, w)
}

/// Depth-m split V = V_m^+ + Σ V_i^-, W = W_m^+ + Σ W_i^-. With `monotone`, also evaluates the
/// depth m+1 top terms and checks V_m^+ < V_{m+1}^+ + V_{m+1}^- (and for W); a zero V_m^+ or
/// W_m^+ passes vacuously.
pub fn vw_prop32(inst: &VWInstance, monotone: bool) -> Result<VWReport> {
    let omega = Omega::new(&inst.f);
    vw_prop32_with(inst, &omega, monotone)
}

/// As [`vw_prop32`] with a caller-supplied ω_f cache.
pub fn vw_prop32_with(inst: &VWInstance, omega: &Omega, monotone: bool) -> Result<VWReport> {
    let ctx = Ctx::new(inst, omega, true)?;
    let m = inst.depth;
    let vp = ctx.v_plus(m);
    let wp = ctx.w_plus(m);
    let vm = (1..=m).map(|i| ctx.v_minus(i)).collect::<Result<Vec<_>>>()?;
    let wm = (1..=m).map(|i| ctx.w_minus(i)).collect::<Result<Vec<_>>>()?;
    let v = vm.iter().fold(vp, |a, b| a + b);
    let w = wm.iter().fold(wp, |a, b| a + b);
    let mut r = report(inst, ctx.lhs(), v, w)?;
    r.depth = Some(m);
    r.v_plus = Some(vp);
    r.w_plus = Some(wp);
    r.v_minus = vm;
    r.w_minus = wm;
    if monotone {
        let (vp1, vm1) = (ctx.v_plus(m + 1), ctx.v_minus(m + 1)?);
        let (wp1, wm1) = (ctx.w_plus(m + 1), ctx.w_minus(m + 1)?);
        r.monotone_v = Some(vp == 0.0 || vp < vp1 + vm1);
        r.monotone_w = Some(wp == 0.0 || wp < wp1 + wm1);
    }
    Ok(r)
}

/// The undivided V and W split at h against the depth-1 terms: the parts with k <= h coincide
/// with V_1^+ and W_1^+, while the parts beyond h are bounded by V_1^- and W_1^-.
#[derive(Clone, Debug, Serialize)]
pub struct SplitReport {
    pub v_head: f64,
    pub v_plus: f64,
    pub v_tail: f64,
    pub v_minus: f64,
    pub w_head: f64,
    pub w_plus: f64,
    pub w_tail: f64,
    pub w_minus: f64,
    pub heads_match: bool,
    pub tails_bounded: bool,
}

fn rel_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

pub fn split_check(inst: &VWInstance, omega: &Omega) -> Result<SplitReport> {
    let ctx = Ctx::new(&VWInstance { depth: 1, ..inst.clone() }, omega, true)?;
    let [v_head, v_tail, w_head, w_tail] = ctx.prop21_parts();
    let (v_plus, w_plus) = (ctx.v_plus(1), ctx.w_plus(1));
    let (v_minus, w_minus) = (ctx.v_minus(1)?, ctx.w_minus(1)?);
    Ok(SplitReport {
        v_head,
        v_plus,
        v_tail,
        v_minus,
        w_head,
        w_plus,
        w_tail,
        w_minus,
        heads_match: rel_close(v_head, v_plus) && rel_close(w_head, w_plus),
        tails_bounded: v_tail <= v_minus * (1.0 + 1e-12) && w_tail <= w_minus * (1.0 + 1e-12),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma31Report {
    pub kappa: u64,
    pub lhs: u64,
    pub rhs_head: f64,
    pub rhs_tail: f64,
    pub rhs: f64,
    pub verdict: bool,
}

/// S(κ) against (1/log(f(z)/x)) [Σ_{λ<=h/κ} Λ(λ) S(κλ) + Σ_{h/κ<λ<=f(x)} Λ(λ) ω_f(κλ)].
pub fn lemma31_check(inst: &VWInstance, kappa: u64) -> Result<Lemma31Report> {
    let omega = Omega::new(&inst.f);
    lemma31_with(inst, &omega, &[kappa]).map(|mut v| v.remove(0))
}

/// Lemma 3.1 for several κ on one instance.
pub fn lemma31_with(inst: &VWInstance, omega: &Omega, kappas: &[u64]) -> Result<Vec<Lemma31Report>> {
    let ctx = Ctx::new(&VWInstance { depth: 1, ..inst.clone() }, omega, true)?;
    kappas
        .iter()
        .map(|&kappa| {
            if kappa == 0 || kappa > ctx.h {
                return Err(Error::Domain(format!("kappa = {kappa} outside [1, h = {}]", ctx.h)));
            }
            let fac = primes::factor(kappa);
            let mut head = Accumulator::default();
            let mut tail = Accumulator::default();
            for e in &ctx.pp {
                if kappa * e.k <= ctx.h {
                    let s = ctx.s(kappa * e.k);
                    if s > 0 {
                        head.add(e.lam * s as f64);
                    }
                } else {
                    let w = ctx.omega_of(&fac_mul(&fac, e.p, e.v))?;
                    if w > 0 {
                        tail.add(e.lam * w as f64);
                    }
                }
            }
            let rhs_head = head.value() / ctx.log_ratio;
            let rhs_tail = tail.value() / ctx.log_ratio;
            let lhs = ctx.s(kappa);
            Ok(Lemma31Report {
                kappa,
                lhs,
                rhs_head,
                rhs_tail,
                rhs: rhs_head + rhs_tail,
                verdict: lhs == 0 || (lhs as f64) < rhs_head + rhs_tail,
            })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Lemma41Report {
    pub x: u64,
    pub y: f64,
    pub g: usize,
    pub sum_full: f64,
    pub sum_upper: f64,
    pub sum_log: f64,
    pub sum_plain: f64,
    pub cmp_full: f64,
    pub cmp_upper: f64,
    pub cmp_log: f64,
    pub cmp_plain: f64,
    pub residual_full: f64,
    pub residual_upper: f64,
    pub residual_log: f64,
    pub ratio_plain: f64,
}

/// The four prime-power sums over k <= x with P+(k) <= y (the second restricted to
/// sqrt(y) < P+(k)), with comparators g log y, (g/2) log y, (g/2)(log y)^2 and y log x / log y.
pub fn lemma41_sums(f: &FactoredPoly, x: u64, y: f64) -> Result<Lemma41Report> {
    if x > LEMMA41_MAX_X {
        return Err(Error::ScaleExceeded(format!("x = {x} above {LEMMA41_MAX_X}")));
    }
    if y.is_nan() {
        return Err(Error::Domain("y is NaN".into()));
    }
    let omega = Omega::new(f);
    let (mut s1, mut s2, mut s3, mut s4) = Default::default();
    let (s1r, s2r, s3r, s4r): (&mut Accumulator, &mut Accumulator, &mut Accumulator, &mut Accumulator) =
        (&mut s1, &mut s2, &mut s3, &mut s4);
    let ymax = if y < 2.0 { 0 } else { y_floor(y).min(x as u128) as u64 };
    for p in primes::primes_up_to(ymax) {
        let lp = (p as f64).ln();
        let upper = ((p * p) as f64) > y;
        let (mut k, mut v) = (p, 1u32);
        while k <= x {
            let w = omega.prime_power(p, v)? as f64;
            if w > 0.0 {
                let kf = k as f64;
                s1r.add(lp * w / kf);
                if upper {
                    s2r.add(lp * w / kf);
                }
                s3r.add((2.0 * v as f64 - 1.0) * lp * lp * w / kf);
                s4r.add(lp * w);
            }
            match k.checked_mul(p) {
                Some(n) => k = n,
                None => break,
            }
            v += 1;
        }
    }
    let g = f.g();
    let ly = if y > 1.0 { y.ln() } else { 0.0 };
    let cmp_full = g as f64 * ly;
    let cmp_upper = g as f64 / 2.0 * ly;
    let cmp_log = g as f64 / 2.0 * ly * ly;
    let cmp_plain = if ly > 0.0 { y * (x as f64).ln() / ly } else { 0.0 };
    let (a, b, c, d) = (s1.value(), s2.value(), s3.value(), s4.value());
    Ok(Lemma41Report {
        x,
        y,
        g,
        sum_full: a,
        sum_upper: b,
        sum_log: c,
        sum_plain: d,
        cmp_full,
        cmp_upper,
        cmp_log,
        cmp_plain,
        residual_full: a - cmp_full,
        residual_upper: b - cmp_upper,
        residual_log: c - cmp_log,
        ratio_plain: if cmp_plain > 0.0 { d / cmp_plain } else { 0.0 },
    })
}

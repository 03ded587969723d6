//! The Dickman function ρ and the product prediction Π ρ(d_j u).
//!
//! ρ = 1 on [0, 1] and ρ = 1 − log u on [1, 2]. Each later unit interval [k, k+1] holds a
//! Chebyshev series found by iterating uρ(u) = ∫_{u−1}^{u} ρ(t) dt to a fixed point, with the
//! integrals done by Gauss–Legendre. Every term is positive, so relative accuracy survives
//! even where ρ is tiny; the map contracts by at least 1/(k+1) per sweep.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_UMAX: f64 = 20.0;
const CHEB_DEGREE: usize = 32;
const GL_NODES: usize = 20;

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        xs[i] = x;
        ws[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (xs, ws)
}

fn chebyshev_fit(vals: &[f64]) -> Vec<f64> {
    let n = vals.len();
    (0..n)
        .map(|m| {
            let s: f64 = vals
                .iter()
                .enumerate()
                .map(|(j, v)| v * (PI * m as f64 * (j as f64 + 0.5) / n as f64).cos())
                .sum();
            if m == 0 {
                s / n as f64
            } else {
                2.0 * s / n as f64
            }
        })
        .collect()
}

fn clenshaw(c: &[f64], s: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &ck in c.iter().skip(1).rev() {
        let b0 = 2.0 * s * b1 - b2 + ck;
        b2 = b1;
        b1 = b0;
    }
    s * b1 - b2 + c[0]
}

/// Piecewise Chebyshev representation of ρ on [0, umax].
#[derive(Clone, Debug)]
pub struct Dickman {
    umax: f64,
    // pieces[j] covers [j + 2, j + 3]
    pieces: Vec<Vec<f64>>,
}

impl Dickman {
    pub fn new(umax: f64) -> Self {
        let (gx, gw) = gauss_legendre(GL_NODES);
        let quad = |a: f64, b: f64, g: &dyn Fn(f64) -> f64| -> f64 {
            let (m, r) = (0.5 * (a + b), 0.5 * (b - a));
            gx.iter().zip(&gw).map(|(x, w)| w * r * g(m + r * x)).sum()
        };
        let n = CHEB_DEGREE;
        let nodes: Vec<f64> = (0..n).map(|j| (PI * (j as f64 + 0.5) / n as f64).cos()).collect();
        let mut d = Dickman { umax, pieces: Vec::new() };
        for k in 2..(umax.ceil() as usize).max(2) {
            let kf = k as f64;
            let us: Vec<f64> = nodes.iter().map(|s| kf + 0.5 * (s + 1.0)).collect();
            // ∫_{u-1}^{k} ρ over the previous piece does not change during the iteration
            let head: Vec<f64> = us.iter().map(|&u| quad(u - 1.0, kf, &|t| d.eval_unchecked(t))).collect();
            let mut coeffs = vec![0.0; n];
            coeffs[0] = d.eval_unchecked(kf);
            for _ in 0..80 {
                let vals: Vec<f64> = us
                    .iter()
                    .zip(&head)
                    .map(|(&u, h)| (h + quad(kf, u, &|t| clenshaw(&coeffs, 2.0 * (t - kf) - 1.0))) / u)
                    .collect();
                let next = chebyshev_fit(&vals);
                let delta = next.iter().zip(&coeffs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                coeffs = next;
                if delta <= 1e-18 * coeffs[0].abs() {
                    break;
                }
            }
            d.pieces.push(coeffs);
        }
        d
    }

    pub fn umax(&self) -> f64 {
        self.umax
    }

    fn eval_unchecked(&self, u: f64) -> f64 {
        if u <= 1.0 {
            return 1.0;
        }
        if u <= 2.0 {
            return 1.0 - u.ln();
        }
        let k = (u.floor() as usize).min(self.pieces.len() + 1);
        let s = 2.0 * (u - k as f64) - 1.0;
        clenshaw(&self.pieces[k - 2], s)
    }

    pub fn rho(&self, u: f64) -> Result<f64> {
        if u.is_nan() || u < 0.0 {
            return Err(Error::Domain(format!("rho needs u >= 0, got {u}")));
        }
        if u > self.umax {
            return Err(Error::ScaleExceeded(format!("rho table ends at {}, got u = {u}", self.umax)));
        }
        Ok(self.eval_unchecked(u))
    }

    /// Mesh of ρ values with the given step on [0, umax].
    pub fn table(&self, step: f64) -> RhoTable {
        let n = (self.umax / step).floor() as usize;
        RhoTable {
            step,
            umax: self.umax,
            values: (0..=n).map(|i| self.eval_unchecked(i as f64 * step)).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RhoTable {
    pub step: f64,
    pub umax: f64,
    pub values: Vec<f64>,
}

fn shared() -> &'static Dickman {
    static TABLE: OnceLock<Dickman> = OnceLock::new();
    TABLE.get_or_init(|| Dickman::new(DEFAULT_UMAX))
}

/// ρ(u) for `0 <= u <= 20`.
pub fn rho(u: f64) -> Result<f64> {
    shared().rho(u)
}

/// Π_j ρ(d_j u).
pub fn martin_prediction(degrees: &[usize], u: f64) -> Result<f64> {
    if degrees.contains(&0) {
        return Err(Error::Domain("degrees must be >= 1".into()));
    }
    degrees.iter().try_fold(1.0, |acc, &d| Ok(acc * rho(d as f64 * u)?))
}

/// Fixed-step RK4 solution of uρ'(u) = −ρ(u−1), sampled at `i·h` for `i = 0..=umax/h`.
/// The delayed term at half steps comes from cubic Hermite interpolation of earlier samples.
pub fn rho_rk4_grid(umax: f64, h: f64) -> Vec<f64> {
    let n = (umax / h).round() as usize;
    let lag = (1.0 / h).round() as usize;
    let mut v = vec![1.0; n + 1];
    let mut dv = vec![0.0; n + 1];
    if lag <= n {
        // right derivative at the kink u = 1
        dv[lag] = -1.0;
    }
    let delayed = |v: &[f64], dv: &[f64], j: usize, half: bool| -> f64 {
        if !half || j < lag {
            return v[j];
        }
        // Hermite midpoint of [j, j+1]
        0.5 * (v[j] + v[j + 1]) + h * (dv[j] - dv[j + 1]) / 8.0
    };
    for i in lag..n {
        let u = i as f64 * h;
        let j = i - lag;
        let rhs = |uu: f64, d: f64| -d / uu;
        let d0 = delayed(&v, &dv, j, false);
        let dm = delayed(&v, &dv, j, true);
        let d1 = delayed(&v, &dv, j + 1, false);
        let k1 = rhs(u, d0);
        let k2 = rhs(u + h / 2.0, dm);
        let k3 = k2;
        let k4 = rhs(u + h, d1);
        v[i + 1] = v[i] + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        dv[i + 1] = -d1 / (u + h);
    }
    v
}

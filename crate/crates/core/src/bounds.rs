//! Closed-form upper-bound coefficients for Ψ_f(x, x^{1/u}).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyarith::FactoredPoly;

fn check_dgu(d: u32, g: u32, u: f64) -> Result<()> {
    if d < 2 {
        return Err(Error::Hypothesis(format!("degree d = {d} must be >= 2")));
    }
    if g < 1 || g > d {
        return Err(Error::Domain(format!("need 1 <= g <= d, got g = {g}, d = {d}")));
    }
    if u.is_nan() || u < 1.0 {
        return Err(Error::Domain(format!("need u >= 1, got {u}")));
    }
    Ok(())
}

/// γ_f(u) = 1/2 + a + sqrt(a + a^2) with a = (2g+1)/(16du).
pub fn gamma_f(d: u32, g: u32, u: f64) -> Result<f64> {
    check_dgu(d, g, u)?;
    let a = (2 * g + 1) as f64 / (16.0 * d as f64 * u);
    // a + a^2 = a(1 + a) avoids rounding in the square
    Ok(0.5 + a + (a * (1.0 + a)).sqrt())
}

/// Denominator `d (d−1)^{m−1} u^m` shared by the main terms.
fn main_denominator(d: u32, u: f64, m: i32) -> f64 {
    d as f64 * ((d - 1) as f64).powi(m - 1) * u.powi(m)
}

/// Timofeev's coefficient (g+ε)^m / (d (d−1)^{m−1} u^m), m = ⌊u⌋.
pub fn timofeev_main_term(d: u32, g: u32, u: f64, eps: f64) -> Result<f64> {
    check_dgu(d, g, u)?;
    if eps.is_nan() || eps < 0.0 {
        return Err(Error::Domain(format!("need eps >= 0, got {eps}")));
    }
    let m = u.floor() as i32;
    Ok((g as f64 + eps).powi(m) / main_denominator(d, u, m))
}

/// Hmyrova's shape exp(−u log(u/e)) with the constant c(f) set to 1.
pub fn hmyrova_main_term(u: f64) -> Result<f64> {
    if u.is_nan() || u < 1.0 {
        return Err(Error::Domain(format!("need u >= 1, got {u}")));
    }
    Ok((-u * (u / std::f64::consts::E).ln()).exp())
}

/// 1 − 1/(2d) − 3/(16d²) − (1/d) sqrt(3/(16d) + (3/(16d))²).
pub fn cassels_coeff(d: u32) -> Result<f64> {
    if d < 2 {
        return Err(Error::Hypothesis(format!("degree d = {d} must be >= 2")));
    }
    let df = d as f64;
    let b = 3.0 / (16.0 * df);
    Ok(1.0 - 1.0 / (2.0 * df) - 3.0 / (16.0 * df * df) - (b * (1.0 + b)).sqrt() / df)
}

/// Coefficient γ_f(u) g^m / (d (d−1)^{m−1} u^m).
pub fn thm11_coefficient(d: u32, g: u32, u: f64) -> Result<f64> {
    let m = u.floor() as i32;
    Ok(gamma_f(d, g, u)? * (g as f64).powi(m) / main_denominator(d, u.max(1.0), m))
}

/// Upper end of the admissible u range, sqrt(log x) / log log x.
pub fn thm11_u_max(x: f64) -> f64 {
    let l = x.ln();
    if l <= 1.0 {
        return 0.0;
    }
    l.sqrt() / l.ln()
}

#[derive(Clone, Debug, Serialize)]
pub struct MainTerm {
    pub coefficient: f64,
    pub value: f64,
    pub u_in_range: bool,
    pub u_max: f64,
}

/// Main term γ_f(u) g^m x / (d (d−1)^{m−1} u^m); the error term has no explicit constant.
pub fn thm11_main_term(f: &FactoredPoly, x: f64, u: f64) -> Result<MainTerm> {
    let coefficient = thm11_coefficient(f.d() as u32, f.g() as u32, u)?;
    let u_max = thm11_u_max(x);
    Ok(MainTerm { coefficient, value: coefficient * x, u_in_range: u <= u_max, u_max })
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub d: u32,
    pub g: u32,
    pub u: f64,
    pub m: u32,
    pub gamma: f64,
    pub thm11_main: f64,
    pub timofeev_eps: f64,
    pub timofeev_main: f64,
    /// Only defined for g = 1 and only up to the unknown constant c(f).
    pub hmyrova_main: f64,
    pub hmyrova_applicable: bool,
    pub hmyrova_comparable: bool,
    pub cassels_coeff: Option<f64>,
    pub x: Option<f64>,
    pub thm11_u_in_range: Option<bool>,
    pub timofeev_u_in_range: Option<bool>,
}

pub fn bound_report(d: u32, g: u32, u: f64, eps: f64, x: Option<f64>) -> Result<BoundReport> {
    let gamma = gamma_f(d, g, u)?;
    Ok(BoundReport {
        d,
        g,
        u,
        m: u.floor() as u32,
        gamma,
        thm11_main: thm11_coefficient(d, g, u)?,
        timofeev_eps: eps,
        timofeev_main: timofeev_main_term(d, g, u, eps)?,
        hmyrova_main: hmyrova_main_term(u)?,
        hmyrova_applicable: g == 1,
        hmyrova_comparable: false,
        cassels_coeff: (g == 1).then(|| cassels_coeff(d)).transpose()?,
        x,
        thm11_u_in_range: x.map(|x| u <= thm11_u_max(x)),
        timofeev_u_in_range: x.map(|x| u <= (x.ln() / (d as f64 + eps)).sqrt()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyarith::{build_factored, parse_poly};

    #[test]
    fn gamma_examples() {
        let exact = (19.0 + 105f64.sqrt()) / 32.0;
        assert!((gamma_f(2, 1, 1.0).unwrap() - exact).abs() < 1e-15);
        assert!((gamma_f(2, 1, 1.0).unwrap() - 0.913_967).abs() < 1e-6);
        // (35 + sqrt 201)/64
        assert!((gamma_f(4, 1, 1.0).unwrap() - (35.0 + 201f64.sqrt()) / 64.0).abs() < 1e-15);
        // γ − 1/2 decays like sqrt(3/(32u)), not like 1/u
        let u = 1e6;
        let excess = gamma_f(2, 1, u).unwrap() - 0.5;
        assert!((excess * u.sqrt() / (3.0f64 / 32.0).sqrt() - 1.0).abs() < 1e-3);
        assert!(gamma_f(2, 1, 1e12).unwrap() - 0.5 < 1e-5);
        assert!(gamma_f(1, 1, 1.0).is_err());
        assert!(gamma_f(2, 3, 1.0).is_err());
        assert!(gamma_f(2, 1, 0.5).is_err());
    }

    #[test]
    fn comparators() {
        assert!((timofeev_main_term(2, 1, 1.0, 0.0).unwrap() - 0.5).abs() < 1e-15);
        let ratio = thm11_coefficient(2, 1, 1.0).unwrap() / timofeev_main_term(2, 1, 1.0, 0.0).unwrap();
        assert!((ratio - gamma_f(2, 1, 1.0).unwrap()).abs() < 1e-15);
        assert!((timofeev_main_term(3, 2, 2.0, 0.1).unwrap() - 0.18375).abs() < 1e-15);
        assert!((hmyrova_main_term(std::f64::consts::E).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cassels_examples() {
        assert!((cassels_coeff(2).unwrap() - 0.543_016_4).abs() < 1e-7);
        assert!(cassels_coeff(2).unwrap() > 0.543);
        assert!((cassels_coeff(3).unwrap() - 0.726_602).abs() < 1e-6);
        assert!(cassels_coeff(1_000_000).unwrap() > 0.999_999);
    }

    #[test]
    fn main_term_example() {
        let f = build_factored(vec![parse_poly("t^2+1").unwrap()]).unwrap();
        let mt = thm11_main_term(&f, 1e6, 1.0).unwrap();
        assert!((mt.value - 456_983.6).abs() < 0.1, "{}", mt.value);
        let t = build_factored(vec![parse_poly("t").unwrap()]).unwrap();
        assert!(matches!(thm11_main_term(&t, 1e6, 1.0), Err(Error::Hypothesis(_))));
    }
}

use proptest::prelude::*;
use smoothpoly::bounds::{gamma_f, timofeev_main_term, thm11_coefficient};
use smoothpoly::dickman::rho;

#[test]
fn gamma_monotone_on_grid() {
    let us: Vec<f64> = (0..=36).map(|i| 1.0 + i as f64 * 0.25).collect();
    for d in 2..=10u32 {
        for g in 1..=d {
            for w in us.windows(2) {
                assert!(gamma_f(d, g, w[1]).unwrap() < gamma_f(d, g, w[0]).unwrap());
            }
            for &u in &us {
                let gam = gamma_f(d, g, u).unwrap();
                if g < d {
                    assert!(gamma_f(d, g + 1, u).unwrap() > gam);
                    assert!((2 * g + 1) as f64 / (16.0 * d as f64 * u) < 0.125);
                    assert!(gam < 1.0, "gamma({d},{g},{u}) = {gam}");
                }
                if g < d {
                    assert!(gamma_f(d + 1, g, u).unwrap() < gam);
                }
                assert!(gamma_f(d, 1, u).unwrap() <= (19.0 + 105f64.sqrt()) / 32.0 + 1e-15);
            }
        }
    }
}

#[test]
fn main_term_is_gamma_times_timofeev_at_eps_zero() {
    for d in 2..=6u32 {
        for g in 1..=d {
            for u in [1.0, 1.5, 2.0, 3.7] {
                let ratio = thm11_coefficient(d, g, u).unwrap() / timofeev_main_term(d, g, u, 0.0).unwrap();
                assert!((ratio - gamma_f(d, g, u).unwrap()).abs() < 1e-14);
            }
        }
    }
}

proptest! {
    #[test]
    fn rho_positive_and_decreasing(u in 1.0f64..20.0) {
        let (a, b) = (rho(u).unwrap(), rho(u - 1.0).unwrap());
        prop_assert!(0.0 < a && a < b);
    }

    #[test]
    fn rho_integral_identity(u in 1.0f64..20.0) {
        // u rho(u) = integral of rho over [u-1, u]; rho' jumps at integers, so split there
        let k = (u - 1.0).floor() + 1.0;
        let integral = simpson(u - 1.0, k.min(u)) + simpson(k.min(u), u);
        let lhs = u * rho(u).unwrap();
        prop_assert!((lhs - integral).abs() <= 1e-10 * lhs, "u = {}: {} vs {}", u, lhs, integral);
    }
}

fn simpson(a: f64, b: f64) -> f64 {
    let n = 2000;
    let h = (b - a) / n as f64;
    let mut s = rho(a).unwrap() + rho(b).unwrap();
    for i in 1..n {
        s += rho(a + i as f64 * h).unwrap() * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

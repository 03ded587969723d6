use smoothpoly::oracle::{vw_literal, OmegaBrute};
use smoothpoly::vwmachinery::{vw_prop21, vw_prop32, VWInstance};
use smoothpoly::{build_factored, parse_poly, FactoredPoly};

fn fp(factors: &[&str]) -> FactoredPoly {
    build_factored(factors.iter().map(|s| parse_poly(s).unwrap()).collect()).unwrap()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-10 * a.abs().max(b.abs()).max(1.0)
}

#[test]
fn small_instance_matches_literal_loops() {
    let f = fp(&["t^2+1"]);
    let mut om = OmegaBrute::new(&f);
    let lit = vw_literal(&f, 50, 10, 10.0, 2, &mut om).unwrap();
    let inst = VWInstance::new(&f, 50, 10, 10.0, 1);
    let r = vw_prop21(&inst).unwrap();
    assert_eq!(r.lhs, lit.lhs);
    assert!(close(r.v, lit.v21), "{} {}", r.v, lit.v21);
    assert!(close(r.w, lit.w21), "{} {}", r.w, lit.w21);
    for m in 1..=2 {
        let r = vw_prop32(&VWInstance::new(&f, 50, 10, 10.0, m), false).unwrap();
        assert!(close(r.v_plus.unwrap(), lit.v_plus[m - 1]));
        assert!(close(r.w_plus.unwrap(), lit.w_plus[m - 1]));
        for i in 0..m {
            assert!(close(r.v_minus[i], lit.v_minus[i]), "V-{} {} {}", i + 1, r.v_minus[i], lit.v_minus[i]);
            assert!(close(r.w_minus[i], lit.w_minus[i]), "W-{} {} {}", i + 1, r.w_minus[i], lit.w_minus[i]);
        }
    }
}

#[test]
fn depth_two_instance_matches_literal_loops() {
    let f = fp(&["t^2+1"]);
    let mut om = OmegaBrute::new(&f);
    let lit = vw_literal(&f, 200, 60, 6.0, 2, &mut om).unwrap();
    let r = vw_prop32(&VWInstance::new(&f, 200, 60, 6.0, 2), true).unwrap();
    assert!(close(r.v_plus.unwrap(), lit.v_plus[1]));
    assert!(close(r.w_plus.unwrap(), lit.w_plus[1]));
    for i in 0..2 {
        assert!(close(r.v_minus[i], lit.v_minus[i]));
        assert!(close(r.w_minus[i], lit.w_minus[i]));
    }
    println!("{r:?}");
    assert_eq!(r.monotone_v, Some(true));
    assert_eq!(r.monotone_w, Some(true));
}

mod random {
    use super::*;
    use proptest::prelude::*;
    use smoothpoly::modroots::Omega;
    use smoothpoly::vwmachinery::{lemma31_with, vw_prop32_with};

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn random_quadratics_match_literal_loops(c in 1i64..40, x in 25u64..90, zfrac in 0.2f64..0.7, y in 2.0f64..400.0) {
            let f = build_factored(vec![smoothpoly::IntPoly::from_i64(&[c, 3, 1]).unwrap()]);
            prop_assume!(f.is_ok());
            let f = f.unwrap();
            let z = ((x as f64 * zfrac) as u64).max(f.t0().unwrap() + 1);
            prop_assume!(z < x);
            let omega = Omega::new(&f);
            let mut brute = OmegaBrute::new(&f);
            let lit = vw_literal(&f, x, z, y, 2, &mut brute).unwrap();
            for m in 1..=2 {
                let r = vw_prop32_with(&VWInstance::new(&f, x, z, y, m), &omega, true).unwrap();
                prop_assert_eq!(r.lhs, lit.lhs);
                prop_assert!(r.verdict_2_1 && r.monotone_v == Some(true) && r.monotone_w == Some(true));
                prop_assert!(close(r.v_plus.unwrap(), lit.v_plus[m - 1]) && close(r.w_plus.unwrap(), lit.w_plus[m - 1]));
                for i in 0..m {
                    prop_assert!(close(r.v_minus[i], lit.v_minus[i]) && close(r.w_minus[i], lit.w_minus[i]));
                }
            }
            let inst = VWInstance::new(&f, x, z, y, 1);
            let ks: Vec<u64> = (1..=inst.h()).collect();
            prop_assert!(lemma31_with(&inst, &omega, &ks).unwrap().iter().all(|r| r.verdict));
        }
    }
}

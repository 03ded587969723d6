use num_bigint::BigInt;
use proptest::prelude::*;
use smoothpoly::polyarith::{build_factored, parse_poly, IntPoly};

fn poly_strategy() -> impl Strategy<Value = Vec<i64>> {
    (1usize..=4).prop_flat_map(|deg| {
        prop::collection::vec(-50i64..=50, deg + 1).prop_map(|mut c| {
            if *c.last().unwrap() == 0 {
                *c.last_mut().unwrap() = 1;
            }
            c
        })
    })
}

fn disc2(c: &[i64]) -> BigInt {
    let (a0, a1, a2) = (BigInt::from(c[0]), BigInt::from(c[1]), BigInt::from(c[2]));
    &a1 * &a1 - 4 * &a2 * &a0
}

fn disc3(c: &[i64]) -> BigInt {
    // a t^3 + b t^2 + c t + d
    let (d, cc, b, a) = (BigInt::from(c[0]), BigInt::from(c[1]), BigInt::from(c[2]), BigInt::from(c[3]));
    &b * &b * &cc * &cc - 4 * &a * &cc * &cc * &cc - 4 * &b * &b * &b * &d - 27 * &a * &a * &d * &d
        + 18 * &a * &b * &cc * &d
}

proptest! {
    #[test]
    fn values_are_periodic_mod_k(c in poly_strategy(), a in -1000i64..1000, b in -50i64..50, k in 1i64..500) {
        let f = IntPoly::from_i64(&c).unwrap();
        let lhs = f.eval_i64(a + b * k);
        let rhs = f.eval_i64(a);
        prop_assert_eq!((lhs - rhs) % BigInt::from(k), BigInt::from(0));
    }

    #[test]
    fn display_round_trips(c in poly_strategy()) {
        let f = IntPoly::from_i64(&c).unwrap();
        let g = parse_poly(&f.to_string()).unwrap();
        prop_assert_eq!(f, g);
    }

    #[test]
    fn low_degree_discriminants_match_formulas(c in poly_strategy()) {
        let f = IntPoly::from_i64(&c).unwrap();
        match f.degree() {
            2 => prop_assert_eq!(f.discriminant(), disc2(&c)),
            3 => prop_assert_eq!(f.discriminant(), disc3(&c)),
            _ => {}
        }
    }

    #[test]
    fn product_discriminant_is_multiplicative(p in poly_strategy(), q in poly_strategy()) {
        let (fp, fq) = (IntPoly::from_i64(&p).unwrap(), IntPoly::from_i64(&q).unwrap());
        let Ok(fac) = build_factored(vec![fp.clone(), fq.clone()]) else { return Ok(()) };
        let whole = fp.mul(&fq).discriminant();
        prop_assert_eq!(BigInt::from(fac.discriminant_abs().clone()), whole.magnitude().clone().into());
    }

    #[test]
    fn values_increase_past_t0(c in poly_strategy()) {
        let Ok(f) = build_factored(vec![IntPoly::from_i64(&c).unwrap()]) else { return Ok(()) };
        let t0 = f.t0().unwrap() as i64;
        let mut prev = f.eval(t0 + 1);
        prop_assert!(prev > BigInt::from(1));
        for n in t0 + 2..t0 + 200 {
            let v = f.eval(n);
            prop_assert!(v > prev, "f({}) = {} not above f({}) = {}", n, v, n - 1, prev);
            prev = v;
        }
    }
}

#[test]
fn product_discriminant_examples() {
    // t(t^2+1): disc(t^2+1) = -4, Res(t, t^2+1) = 1
    let f = build_factored(vec![parse_poly("t").unwrap(), parse_poly("t^2+1").unwrap()]).unwrap();
    assert_eq!(f.discriminant_abs(), &4u32.into());
    assert_eq!(f.poly().discriminant(), BigInt::from(-4));
    let g = build_factored(vec![parse_poly("t+1").unwrap(), parse_poly("t^2+2").unwrap()]).unwrap();
    // disc(t^2+2) = -8, Res(t+1, t^2+2) = 3
    assert_eq!(g.discriminant_abs(), &72u32.into());
}

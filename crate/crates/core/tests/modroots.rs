use proptest::prelude::*;
use smoothpoly::modroots::{lift_roots, roots_mod_p, Omega};
use smoothpoly::oracle::{omega_scan, roots_mod_scan};
use smoothpoly::polyarith::{build_factored, FactoredPoly, IntPoly};
use smoothpoly::primes::{gcd, is_prime};

fn poly_strategy() -> impl Strategy<Value = FactoredPoly> {
    prop::collection::vec(-30i64..=30, 2..=5)
        .prop_map(|mut c| {
            if *c.last().unwrap() == 0 {
                *c.last_mut().unwrap() = 1;
            }
            build_factored(vec![IntPoly::from_i64(&c).unwrap()])
        })
        .prop_filter_map("not a valid single factor", |r| r.ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn omega_is_multiplicative(f in poly_strategy(), a in 1u64..300, b in 1u64..300) {
        prop_assume!(gcd(a, b) == 1);
        let om = Omega::new(&f);
        prop_assert_eq!(om.at(a * b).unwrap(), om.at(a).unwrap() * om.at(b).unwrap());
        prop_assert_eq!(om.at(a * b).unwrap(), omega_scan(&f, a * b));
    }

    #[test]
    fn roots_match_scan(f in poly_strategy(), p in 2u64..3000) {
        prop_assume!(is_prime(p));
        prop_assert_eq!(roots_mod_p(&f, p).unwrap().residues, roots_mod_scan(&f, p));
    }

    #[test]
    fn lifts_match_scan(f in poly_strategy(), p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]), v in 1u32..=4) {
        let m = p.pow(v);
        let mut lifted = lift_roots(&f, p, v).unwrap().residues;
        lifted.sort_unstable();
        prop_assert_eq!(lifted, roots_mod_scan(&f, m));
    }
}

#[test]
fn product_of_factors_counts_union_of_roots() {
    // For distinct irreducible factors, roots mod an unramified p are disjoint.
    let f = build_factored(vec![IntPoly::from_i64(&[0, 1]).unwrap(), IntPoly::from_i64(&[1, 0, 1]).unwrap()]).unwrap();
    let om = Omega::new(&f);
    for p in [3u64, 5, 7, 11, 13, 17, 101] {
        let expect = 1 + if p % 4 == 1 { 2 } else { 0 };
        assert_eq!(om.prime_power(p, 1).unwrap(), expect, "p = {p}");
        assert_eq!(om.prime_power(p, 3).unwrap(), expect, "p = {p}");
    }
}

use proptest::prelude::*;
use smoothpoly::polyarith::{build_factored, parse_poly, FactoredPoly};
use smoothpoly::smoothsieve::{pplus_range, psi, psi_oracle, psi_range, SieveOptions};

fn fp(factors: &[&str]) -> FactoredPoly {
    build_factored(factors.iter().map(|s| parse_poly(s).unwrap()).collect()).unwrap()
}

fn test_polys() -> Vec<FactoredPoly> {
    vec![fp(&["t"]), fp(&["t^2+1"]), fp(&["t^2-2"]), fp(&["t", "t^2+1"]), fp(&["t+1", "t^2+2"])]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn psi_matches_oracle(i in 0usize..5, x in 1u64..3000, y in 1.0f64..5000.0) {
        let f = &test_polys()[i];
        prop_assert_eq!(psi(f, x, y).unwrap().psi, psi_oracle(f, x, y).unwrap());
    }

    #[test]
    fn psi_monotone_in_x_and_y(i in 0usize..5, x in 1u64..3000, dx in 0u64..500, y in 1.0f64..2000.0, dy in 0.0f64..2000.0) {
        let f = &test_polys()[i];
        let base = psi(f, x, y).unwrap().psi;
        prop_assert!(psi(f, x + dx, y).unwrap().psi >= base);
        prop_assert!(psi(f, x, y + dy).unwrap().psi >= base);
    }

    #[test]
    fn segment_size_does_not_matter(i in 0usize..5, lo in 1u64..2000, len in 0u64..3000, seg in 1usize..700, y in 1.0f64..500.0) {
        let f = &test_polys()[i];
        let hi = lo + len;
        let a = psi_range(f, lo, hi, y, None, &SieveOptions::default()).unwrap();
        let b = psi_range(f, lo, hi, y, None, &SieveOptions { segment: seg }).unwrap();
        prop_assert_eq!(a.psi, b.psi);
        let pa = pplus_range(f, lo, hi, y, None, &SieveOptions::default()).unwrap();
        let pb = pplus_range(f, lo, hi, y, None, &SieveOptions { segment: seg }).unwrap();
        for n in lo..=hi {
            prop_assert_eq!(pa.pplus_at(n), pb.pplus_at(n));
            prop_assert_eq!(a.is_smooth(n), pa.is_smooth(n));
        }
    }
}

#[test]
fn identical_across_thread_counts() {
    let f = fp(&["t+1", "t^2+2"]);
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let t = psi_range(&f, 1, 200_000, 1000.0, None, &SieveOptions { segment: 4096 }).unwrap();
            (t.psi, (1..=200_000).filter(|&n| t.is_smooth(n)).map(|n| n * 7 % 1_000_003).sum::<u64>())
        })
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn zeros_are_never_smooth() {
    let f = fp(&["t-5", "t^2+1"]);
    let t = pplus_range(&f, 1, 10, 1e9, None, &SieveOptions::default()).unwrap();
    assert!(!t.is_smooth(5));
    assert_eq!(t.pplus_at(5).unwrap().to_string(), "inf");
}

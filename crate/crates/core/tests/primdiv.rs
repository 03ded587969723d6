use smoothpoly::oracle::primitive_divisor_brute;
use smoothpoly::primdiv::*;

#[test]
fn criterion_matches_definition() {
    for b in [1i64, 2, 3, 5, -2] {
        for n in (b.unsigned_abs() + 1)..=2000 {
            let rec = has_primitive_divisor(b, n).unwrap();
            assert_eq!(rec.method, Method::Criterion);
            assert_eq!(rec.has_primitive, primitive_divisor_brute(b, n), "b = {b}, n = {n}");
        }
    }
}

#[test]
fn sieve_records_match_pointwise_records() {
    for b in [1i64, -2, 7, -30, 41] {
        let recs = records(b, 600, SequenceStart::One).unwrap();
        assert_eq!(recs.len(), 600);
        for r in &recs {
            assert_eq!(r, &has_primitive_divisor(b, r.n).unwrap());
            assert_eq!(r.has_primitive, primitive_divisor_brute(b, r.n), "b = {b}, n = {}", r.n);
            if r.method == Method::Criterion {
                assert!(r.n > b.unsigned_abs());
                assert_eq!(r.has_primitive, r.pplus > 2 * r.n);
            }
        }
    }
}

#[test]
fn r1_ten_from_definition() {
    let brute = (1..=10).filter(|&n| primitive_divisor_brute(1, n)).count() as u64;
    assert_eq!(brute, 7);
    assert_eq!(r_b(1, 10).unwrap(), 7);
}

#[test]
fn arctan_count_equals_r1_for_every_x() {
    let arctan = arctan_flags(10_000).unwrap();
    let prim = records(1, 10_000, SequenceStart::One).unwrap();
    let (mut a, mut r) = (0u64, 0u64);
    for (flag, rec) in arctan.iter().zip(&prim) {
        a += u64::from(*flag);
        r += u64::from(rec.has_primitive);
        assert_eq!(a, r, "x = {}", rec.n);
    }
    assert_eq!(n_arctan(10_000).unwrap().count, r_b(1, 10_000).unwrap());
}

#[test]
fn zero_start_only_removes_divisors_of_b() {
    for b in [6i64, 10, -15, 30] {
        for n in 1..=b.unsigned_abs() {
            let one = has_primitive_divisor_from(b, n, SequenceStart::One).unwrap();
            let zero = has_primitive_divisor_from(b, n, SequenceStart::Zero).unwrap();
            assert!(!zero.has_primitive || one.has_primitive, "b = {b}, n = {n}");
        }
    }
}

#[test]
fn square_minus_b_rejected() {
    for b in [0i64, -1, -4, -9, -100] {
        assert!(r_b(b, 10).is_err());
        assert!(verify_prop63(b, 10).is_err());
    }
}

#[test]
fn prop63_reports_are_consistent() {
    for (b, x) in [(1i64, 10u64), (2, 1000), (-2, 1000), (5, 3)] {
        let rep = verify_prop63(b, x).unwrap();
        assert_eq!(rep.non_smooth, x - rep.psi_xx);
        assert_eq!(rep.residual, rep.r_b.abs_diff(rep.non_smooth));
    }
    let small = verify_prop63(1, 10).unwrap();
    assert!(small.residual <= 2);
}

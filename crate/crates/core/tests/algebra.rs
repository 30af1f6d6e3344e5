use num_complex::Complex64;
use proptest::prelude::*;
use starspin::signature::cl3;
use starspin::star::{clifford_star, clifford_star_integral_form, star_chain};
use starspin::Multivector;

fn mv() -> impl Strategy<Value = Multivector> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 8).prop_map(|cs| {
        Multivector::from_terms(
            &cl3(),
            cs.into_iter()
                .enumerate()
                .map(|(m, (re, im))| (m as u32, Complex64::new(re, im))),
        )
        .unwrap()
    })
}

fn homogeneous() -> impl Strategy<Value = Multivector> {
    (mv(), 0usize..4).prop_map(|(a, k)| a.grade_project(k))
}

fn blade(m: u32) -> Multivector {
    Multivector::blade(&cl3(), m, 1.0)
}

#[test]
fn star_associative_on_basis_triples() {
    for a in 0..8 {
        for b in 0..8 {
            for c in 0..8 {
                let (a, b, c) = (blade(a), blade(b), blade(c));
                let left = clifford_star(&clifford_star(&a, &b).unwrap(), &c).unwrap();
                let right = clifford_star(&a, &clifford_star(&b, &c).unwrap()).unwrap();
                assert_eq!(left, right);
            }
        }
    }
}

#[test]
fn basis_vectors_anticommute() {
    for i in 0..3 {
        for j in 0..3 {
            let (a, b) = (blade(1 << i), blade(1 << j));
            let anti = clifford_star(&a, &b).unwrap() + clifford_star(&b, &a).unwrap();
            let want = if i == j { 2.0 } else { 0.0 };
            assert_eq!(anti, Multivector::scalar(&cl3(), want));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wedge_is_associative(a in mv(), b in mv(), c in mv()) {
        let left = a.wedge(&b).unwrap().wedge(&c).unwrap();
        let right = a.wedge(&b.wedge(&c).unwrap()).unwrap();
        prop_assert!(left.approx_eq(&right, 1e-12));
    }

    #[test]
    fn star_is_associative(a in mv(), b in mv(), c in mv()) {
        let left = clifford_star(&clifford_star(&a, &b).unwrap(), &c).unwrap();
        let right = star_chain(&[&a, &b, &c]).unwrap();
        let other = clifford_star(&a, &clifford_star(&b, &c).unwrap()).unwrap();
        prop_assert!(left.approx_eq(&other, 1e-12));
        prop_assert!(right.approx_eq(&other, 1e-12));
    }

    #[test]
    fn star_distributes(a in mv(), b in mv(), c in mv()) {
        let left = clifford_star(&a, &(&b + &c)).unwrap();
        let right = clifford_star(&a, &b).unwrap() + clifford_star(&a, &c).unwrap();
        prop_assert!(left.approx_eq(&right, 1e-12));
    }

    #[test]
    fn integral_form_matches(a in mv(), b in mv()) {
        let got = clifford_star_integral_form(&a, &b).unwrap();
        prop_assert!(got.approx_eq(&clifford_star(&a, &b).unwrap(), 1e-10));
    }

    #[test]
    fn reversion_is_an_anti_automorphism(a in mv(), b in mv()) {
        let left = clifford_star(&a, &b).unwrap().reversion();
        let right = clifford_star(&b.reversion(), &a.reversion()).unwrap();
        prop_assert!(left.approx_eq(&right, 1e-12));
        prop_assert_eq!(a.reversion().reversion(), a);
    }

    #[test]
    fn grade_involution_is_an_automorphism(a in mv(), b in mv()) {
        let left = clifford_star(&a, &b).unwrap().grade_involution();
        let right = clifford_star(&a.grade_involution(), &b.grade_involution()).unwrap();
        prop_assert!(left.approx_eq(&right, 1e-12));
    }

    #[test]
    fn left_derivative_is_graded(a in homogeneous(), b in mv(), i in 0usize..3) {
        let sign = if a.homogeneous_grade().unwrap_or(0) % 2 == 1 { -1.0 } else { 1.0 };
        let left = a.wedge(&b).unwrap().left_derivative(i).unwrap();
        let right = a.left_derivative(i).unwrap().wedge(&b).unwrap()
            + a.wedge(&b.left_derivative(i).unwrap()).unwrap().scale(sign);
        prop_assert!(left.approx_eq(&right, 1e-12));
    }

    #[test]
    fn derivatives_are_nilpotent(a in mv(), i in 0usize..3) {
        prop_assert!(a.left_derivative(i).unwrap().left_derivative(i).unwrap().is_zero());
        prop_assert!(a.right_derivative(i).unwrap().right_derivative(i).unwrap().is_zero());
    }

    #[test]
    fn grades_partition(a in mv()) {
        let mut sum = Multivector::zero(&cl3());
        for k in 0..=3 {
            sum += &a.grade_project(k);
        }
        prop_assert_eq!(&sum, &a);
        prop_assert_eq!(a.even_part() + a.odd_part(), a);
    }

    #[test]
    fn json_round_trip_is_exact(a in mv()) {
        let back = Multivector::from_json(&cl3(), &a.to_json()).unwrap();
        prop_assert_eq!(back, a);
    }
}

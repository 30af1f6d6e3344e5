use num_complex::Complex64;
use proptest::prelude::*;
use starspin::sampling;
use starspin::signature::{cl2, cl3};
use starspin::spin::{
    complex_to_real, even_cl2_to_cl3, even_cl3_to_cl2, ladder_operators, real_to_complex, rotate,
    rotor_about_axis, scalar_product, wigner_from_spinor, LadderFlavor, SpinHamiltonian, Spinor,
};
use starspin::star::clifford_star;
use starspin::{Error, Multivector};

fn even() -> impl Strategy<Value = Multivector> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 4).prop_map(|cs| {
        Multivector::from_terms(
            &cl3(),
            [0u32, 0b011, 0b101, 0b110]
                .into_iter()
                .zip(cs)
                .map(|(m, (re, im))| (m, Complex64::new(re, im))),
        )
        .unwrap()
    })
}

fn axis() -> impl Strategy<Value = [f64; 3]> {
    prop::array::uniform3(-1.0..1.0f64)
        .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 0.01)
        .prop_map(|v| {
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.map(|x| x / n)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn isomorphisms_are_homomorphisms(a in even(), b in even()) {
        let ab = clifford_star(&a, &b).unwrap();
        let lhs = even_cl3_to_cl2(&ab).unwrap();
        let rhs = clifford_star(&even_cl3_to_cl2(&a).unwrap(), &even_cl3_to_cl2(&b).unwrap()).unwrap();
        prop_assert!(lhs.approx_eq(&rhs, 1e-12));
        let lhs = complex_to_real(&ab).unwrap();
        let rhs = clifford_star(&complex_to_real(&a).unwrap(), &complex_to_real(&b).unwrap()).unwrap();
        prop_assert!(lhs.approx_eq(&rhs, 1e-12));
    }

    #[test]
    fn isomorphisms_invert(a in even()) {
        prop_assert!(even_cl2_to_cl3(&even_cl3_to_cl2(&a).unwrap()).unwrap().approx_eq(&a, 1e-14));
        prop_assert!(real_to_complex(&complex_to_real(&a).unwrap()).unwrap().approx_eq(&a, 1e-14));
    }

    #[test]
    fn rotors_preserve_length(n in axis(), phi in 0.0..6.3f64, v in prop::array::uniform3(-1.0..1.0f64)) {
        let r = rotor_about_axis(n, phi).unwrap();
        let x = Multivector::vector(&cl3(), &v).unwrap();
        let y = rotate(&r, &x).unwrap();
        prop_assert_eq!(y.homogeneous_grade().unwrap_or(1), 1);
        let len = |m: &Multivector| clifford_star(m, m).unwrap().scalar_part().re;
        prop_assert!((len(&x) - len(&y)).abs() < 1e-12);
        let axis_vec = Multivector::vector(&cl3(), &n).unwrap();
        prop_assert!(rotate(&r, &axis_vec).unwrap().approx_eq(&axis_vec, 1e-12));
    }

    #[test]
    fn rotated_spinors_stay_normalized(n in axis(), phi in 0.0..6.3f64) {
        let psi = Spinor::up().rotated(&rotor_about_axis(n, phi).unwrap()).unwrap();
        prop_assert!(psi.is_normalized());
        let pi = wigner_from_spinor(&psi).unwrap();
        prop_assert!(clifford_star(&pi, &pi).unwrap().approx_eq(&pi, 1e-12));
    }

    #[test]
    fn exponential_group_law(seed in 0u64..1000, t1 in -4.0..4.0f64, t2 in -4.0..4.0f64) {
        let h = sampling::random_hamiltonian(&mut sampling::rng(seed));
        let lhs = clifford_star(&h.star_exponential(t1), &h.star_exponential(t2)).unwrap();
        prop_assert!(lhs.approx_eq(&h.star_exponential(t1 + t2), 1e-12));
    }

    #[test]
    fn ladders_for_tilted_fields(seed in 0u64..1000) {
        let h = sampling::random_bivector_hamiltonian(&mut sampling::rng(seed));
        let (p, m) = h.projectors();
        for flavor in [LadderFlavor::Vector, LadderFlavor::Bivector] {
            let (a, b) = ladder_operators(&h, flavor).unwrap().residuals(&p, &m).unwrap();
            prop_assert!(a < 1e-12 && b < 1e-12);
        }
    }

    #[test]
    fn evolution_is_unitary(seed in 0u64..1000, t in -5.0..5.0f64) {
        let mut rng = sampling::rng(seed);
        let h = sampling::random_hamiltonian(&mut rng);
        let psi = sampling::random_multivector(&mut rng, &cl3());
        let evolved = h.evolve_state(&psi, t).unwrap();
        let before = scalar_product(&psi, &psi).unwrap();
        let after = scalar_product(&evolved, &evolved).unwrap();
        prop_assert!((before - after).norm() < 1e-10);
    }
}

#[test]
fn vector_hamiltonian_has_no_bivector_ladders() {
    let h = SpinHamiltonian::new(Multivector::generator(&cl3(), 2).unwrap()).unwrap();
    assert_eq!(
        ladder_operators(&h, LadderFlavor::Vector).unwrap_err(),
        Error::UnsupportedHamiltonian
    );
}

#[test]
fn odd_elements_have_no_cl2_image() {
    assert_eq!(
        even_cl3_to_cl2(&Multivector::generator(&cl3(), 0).unwrap()).unwrap_err(),
        Error::OutsideDomain
    );
    assert!(even_cl2_to_cl3(&Multivector::generator(&cl2(), 0).unwrap()).is_ok());
}

#[test]
fn spinor_validation() {
    assert_eq!(
        Spinor::new(Multivector::generator(&cl3(), 0).unwrap()).unwrap_err(),
        Error::NotSpinor
    );
    let doubled = Spinor::new(Multivector::scalar(&cl3(), 2.0)).unwrap();
    assert!(!doubled.is_normalized());
    assert_eq!(wigner_from_spinor(&doubled).unwrap_err(), Error::NotNormalizedSpinor);
}

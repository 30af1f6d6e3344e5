//! Seeded random inputs for the verification suites.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::multivector::Multivector;
use crate::signature::{cl3, Signature};
use crate::spin::{rotor_about_axis, SpinHamiltonian};
use crate::star::{clifford_star, pseudoscalar};
use std::sync::Arc;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every blade with a complex coefficient in `[−1, 1] + i[−1, 1]`.
pub fn random_multivector(rng: &mut SampleRng, sig: &Arc<Signature>) -> Multivector {
    let mut out = Multivector::zero(sig);
    for m in 0..=sig.full_mask() {
        let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        out.add_term(m, c);
    }
    out
}

pub fn random_real_multivector(rng: &mut SampleRng, sig: &Arc<Signature>) -> Multivector {
    random_multivector(rng, sig).map_coefficients(|_, c| Complex64::new(c.re, 0.0))
}

pub fn random_vector(rng: &mut SampleRng) -> [f64; 3] {
    [0; 3].map(|_| rng.gen_range(-1.0..1.0))
}

pub fn random_unit_vector(rng: &mut SampleRng) -> [f64; 3] {
    loop {
        let v = random_vector(rng);
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 0.1 {
            return v.map(|x| x / n);
        }
    }
}

/// `v + i I⋆w` with `v ⊥ w`, which squares to `|v|² + |w|²`. Covers real
/// vectors, imaginary bivectors, and mixtures.
pub fn random_hamiltonian(rng: &mut SampleRng) -> SpinHamiltonian {
    let sig = cl3();
    let kind = rng.gen_range(0..3);
    let v = random_vector(rng);
    let mut w = random_vector(rng);
    let vv: f64 = v.iter().map(|x| x * x).sum();
    let vw: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
    for (wk, vk) in w.iter_mut().zip(&v) {
        *wk -= vw / vv * vk;
    }
    let vec_part = Multivector::vector(&sig, &v).expect("three components");
    let biv_part = clifford_star(&pseudoscalar(&sig), &Multivector::vector(&sig, &w).expect("three"))
        .expect("same signature")
        .scale(Complex64::i());
    let h = match kind {
        0 => vec_part,
        1 => biv_part,
        _ => vec_part + biv_part,
    };
    SpinHamiltonian::new(h).expect("valid by construction")
}

/// `−i|E| I⋆n`, the complex bivector form of a field along `n`.
pub fn random_bivector_hamiltonian(rng: &mut SampleRng) -> SpinHamiltonian {
    let sig = cl3();
    let n = random_unit_vector(rng);
    let e = rng.gen_range(0.2..2.0);
    let h = clifford_star(&pseudoscalar(&sig), &Multivector::vector(&sig, &n).expect("three"))
        .expect("same signature")
        .scale(Complex64::new(0.0, -e));
    SpinHamiltonian::new(h).expect("valid by construction")
}

pub fn random_rotor(rng: &mut SampleRng) -> Multivector {
    let axis = random_unit_vector(rng);
    let phi = rng.gen_range(0.0..std::f64::consts::TAU);
    rotor_about_axis(axis, phi).expect("unit axis")
}

/// `(B⃗, e, m, ħ)` with `m` bounded away from zero.
pub fn random_landau(rng: &mut SampleRng) -> ([f64; 3], f64, f64, f64) {
    let b = [0; 3].map(|_| rng.gen_range(-2.0..2.0));
    let e = rng.gen_range(-2.0..2.0);
    let m = rng.gen_range(0.5..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let hbar = rng.gen_range(0.1..2.0);
    (b, e, m, hbar)
}

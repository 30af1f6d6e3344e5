//! Spin Hamiltonians, Wigner projectors, star exponentials and the
//! time development of generators and wave functions.

mod iso;
mod ladder;
mod lift;
mod rotor;

pub use iso::{complex_to_real, even_cl3_to_cl2, even_cl2_to_cl3, real_to_complex};
pub use ladder::{
    holomorphic_decomposition, ladder_operators, primed_ladder_operators, real_ladder,
    HolomorphicReport, LadderFlavor, Ladders,
};
pub use lift::{lifted_evolution, scalar_product, wave_function_evolve, OperatorLift};
pub use rotor::{
    rotate, rotor, rotor_about_axis, rotor_between, wigner_eigenvalue_residual, wigner_from_spinor,
    Spinor,
};

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multivector::Multivector;
use crate::signature::{cl3, Signature};
use crate::star::{clifford_star, n_fold_star, pseudoscalar, star_chain};
use crate::DEFAULT_TOLERANCE;

/// How `−iHt` is formed: with the complex unit, or with the central
/// pseudoscalar `I` of the real algebra (`e^{−I⋆Ht}`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImaginaryUnit {
    Complex,
    Pseudoscalar,
}

/// A validated spin Hamiltonian: `H⋆H = |E|²` with `|E| > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinHamiltonian {
    h: Multivector,
    abs_e: f64,
    unit: ImaginaryUnit,
}

impl SpinHamiltonian {
    pub fn new(h: Multivector) -> Result<Self> {
        Self::with_unit(h, ImaginaryUnit::Complex)
    }

    pub fn with_unit(h: Multivector, unit: ImaginaryUnit) -> Result<Self> {
        if h.scalar_part().norm() > DEFAULT_TOLERANCE {
            return Err(Error::DegenerateHamiltonian("nonzero scalar part".into()));
        }
        let square = clifford_star(&h, &h)?;
        let e2 = square.scalar_part();
        let rest = square.try_sub(&Multivector::scalar(h.signature(), e2))?;
        if rest.max_norm() > DEFAULT_TOLERANCE {
            return Err(Error::DegenerateHamiltonian(format!("H*H = {square} is not a scalar")));
        }
        if e2.im.abs() > DEFAULT_TOLERANCE || e2.re < 1e-12 {
            return Err(Error::DegenerateHamiltonian(format!(
                "H*H = {square} is not a positive real"
            )));
        }
        if unit == ImaginaryUnit::Pseudoscalar {
            central_unit(h.signature())?;
        }
        Ok(Self {
            h,
            abs_e: e2.re.sqrt(),
            unit,
        })
    }

    /// `(ħω/2i)σ₁σ₂` on ℂℓ(3).
    pub fn z_direction(hbar_omega: f64) -> Result<Self> {
        Self::z_direction_in(&cl3(), hbar_omega)
    }

    /// `(ħω/2i)σ₁σ₂` on any signature whose first two generators square to 1.
    pub fn z_direction_in(sig: &Arc<Signature>, hbar_omega: f64) -> Result<Self> {
        Self::new(Multivector::blade(sig, 0b011, Complex64::new(0.0, -hbar_omega / 2.0)))
    }

    /// `(ħω/2)σ₃` of the real algebra, evolved with the pseudoscalar.
    pub fn real_z_direction(hbar_omega: f64) -> Result<Self> {
        Self::with_unit(
            Multivector::blade(&cl3(), 0b100, hbar_omega / 2.0),
            ImaginaryUnit::Pseudoscalar,
        )
    }

    pub fn multivector(&self) -> &Multivector {
        &self.h
    }

    pub fn abs_energy(&self) -> f64 {
        self.abs_e
    }

    pub fn unit(&self) -> ImaginaryUnit {
        self.unit
    }

    pub fn signature(&self) -> &Arc<Signature> {
        self.h.signature()
    }

    /// `π± = ½(1 ± H/|E|)`.
    pub fn projectors(&self) -> (Multivector, Multivector) {
        let one = Multivector::one(self.signature());
        let n = self.h.scale(1.0 / self.abs_e);
        ((&one + &n).scale(0.5), (&one - &n).scale(0.5))
    }

    /// Multiplies by the imaginary unit of this Hamiltonian.
    pub(crate) fn times_unit(&self, a: &Multivector) -> Multivector {
        match self.unit {
            ImaginaryUnit::Complex => a.scale(Complex64::i()),
            ImaginaryUnit::Pseudoscalar => {
                clifford_star(&pseudoscalar(self.signature()), a).expect("same signature")
            }
        }
    }

    /// `Exp(Ht) = cos(|E|t) − i(H/|E|) sin(|E|t)` (with `I⋆` in place of
    /// `i` for the real algebra).
    pub fn star_exponential(&self, t: f64) -> Multivector {
        let (s, c) = (self.abs_e * t).sin_cos();
        let rotated = self.times_unit(&self.h).scale(-s / self.abs_e);
        Multivector::scalar(self.signature(), c) + rotated
    }

    /// `Σ_{k ≤ order} (−it)^k/k! H^{k⋆}`, for cross-checking the closed form.
    pub fn star_exponential_series(&self, t: f64, order: usize) -> Multivector {
        let step = self.times_unit(&self.h).scale(-t);
        let mut out = Multivector::one(self.signature());
        let mut term = out.clone();
        for k in 1..=order {
            term = clifford_star(&term, &step)
                .expect("same signature")
                .scale(1.0 / k as f64);
            out += &term;
        }
        out
    }

    /// `π₊e^{−i|E|t} + π₋e^{+i|E|t}`.
    pub fn fourier_dirichlet(&self, t: f64) -> Multivector {
        let (plus, minus) = self.projectors();
        let phase = |e: f64| {
            let (s, c) = (e * t).sin_cos();
            Multivector::scalar(self.signature(), c) - self.times_unit(&Multivector::one(self.signature())).scale(s)
        };
        let a = clifford_star(&plus, &phase(self.abs_e)).expect("same signature");
        let b = clifford_star(&minus, &phase(-self.abs_e)).expect("same signature");
        a + b
    }

    /// `Exp(Ht/N)^{N⋆}`.
    pub fn sliced_exponential(&self, t: f64, n: usize) -> Multivector {
        n_fold_star(&self.star_exponential(t / n as f64), n)
    }

    /// `σ_i(t) = Exp(Ht)‾ ⋆ σ_i ⋆ Exp(Ht)` for zero-based `i`.
    pub fn evolve_generator(&self, i: usize, t: f64) -> Result<Multivector> {
        let s = Multivector::generator(self.signature(), i)?;
        self.evolve_observable(&s, t)
    }

    pub fn evolve_observable(&self, a: &Multivector, t: f64) -> Result<Multivector> {
        let u = self.star_exponential(t);
        star_chain(&[&u.reversion(), a, &u])
    }

    /// `Exp(Ht) ⋆ ψ`.
    pub fn evolve_state(&self, psi: &Multivector, t: f64) -> Result<Multivector> {
        clifford_star(&self.star_exponential(t), psi)
    }
}

/// The pseudoscalar when it is central and squares to −1.
pub fn central_unit(sig: &Arc<Signature>) -> Result<Multivector> {
    let i = pseudoscalar(sig);
    let sq = clifford_star(&i, &i)?;
    if !sq.approx_eq(&-Multivector::one(sig), DEFAULT_TOLERANCE) {
        return Err(Error::NoPseudoscalarUnit);
    }
    for k in 0..sig.dim() {
        let s = Multivector::generator(sig, k)?;
        if !clifford_star(&i, &s)?.approx_eq(&clifford_star(&s, &i)?, DEFAULT_TOLERANCE) {
            return Err(Error::NoPseudoscalarUnit);
        }
    }
    Ok(i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::cl2;

    fn s(i: usize) -> Multivector {
        Multivector::generator(&cl3(), i).unwrap()
    }

    #[test]
    fn z_hamiltonian() {
        let h = SpinHamiltonian::z_direction(1.3).unwrap();
        assert!((h.abs_energy() - 0.65).abs() < 1e-15);
        let (plus, minus) = h.projectors();
        let b = s(0).wedge(&s(1)).unwrap();
        let half = Multivector::scalar(&cl3(), 0.5);
        assert!(plus.approx_eq(&(&half - &b.scale(Complex64::new(0.0, 0.5))), 1e-15));
        assert!(minus.approx_eq(&(&half + &b.scale(Complex64::new(0.0, 0.5))), 1e-15));
        let t: f64 = 0.4;
        let want = Multivector::scalar(&cl3(), (0.65 * t).cos()) - b.scale((0.65 * t).sin());
        assert!(h.star_exponential(t).approx_eq(&want, 1e-15));
    }

    #[test]
    fn degenerate_inputs() {
        let i = pseudoscalar(&cl3());
        assert!(matches!(
            SpinHamiltonian::new(i),
            Err(Error::DegenerateHamiltonian(_))
        ));
        assert!(SpinHamiltonian::new(Multivector::zero(&cl3())).is_err());
        assert!(SpinHamiltonian::new(Multivector::one(&cl3())).is_err());
        // vector plus non-orthogonal bivector: H*H has a vector part
        let mixed = s(0) + s(1).wedge(&s(2)).unwrap().scale(Complex64::i()) + s(1);
        assert!(SpinHamiltonian::new(mixed).is_err());
        let two = Multivector::blade(&cl2(), 0b001, 1.0);
        assert_eq!(
            SpinHamiltonian::with_unit(two, ImaginaryUnit::Pseudoscalar).unwrap_err(),
            Error::NoPseudoscalarUnit
        );
    }

    #[test]
    fn real_algebra_exponential() {
        let h = SpinHamiltonian::real_z_direction(2.0).unwrap();
        assert_eq!(h.abs_energy(), 1.0);
        let (plus, _) = h.projectors();
        assert_eq!(plus, (Multivector::one(&cl3()) + s(2)).scale(0.5));
        let t = 0.3;
        let e = h.star_exponential(t);
        assert!(e.has_real_coefficients(0.0));
        assert!(e.approx_eq(&h.star_exponential_series(t, 40), 1e-12));
        assert!(e.approx_eq(&h.fourier_dirichlet(t), 1e-12));
    }

    #[test]
    fn generator_precession() {
        let w = 0.9;
        let h = SpinHamiltonian::z_direction(w).unwrap();
        let t = 1.7;
        let (sn, cs) = (w * t).sin_cos();
        let s1 = h.evolve_generator(0, t).unwrap();
        assert!(s1.approx_eq(&(s(0).scale(cs) - s(1).scale(sn)), 1e-14));
        let s2 = h.evolve_generator(1, t).unwrap();
        assert!(s2.approx_eq(&(s(0).scale(sn) + s(1).scale(cs)), 1e-14));
        assert!(h.evolve_generator(2, t).unwrap().approx_eq(&s(2), 1e-14));
    }
}

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::SpinHamiltonian;
use crate::berezin::{berezin_integrate, GeneratorSet};
use crate::error::{Error, Result};
use crate::multivector::{wedge_sign, Multivector};
use crate::signature::Signature;
use crate::star::{clifford_star, pseudoscalar};

/// Largest signature for which the lift builds a dense matrix.
const MAX_LIFT_GENERATORS: usize = 8;

/// Left multiplication `B ↦ A⋆B` as a matrix on the blade basis, built by
/// replacing every generator of `A` with `σ̂_i = σ_i∧ + η_i ∂⃗/∂σ_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorLift {
    sig: Arc<Signature>,
    matrix: DMatrix<Complex64>,
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Matrix of `σ̂_i`; column `b` holds the image of blade `b`.
fn hat_generator(sig: &Signature, i: usize) -> DMatrix<Complex64> {
    let n = 1usize << sig.dim();
    let bit = 1u32 << i;
    let mut m = DMatrix::from_element(n, n, zero());
    for b in 0..n as u32 {
        if b & bit == 0 {
            let s = wedge_sign(bit, b).expect("disjoint");
            m[((b | bit) as usize, b as usize)] += Complex64::new(s, 0.0);
        } else {
            let s = if (b & (bit - 1)).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            m[((b ^ bit) as usize, b as usize)] += Complex64::new(sig.metric(i) * s, 0.0);
        }
    }
    m
}

impl OperatorLift {
    pub fn new(a: &Multivector) -> Result<Self> {
        let sig = a.signature().clone();
        if sig.dim() > MAX_LIFT_GENERATORS {
            return Err(Error::CapacityExceeded(sig.dim()));
        }
        let n = 1usize << sig.dim();
        let hats: Vec<_> = (0..sig.dim()).map(|i| hat_generator(&sig, i)).collect();
        let mut matrix = DMatrix::from_element(n, n, zero());
        for (mask, c) in a.terms() {
            let mut op = DMatrix::<Complex64>::identity(n, n);
            for (i, hat) in hats.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    op *= hat;
                }
            }
            matrix += op * c;
        }
        Ok(Self { sig, matrix })
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn to_vector(&self, b: &Multivector) -> Result<DVector<Complex64>> {
        if b.signature() != &self.sig {
            return Err(Error::SignatureMismatch);
        }
        let mut v = DVector::from_element(self.matrix.nrows(), zero());
        for (m, c) in b.terms() {
            v[m as usize] = c;
        }
        Ok(v)
    }

    pub fn from_vector(&self, v: &DVector<Complex64>) -> Multivector {
        let mut out = Multivector::zero(&self.sig);
        for (m, &c) in v.iter().enumerate() {
            out.add_term(m as u32, c);
        }
        out
    }

    pub fn apply(&self, b: &Multivector) -> Result<Multivector> {
        Ok(self.from_vector(&(&self.matrix * self.to_vector(b)?)))
    }
}

/// `⟨ψ'|ψ⟩ = ∫d³σ ψ̃'ψ` with `ψ̃' = I⋆ψ̄'`.
pub fn scalar_product(bra: &Multivector, ket: &Multivector) -> Result<Complex64> {
    bra.same_signature(ket)?;
    let sig = bra.signature();
    if !sig.is_euclidean3() {
        return Err(Error::NotEuclidean3);
    }
    let tilde = clifford_star(&pseudoscalar(sig), &bra.reversion())?;
    Ok(berezin_integrate(&tilde.wedge(ket)?, &GeneratorSet::all(sig))?.scalar_part())
}

/// `ψ(t) = Exp(Ht) ⋆ ψ`.
pub fn wave_function_evolve(psi: &Multivector, h: &SpinHamiltonian, t: f64) -> Result<Multivector> {
    h.evolve_state(psi, t)
}

/// `e^{−iĤt}ψ = (cos(|E|t) − i(Ĥ/|E|) sin(|E|t))ψ` with `Ĥ` the lifted
/// Hamiltonian; `Ĥ² = |E|²` makes the two-level closed form exact.
pub fn lifted_evolution(psi: &Multivector, h: &SpinHamiltonian, t: f64) -> Result<Multivector> {
    let generator = OperatorLift::new(&h.times_unit(h.multivector()))?;
    let v = generator.to_vector(psi)?;
    let (s, c) = (h.abs_energy() * t).sin_cos();
    let out = &v * Complex64::new(c, 0.0) - generator.matrix() * &v * Complex64::new(s / h.abs_energy(), 0.0);
    Ok(generator.from_vector(&out))
}

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multivector::Multivector;
use crate::signature::cl3;
use crate::star::{clifford_star, pseudoscalar, star_chain};
use crate::DEFAULT_TOLERANCE;

/// `R = e_⋆^{Bφ/2} = cos(φ/2) + B sin(φ/2)` for a bivector with `B⋆B = −1`.
///
/// With `B = I⋆σ₃` this maps `σ₁ ↦ σ₁cos φ − σ₂ sin φ` under [`rotate`],
/// so positive angles turn clockwise about the axis.
pub fn rotor(b: &Multivector, phi: f64) -> Result<Multivector> {
    if !b.is_zero() && b.homogeneous_grade() != Some(2) {
        return Err(Error::NotHomogeneous { expected: Some(2) });
    }
    let sq = clifford_star(b, b)?;
    if !sq.approx_eq(&-Multivector::one(b.signature()), DEFAULT_TOLERANCE) {
        return Err(Error::NotNormalizedBivector(sq.to_string()));
    }
    let (s, c) = (phi / 2.0).sin_cos();
    Ok(Multivector::scalar(b.signature(), c) + b.scale(s))
}

/// Rotor generated by `B = I⋆n` for a unit axis `n` of ℂℓ(3).
pub fn rotor_about_axis(axis: [f64; 3], phi: f64) -> Result<Multivector> {
    let sig = cl3();
    let n = Multivector::vector(&sig, &axis)?;
    rotor(&clifford_star(&pseudoscalar(&sig), &n)?, phi)
}

/// `R ⋆ x ⋆ R̄`.
pub fn rotate(r: &Multivector, x: &Multivector) -> Result<Multivector> {
    star_chain(&[r, x, &r.reversion()])
}

/// A rotor of ℂℓ(3) taking the unit vector `from` to the unit vector `to`.
pub fn rotor_between(from: [f64; 3], to: [f64; 3]) -> Result<Multivector> {
    let sig = cl3();
    let a = Multivector::vector(&sig, &from)?;
    let b = Multivector::vector(&sig, &to)?;
    let cos = from.iter().zip(&to).map(|(x, y)| x * y).sum::<f64>();
    if 1.0 + cos < 1e-12 {
        // antiparallel: turn by π about any axis orthogonal to `from`
        let helper = if from[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let h = Multivector::vector(&sig, &helper)?;
        let plane = a.wedge(&h)?;
        let norm = clifford_star(&plane, &plane)?.scalar_part().re.abs().sqrt();
        return rotor(&plane.scale(1.0 / norm), std::f64::consts::PI);
    }
    let r = Multivector::one(&sig) + clifford_star(&b, &a)?;
    Ok(r.scale(1.0 / (2.0 * (1.0 + cos)).sqrt()))
}

/// Even multivector `ψ = ψ⁰ + ψⁱ𝙱_i` of the real algebra ℂℓ₃(ℝ).
#[derive(Clone, Debug, PartialEq)]
pub struct Spinor(Multivector);

const B1: u32 = 0b110;
const B2: u32 = 0b101; // σ₁σ₃ = −𝙱₂
const B3: u32 = 0b011;

impl Spinor {
    pub fn new(psi: Multivector) -> Result<Self> {
        if !psi.signature().is_euclidean3()
            || !psi.odd_part().is_zero()
            || !psi.has_real_coefficients(DEFAULT_TOLERANCE)
        {
            return Err(Error::NotSpinor);
        }
        Ok(Self(psi.map_coefficients(|_, c| Complex64::new(c.re, 0.0))))
    }

    /// From the components `(ψ⁰, ψ¹, ψ², ψ³)` along `(1, 𝙱₁, 𝙱₂, 𝙱₃)`.
    pub fn from_components(c: [f64; 4]) -> Self {
        let sig = cl3();
        let mv = Multivector::from_terms(
            &sig,
            [
                (0, Complex64::new(c[0], 0.0)),
                (B1, Complex64::new(c[1], 0.0)),
                (B2, Complex64::new(-c[2], 0.0)),
                (B3, Complex64::new(c[3], 0.0)),
            ],
        )
        .expect("blades of cl3");
        Self(mv)
    }

    pub fn components(&self) -> [f64; 4] {
        [
            self.0.coefficient(0).re,
            self.0.coefficient(B1).re,
            -self.0.coefficient(B2).re,
            self.0.coefficient(B3).re,
        ]
    }

    /// Spin up, `ψ₊ = 1`.
    pub fn up() -> Self {
        Self::from_components([1.0, 0.0, 0.0, 0.0])
    }

    /// Spin down, `ψ₋ = 𝙱₂`.
    pub fn down() -> Self {
        Self::from_components([0.0, 0.0, 1.0, 0.0])
    }

    pub fn multivector(&self) -> &Multivector {
        &self.0
    }

    /// `ψ̂ = (ψ⁰ + iψ³, −ψ² + iψ¹)`.
    pub fn to_tuple(&self) -> [Complex64; 2] {
        let [p0, p1, p2, p3] = self.components();
        [Complex64::new(p0, p3), Complex64::new(-p2, p1)]
    }

    pub fn from_tuple(t: [Complex64; 2]) -> Self {
        Self::from_components([t[0].re, t[1].im, -t[1].re, t[0].im])
    }

    /// `ψ̄ ⋆ ψ`, which is `|ψ̂|²` for an even real multivector.
    pub fn norm_squared(&self) -> f64 {
        clifford_star(&self.0.reversion(), &self.0)
            .expect("same signature")
            .scalar_part()
            .re
    }

    pub fn is_normalized(&self) -> bool {
        let one = Multivector::one(self.0.signature());
        let left = clifford_star(&self.0.reversion(), &self.0).expect("same signature");
        let right = clifford_star(&self.0, &self.0.reversion()).expect("same signature");
        left.approx_eq(&one, DEFAULT_TOLERANCE) && right.approx_eq(&one, DEFAULT_TOLERANCE)
    }

    /// `λψ − σ_i ⋆ ψ ⋆ σ₃` for zero-based `i`.
    pub fn eigenvalue_residual(&self, i: usize, lambda: Complex64) -> Result<Multivector> {
        let sig = self.0.signature();
        let si = Multivector::generator(sig, i)?;
        let s3 = Multivector::generator(sig, 2)?;
        Ok(self.0.scale(lambda) - star_chain(&[&si, &self.0, &s3])?)
    }

    /// `R ⋆ ψ`.
    pub fn rotated(&self, r: &Multivector) -> Result<Self> {
        Self::new(clifford_star(r, &self.0)?)
    }
}

/// `π = ψ ⋆ ½(1 + σ₃) ⋆ ψ̄` for a normalized spinor.
pub fn wigner_from_spinor(psi: &Spinor) -> Result<Multivector> {
    if !psi.is_normalized() {
        return Err(Error::NotNormalizedSpinor);
    }
    let sig = psi.0.signature();
    let up = (Multivector::one(sig) + Multivector::generator(sig, 2)?).scale(0.5);
    star_chain(&[&psi.0, &up, &psi.0.reversion()])
}

/// `λπ − σ_i ⋆ π` for zero-based `i`.
pub fn wigner_eigenvalue_residual(pi: &Multivector, i: usize, lambda: Complex64) -> Result<Multivector> {
    let si = Multivector::generator(pi.signature(), i)?;
    Ok(pi.scale(lambda) - clifford_star(&si, pi)?)
}

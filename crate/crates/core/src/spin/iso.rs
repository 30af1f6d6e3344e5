//! The two algebras isomorphic to the even subalgebra ℂℓ₃⁺(ℂ): ℂℓ₂(ℂ)
//! via `−iσ₂σ₃ ↦ σ₁, −iσ₃σ₁ ↦ σ₂`, and ℂℓ₃(ℝ) via `i ↦ I`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multivector::Multivector;
use crate::signature::{cl2, cl3};
use crate::star::{clifford_star, pseudoscalar};
use crate::DEFAULT_TOLERANCE;

fn require_even_cl3(a: &Multivector) -> Result<()> {
    if !a.signature().is_euclidean3() || !a.odd_part().is_zero() {
        return Err(Error::OutsideDomain);
    }
    Ok(())
}

/// ℂℓ₃⁺(ℂ) → ℂℓ₂(ℂ): `σ₂σ₃ ↦ iσ₁`, `σ₃σ₁ ↦ iσ₂`, `σ₁σ₂ ↦ σ₁σ₂`.
pub fn even_cl3_to_cl2(a: &Multivector) -> Result<Multivector> {
    require_even_cl3(a)?;
    let i = Complex64::i();
    let sig = cl2();
    let mut out = Multivector::zero(&sig);
    for (m, c) in a.terms() {
        let (mask, factor) = match m {
            0 => (0b00, Complex64::new(1.0, 0.0)),
            0b110 => (0b01, i),
            // σ₁σ₃ = −σ₃σ₁
            0b101 => (0b10, -i),
            0b011 => (0b11, Complex64::new(1.0, 0.0)),
            _ => unreachable!("even blade of cl3"),
        };
        out.add_term(mask, c * factor);
    }
    Ok(out)
}

pub fn even_cl2_to_cl3(a: &Multivector) -> Result<Multivector> {
    if a.signature() != &cl2() {
        return Err(Error::OutsideDomain);
    }
    let i = Complex64::i();
    let sig = cl3();
    let mut out = Multivector::zero(&sig);
    for (m, c) in a.terms() {
        let (mask, factor) = match m {
            0b00 => (0, Complex64::new(1.0, 0.0)),
            0b01 => (0b110, -i),
            0b10 => (0b101, i),
            0b11 => (0b011, Complex64::new(1.0, 0.0)),
            _ => unreachable!("blade of cl2"),
        };
        out.add_term(mask, c * factor);
    }
    Ok(out)
}

/// ℂℓ₃⁺(ℂ) → ℂℓ₃(ℝ): `a + ib ↦ a + I⋆b` for real even `a, b`.
pub fn complex_to_real(a: &Multivector) -> Result<Multivector> {
    require_even_cl3(a)?;
    let re = a.map_coefficients(|_, c| Complex64::new(c.re, 0.0));
    let im = a.map_coefficients(|_, c| Complex64::new(c.im, 0.0));
    Ok(re + clifford_star(&pseudoscalar(a.signature()), &im)?)
}

/// ℂℓ₃(ℝ) → ℂℓ₃⁺(ℂ): even part stays, odd part `o` becomes `−i I⋆o`.
pub fn real_to_complex(a: &Multivector) -> Result<Multivector> {
    if !a.signature().is_euclidean3() || !a.has_real_coefficients(DEFAULT_TOLERANCE) {
        return Err(Error::OutsideDomain);
    }
    let b = -clifford_star(&pseudoscalar(a.signature()), &a.odd_part())?;
    Ok(a.even_part() + b.scale(Complex64::i()))
}

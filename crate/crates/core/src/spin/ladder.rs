use num_complex::Complex64;

use super::rotor::{rotate, rotor_between};
use super::{ImaginaryUnit, SpinHamiltonian};
use crate::error::{Error, Result};
use crate::multivector::Multivector;
use crate::signature::cl3;
use crate::star::{clifford_star, pseudoscalar};
use crate::DEFAULT_TOLERANCE;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LadderFlavor {
    /// `𝕗 = π₊⋆σ₁`, odd.
    Vector,
    /// `𝚏 = σ₃⋆𝕗`, in the even subalgebra.
    Bivector,
}

/// Lowering operator `f` and its conjugate `f̄`, with
/// `f̄⋆π₊⋆f = π₋` and `f⋆π₋⋆f̄ = π₊`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ladders {
    pub f: Multivector,
    pub f_bar: Multivector,
}

impl Ladders {
    /// Residuals of the two reflection identities.
    pub fn residuals(&self, plus: &Multivector, minus: &Multivector) -> Result<(f64, f64)> {
        let down = crate::star::star_chain(&[&self.f_bar, plus, &self.f])?;
        let up = crate::star::star_chain(&[&self.f, minus, &self.f_bar])?;
        Ok((down.max_abs_diff(minus), up.max_abs_diff(plus)))
    }
}

fn generator(i: usize) -> Multivector {
    Multivector::generator(&cl3(), i).expect("index < 3")
}

/// Unit axis `n` of `H = −i|E| I⋆n`, or `UnsupportedHamiltonian`.
fn spin_axis(h: &SpinHamiltonian) -> Result<[f64; 3]> {
    let sig = h.signature();
    if !sig.is_euclidean3() || h.unit() != ImaginaryUnit::Complex {
        return Err(Error::UnsupportedHamiltonian);
    }
    let i_n = h.multivector().scale(Complex64::new(0.0, 1.0 / h.abs_energy()));
    let n = -clifford_star(&pseudoscalar(sig), &i_n)?;
    if n.homogeneous_grade() != Some(1) || !n.has_real_coefficients(DEFAULT_TOLERANCE) {
        return Err(Error::UnsupportedHamiltonian);
    }
    Ok([0, 1, 2].map(|k| n.coefficient(1 << k).re))
}

fn z_ladders(plus: &Multivector, flavor: LadderFlavor, primed: bool) -> Result<Ladders> {
    let s = generator(if primed { 1 } else { 0 });
    let f = clifford_star(plus, &s)?;
    let f_bar = clifford_star(&s, plus)?;
    Ok(match flavor {
        LadderFlavor::Vector => Ladders { f, f_bar },
        LadderFlavor::Bivector => {
            let s3 = generator(2);
            Ladders {
                f: clifford_star(&s3, &f)?,
                f_bar: clifford_star(&f_bar, &s3)?,
            }
        }
    })
}

fn ladders(h: &SpinHamiltonian, flavor: LadderFlavor, primed: bool) -> Result<Ladders> {
    let axis = spin_axis(h)?;
    let z = SpinHamiltonian::z_direction(2.0 * h.abs_energy())?;
    let (plus, _) = z.projectors();
    let base = z_ladders(&plus, flavor, primed)?;
    if (axis[2] - 1.0).abs() < DEFAULT_TOLERANCE {
        return Ok(base);
    }
    // other directions: conjugate the z-case by the rotor taking σ₃ to n
    let r = rotor_between([0.0, 0.0, 1.0], axis)?;
    Ok(Ladders {
        f: rotate(&r, &base.f)?,
        f_bar: rotate(&r, &base.f_bar)?,
    })
}

pub fn ladder_operators(h: &SpinHamiltonian, flavor: LadderFlavor) -> Result<Ladders> {
    ladders(h, flavor, false)
}

/// The alternates `𝕗' = π₊⋆σ₂` and `𝚏' = σ₃⋆𝕗'`.
pub fn primed_ladder_operators(h: &SpinHamiltonian, flavor: LadderFlavor) -> Result<Ladders> {
    ladders(h, flavor, true)
}

/// `f = ½(σ₁ + I⋆σ₂)`, `f̄ = ½(σ₁ − I⋆σ₂)` of the real algebra.
pub fn real_ladder() -> Ladders {
    let sig = cl3();
    let i_s2 = clifford_star(&pseudoscalar(&sig), &generator(1)).expect("same signature");
    Ladders {
        f: (generator(0) + i_s2.clone()).scale(0.5),
        f_bar: (generator(0) - i_s2).scale(0.5),
    }
}

/// Residuals of the holomorphic relations between `σ₁, σ₂, σ₁σ₂` and the
/// vector ladder operators of the z-Hamiltonian.
#[derive(Clone, Debug, PartialEq)]
pub struct HolomorphicReport {
    pub entries: Vec<(&'static str, f64)>,
}

impl HolomorphicReport {
    pub fn max_residual(&self) -> f64 {
        self.entries.iter().map(|e| e.1).fold(0.0, f64::max)
    }
}

pub fn holomorphic_decomposition() -> Result<HolomorphicReport> {
    let h = SpinHamiltonian::z_direction(1.0)?;
    let (plus, minus) = h.projectors();
    let Ladders { f, f_bar } = ladder_operators(&h, LadderFlavor::Vector)?;
    let i = Complex64::i();
    let (s1, s2) = (generator(0), generator(1));
    let one = Multivector::one(&cl3());
    let minus_i_b3 = s1.wedge(&s2)?.scale(-i);
    let f_fbar = clifford_star(&f, &f_bar)?;
    let entries = vec![
        ("s1 = f + fbar", s1.max_abs_diff(&(&f + &f_bar))),
        ("s2 = -i(f - fbar)", s2.max_abs_diff(&(&f - &f_bar).scale(-i))),
        ("-i s1 s2 = 2 f^fbar", minus_i_b3.max_abs_diff(&f.wedge(&f_bar)?.scale(2.0))),
        ("-i s1 s2 = 2 f*fbar - 1", minus_i_b3.max_abs_diff(&(f_fbar.scale(2.0) - one))),
        ("pi+ = f*fbar", plus.max_abs_diff(&f_fbar)),
        ("pi- = fbar*f", minus.max_abs_diff(&clifford_star(&f_bar, &f)?)),
    ];
    Ok(HolomorphicReport { entries })
}

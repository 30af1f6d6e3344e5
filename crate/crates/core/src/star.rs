//! The fermionic Clifford star product.
//!
//! `A ⋆ B = A exp[η_ij ∂⃖/∂σ_i ∂⃗/∂σ_j] B` is expanded as a finite sum: the
//! order-k term contracts a k-subset of generators, applying right
//! derivatives to `A` and left derivatives to `B` in ascending generator
//! order, weighted by the product of metric entries. For basis blades `a`
//! and `b` only the subset `a ∩ b` survives, since any smaller contraction
//! leaves a repeated generator that the wedge annihilates.

use std::sync::Arc;

use num_complex::Complex64;

use crate::berezin::{berezin_integrate_measure, relabel, GeneratorSet};
use crate::error::{Error, Result};
use crate::multivector::{left_derivative_sign, right_derivative_sign, wedge_sign, Multivector};
use crate::signature::{Signature, cl3};

/// Star product of two unit blades: `(coefficient, blade)` or `None` if
/// the product vanishes (a contracted generator has zero metric).
pub fn blade_star(sig: &Signature, a: u32, b: u32) -> Option<(f64, u32)> {
    let shared = a & b;
    let mut coef = 1.0;
    let (mut ra, mut rb) = (a, b);
    let mut rest = shared;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let eta = sig.metric(i);
        if eta == 0.0 {
            return None;
        }
        coef *= eta * right_derivative_sign(ra, i) * left_derivative_sign(rb, i);
        ra ^= 1 << i;
        rb ^= 1 << i;
    }
    let s = wedge_sign(ra, rb)?;
    Some((coef * s, ra | rb))
}

pub fn clifford_star(a: &Multivector, b: &Multivector) -> Result<Multivector> {
    a.same_signature(b)?;
    let sig = a.signature();
    let mut out = Multivector::zero(sig);
    for (ma, x) in a.terms() {
        for (mb, y) in b.terms() {
            if let Some((s, m)) = blade_star(sig, ma, mb) {
                out.add_term(m, x * y * s);
            }
        }
    }
    Ok(out)
}

/// Left-to-right star product of a sequence of factors.
pub fn star_chain(factors: &[&Multivector]) -> Result<Multivector> {
    let (first, rest) = factors
        .split_first()
        .expect("star_chain needs at least one factor");
    rest.iter()
        .try_fold((*first).clone(), |acc, f| clifford_star(&acc, f))
}

/// `A ⋆ B + B ⋆ A`.
pub fn star_anticommutator(a: &Multivector, b: &Multivector) -> Result<Multivector> {
    Ok(clifford_star(a, b)? + clifford_star(b, a)?)
}

/// `A ⋆ B − B ⋆ A`.
pub fn star_commutator(a: &Multivector, b: &Multivector) -> Result<Multivector> {
    Ok(clifford_star(a, b)? - clifford_star(b, a)?)
}

/// `A^{N⋆}`; the zeroth power is 1.
pub fn n_fold_star(a: &Multivector, n: usize) -> Multivector {
    let mut out = Multivector::one(a.signature());
    for _ in 0..n {
        out = clifford_star(&out, a).expect("same signature");
    }
    out
}

/// `exp(X)` with wedge powers. The series terminates because an even
/// Grassmann element without scalar part is nilpotent.
pub fn exp_wedge(x: &Multivector) -> Result<Multivector> {
    if x.scalar_part() != Complex64::new(0.0, 0.0) {
        return Err(Error::NotNilpotent);
    }
    let mut out = Multivector::one(x.signature());
    let mut term = out.clone();
    for k in 1..=x.signature().dim() + 1 {
        term = term.wedge(x)?.scale(1.0 / k as f64);
        if term.is_zero() {
            break;
        }
        out += &term;
    }
    Ok(out)
}

/// Clifford star on ℂℓ(3) evaluated as a Berezin integral over two
/// replica triples:
/// `∫d³σ' d³σ'' A(σ') B(σ'') exp[Σ σ_iσ'_i + σ'_iσ''_i + σ''_iσ_i]`.
/// The measure is applied right to left (`σ''` first).
pub fn clifford_star_integral_form(a: &Multivector, b: &Multivector) -> Result<Multivector> {
    a.same_signature(b)?;
    if !a.signature().is_euclidean3() {
        return Err(Error::NotEuclidean3);
    }
    let work = Signature::replicated(3, 3)?;
    let base = GeneratorSet::replica(&work, 0)?;
    let first = GeneratorSet::replica(&work, 1)?;
    let second = GeneratorSet::replica(&work, 2)?;
    let source = GeneratorSet::all(a.signature());

    let a1 = relabel(a, &source, &first)?;
    let b2 = relabel(b, &source, &second)?;
    let exponent = base.dot(&first)? + first.dot(&second)? + second.dot(&base)?;
    let integrand = a1.wedge(&b2)?.wedge(&exp_wedge(&exponent)?)?;
    let reduced = berezin_integrate_measure(&integrand, &[first, second])?;
    relabel(&reduced, &base, &source)
}

fn require_grade(a: &Multivector, k: usize) -> Result<()> {
    match a.homogeneous_grade() {
        Some(g) if g == k => Ok(()),
        None if a.is_zero() => Ok(()),
        _ => Err(Error::NotHomogeneous { expected: Some(k) }),
    }
}

fn grade_of(a: &Multivector) -> Result<usize> {
    if a.is_zero() {
        return Ok(0);
    }
    a.homogeneous_grade()
        .ok_or(Error::NotHomogeneous { expected: None })
}

/// `a·b = ½{a,b}⋆` for grade-1 inputs.
pub fn vector_dot(a: &Multivector, b: &Multivector) -> Result<Multivector> {
    require_grade(a, 1)?;
    require_grade(b, 1)?;
    Ok(star_anticommutator(a, b)?.scale(0.5))
}

/// `a∧b = ½[a,b]⋆` for grade-1 inputs.
pub fn vector_wedge(a: &Multivector, b: &Multivector) -> Result<Multivector> {
    require_grade(a, 1)?;
    require_grade(b, 1)?;
    Ok(star_commutator(a, b)?.scale(0.5))
}

/// `A_(m)·B_(n) = ⟨A⋆B⟩_{|m−n|}` for homogeneous inputs.
pub fn graded_inner(a: &Multivector, b: &Multivector) -> Result<Multivector> {
    let (m, n) = (grade_of(a)?, grade_of(b)?);
    Ok(clifford_star(a, b)?.grade_project(m.abs_diff(n)))
}

/// `A_(m) B_(n) = ⟨A⋆B⟩_{m+n}` for homogeneous inputs.
pub fn graded_outer(a: &Multivector, b: &Multivector) -> Result<Multivector> {
    let (m, n) = (grade_of(a)?, grade_of(b)?);
    Ok(clifford_star(a, b)?.grade_project(m + n))
}

/// Unit pseudoscalar `I = σ_1⋯σ_n` of a signature.
pub fn pseudoscalar(sig: &Arc<Signature>) -> Multivector {
    Multivector::blade(sig, sig.full_mask(), 1.0)
}

/// Basis bivector `𝙱_i = I ⋆ σ_i` of ℂℓ(3) (`i` zero-based).
pub fn basis_bivector(i: usize) -> Multivector {
    let sig = cl3();
    let s = Multivector::generator(&sig, i).expect("index < 3");
    clifford_star(&pseudoscalar(&sig), &s).expect("same signature")
}

/// Quaternion units `(𝚒, 𝚓, 𝚔) = (𝙱₁, −𝙱₂, 𝙱₃)`.
pub fn quaternion_units() -> [Multivector; 3] {
    [basis_bivector(0), -basis_bivector(1), basis_bivector(2)]
}

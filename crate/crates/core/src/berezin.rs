//! Berezin calculus: integration, linear substitution, the Grassmann
//! Fourier transform and delta function, and the Gaussian pair integral.
//!
//! `∫dσ` is the left derivative. Multi-generator measures are applied
//! right to left: `∫d³σ = ∫dσ₃∫dσ₂∫dσ₁` integrates `σ₁` first, and
//! `∫dX dY F = ∫dX (∫dY F)`.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multivector::Multivector;
use crate::signature::Signature;
use crate::star::{clifford_star, exp_wedge};

/// Largest number of triples for [`gaussian_pair_integral`].
pub const MAX_GAUSS_SETS: usize = 6;

/// An ordered selection of generators from one signature, such as the
/// replica triple `(s1', s2', s3')`. Order matters: it fixes the sign of
/// integrals and which generator maps to which under substitution.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSet {
    sig: Arc<Signature>,
    indices: Vec<usize>,
}

impl GeneratorSet {
    pub fn new(sig: &Arc<Signature>, indices: Vec<usize>) -> Result<Self> {
        let mut mask = 0u32;
        for &i in &indices {
            sig.check_index(i)?;
            if mask >> i & 1 == 1 {
                return Err(Error::DuplicateLabel(sig.label(i).to_string()));
            }
            mask |= 1 << i;
        }
        Ok(Self {
            sig: sig.clone(),
            indices,
        })
    }

    pub fn from_labels(sig: &Arc<Signature>, labels: &[&str]) -> Result<Self> {
        let indices = labels
            .iter()
            .map(|l| sig.index_of(l))
            .collect::<Result<Vec<_>>>()?;
        Self::new(sig, indices)
    }

    /// Every generator of the signature in ascending order.
    pub fn all(sig: &Arc<Signature>) -> Self {
        Self {
            sig: sig.clone(),
            indices: (0..sig.dim()).collect(),
        }
    }

    /// The generators `s1{p} s2{p} …` carrying `level` primes.
    pub fn replica(sig: &Arc<Signature>, level: usize) -> Result<Self> {
        let primes = "'".repeat(level);
        let mut indices = Vec::new();
        for i in 1.. {
            match sig.index_of(&format!("s{i}{primes}")) {
                Ok(idx) => indices.push(idx),
                Err(_) => break,
            }
        }
        if indices.is_empty() {
            return Err(Error::UnknownGenerator(format!("s1{primes}")));
        }
        Self::new(sig, indices)
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn mask(&self) -> u32 {
        self.indices.iter().fold(0, |m, &i| m | 1 << i)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.sig == other.sig && self.mask() & other.mask() == 0
    }

    pub fn generator(&self, k: usize) -> Multivector {
        Multivector::blade(&self.sig, 1 << self.indices[k], 1.0)
    }

    /// `Σ_k x_k y_k` (wedge), the pairing written `σ⃗σ⃗'`.
    pub fn dot(&self, other: &Self) -> Result<Multivector> {
        self.check_same_shape(other)?;
        let mut out = Multivector::zero(&self.sig);
        for k in 0..self.len() {
            out += &self.generator(k).wedge(&other.generator(k))?;
        }
        Ok(out)
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch);
        }
        if self.len() != other.len() {
            return Err(Error::SetSizeMismatch(self.len(), other.len()));
        }
        Ok(())
    }

    fn check_disjoint_triples(&self, other: &Self) -> Result<()> {
        self.check_same_shape(other)?;
        if self.len() != 3 {
            return Err(Error::SetSizeMismatch(3, self.len()));
        }
        if !self.is_disjoint(other) {
            return Err(Error::OverlappingSets);
        }
        Ok(())
    }
}

/// `∫d^kσ A` over the listed generators, first listed integrated first.
pub fn berezin_integrate(a: &Multivector, set: &GeneratorSet) -> Result<Multivector> {
    if a.signature() != set.signature() {
        return Err(Error::SignatureMismatch);
    }
    set.indices
        .iter()
        .try_fold(a.clone(), |acc, &i| acc.left_derivative(i))
}

/// `∫dX₁ dX₂ … dX_k F`, integrating the rightmost measure first.
pub fn berezin_integrate_measure(a: &Multivector, measure: &[GeneratorSet]) -> Result<Multivector> {
    measure
        .iter()
        .rev()
        .try_fold(a.clone(), |acc, set| berezin_integrate(&acc, set))
}

/// Replaces generator `from[k]` by `images[k]` (grade 1 in `target`).
/// Generators outside `from` are kept when the signature is unchanged;
/// across signatures the multivector must live entirely on `from`.
pub fn substitute(
    a: &Multivector,
    from: &GeneratorSet,
    images: &[Multivector],
    target: &Arc<Signature>,
) -> Result<Multivector> {
    if a.signature() != from.signature() {
        return Err(Error::SignatureMismatch);
    }
    if images.len() != from.len() {
        return Err(Error::SetSizeMismatch(from.len(), images.len()));
    }
    for img in images {
        if img.signature() != target {
            return Err(Error::SignatureMismatch);
        }
        if !img.is_zero() && img.homogeneous_grade() != Some(1) {
            return Err(Error::NonLinearImage);
        }
    }
    let same = a.signature() == target;
    if !same && a.support() & !from.mask() != 0 {
        return Err(Error::OutsideSubstitution);
    }
    let mut out = Multivector::zero(target);
    for (mask, c) in a.terms() {
        let mut term = Multivector::scalar(target, c);
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let factor = match from.indices.iter().position(|&g| g == i) {
                Some(k) => images[k].clone(),
                None => Multivector::blade(target, 1 << i, 1.0),
            };
            term = term.wedge(&factor)?;
            if term.is_zero() {
                break;
            }
        }
        out += &term;
    }
    Ok(out)
}

/// Substitutes `σ_i → Σ_j M_ij σ'_j` (`σ = from`, `σ' = to`) and returns
/// the result with the Berezin Jacobian `det M`, normalized so that
/// `∫_to A' = det M · ∫_from A`; equivalently
/// `∫_from A = det|∂σ'/∂σ| ∫_to A'`.
pub fn linear_substitution(
    a: &Multivector,
    m: &DMatrix<Complex64>,
    from: &GeneratorSet,
    to: &GeneratorSet,
) -> Result<(Multivector, Complex64)> {
    if from.len() != to.len() {
        return Err(Error::SetSizeMismatch(from.len(), to.len()));
    }
    let n = from.len();
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::MatrixShape {
            expected: n,
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let jacobian = if n == 0 {
        Complex64::new(1.0, 0.0)
    } else {
        m.clone().determinant()
    };
    if jacobian.norm() < 1e-14 {
        return Err(Error::SingularMatrix);
    }
    let images: Vec<Multivector> = (0..n)
        .map(|i| {
            let mut img = Multivector::zero(to.signature());
            for j in 0..n {
                img += &to.generator(j).scale(m[(i, j)]);
            }
            img
        })
        .collect();
    Ok((substitute(a, from, &images, to.signature())?, jacobian))
}

/// Moves a multivector from one generator set to another (possibly in a
/// different signature) by the identity permutation matrix.
pub fn relabel(a: &Multivector, from: &GeneratorSet, to: &GeneratorSet) -> Result<Multivector> {
    let identity = DMatrix::<Complex64>::identity(from.len(), from.len());
    let (out, jacobian) = linear_substitution(a, &identity, from, to)?;
    debug_assert_eq!(jacobian, Complex64::new(1.0, 0.0));
    Ok(out)
}

/// `F(σ') = ∫d³σ f(σ) e^{iσ⃗σ⃗'}`.
pub fn grassmann_fourier(
    f: &Multivector,
    from: &GeneratorSet,
    to: &GeneratorSet,
) -> Result<Multivector> {
    from.check_disjoint_triples(to)?;
    let kernel = exp_wedge(&from.dot(to)?.scale(Complex64::i()))?;
    berezin_integrate(&f.wedge(&kernel)?, from)
}

/// `f(σ) = −i ∫d³σ' F(σ') e^{iσ⃗'σ⃗}`, with `from = σ'` and `to = σ`.
pub fn inverse_grassmann_fourier(
    big_f: &Multivector,
    from: &GeneratorSet,
    to: &GeneratorSet,
) -> Result<Multivector> {
    from.check_disjoint_triples(to)?;
    let kernel = exp_wedge(&from.dot(to)?.scale(Complex64::i()))?;
    Ok(berezin_integrate(&big_f.wedge(&kernel)?, from)?.scale(-Complex64::i()))
}

/// `δ³(x − y) = Π_k (y_k − x_k)`, so that `f(x) = ∫d³y δ³(x − y) f(y)`.
pub fn delta_function(x: &GeneratorSet, y: &GeneratorSet) -> Result<Multivector> {
    x.check_disjoint_triples(y)?;
    let mut out = Multivector::one(x.signature());
    for k in 0..x.len() {
        out = out.wedge(&(y.generator(k) - x.generator(k)))?;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussianIntegral {
    pub value: Complex64,
    /// False when `N` is odd; the unit value is only claimed for even `N`.
    pub even: bool,
}

/// `∫ Π_{m=1}^N d³σ_m exp(Σ_{n=1}^{N−1} σ⃗_{n+1}σ⃗_n)` on `N` fresh triples,
/// with the product measure read as `d³σ_N ⋯ d³σ_1` (`σ_1` innermost).
pub fn gaussian_pair_integral(n: usize) -> Result<GaussianIntegral> {
    if !(2..=MAX_GAUSS_SETS).contains(&n) {
        return Err(Error::GaussianRange { n });
    }
    let sig = Signature::replicated(3, n)?;
    let sets: Vec<GeneratorSet> = (0..n)
        .map(|m| GeneratorSet::replica(&sig, m))
        .collect::<Result<_>>()?;
    let mut exponent = Multivector::zero(&sig);
    for k in 0..n - 1 {
        exponent += &sets[k + 1].dot(&sets[k])?;
    }
    let integrand = exp_wedge(&exponent)?;
    let measure: Vec<GeneratorSet> = sets.into_iter().rev().collect();
    let value = berezin_integrate_measure(&integrand, &measure)?.scalar_part();
    Ok(GaussianIntegral {
        value,
        even: n.is_multiple_of(2),
    })
}

/// Both sides of `∫d³σ A⋆B = ∫d³σ AB` on ℂℓ(3).
pub fn star_under_integral(a: &Multivector, b: &Multivector) -> Result<(Complex64, Complex64)> {
    a.same_signature(b)?;
    if !a.signature().is_euclidean3() {
        return Err(Error::NotEuclidean3);
    }
    let all = GeneratorSet::all(a.signature());
    let lhs = berezin_integrate(&clifford_star(a, b)?, &all)?.scalar_part();
    let rhs = berezin_integrate(&a.wedge(b)?, &all)?.scalar_part();
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::cl3;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn top_form_normalization() {
        let sig = cl3();
        let all = GeneratorSet::all(&sig);
        let top = Multivector::blade(&sig, 0b111, 1.0);
        assert_eq!(
            berezin_integrate(&top, &all).unwrap(),
            Multivector::one(&sig)
        );
        let s12 = Multivector::blade(&sig, 0b011, 1.0);
        assert!(berezin_integrate(&s12, &all).unwrap().is_zero());
        assert!(berezin_integrate(&Multivector::one(&sig), &all)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn unknown_generator_in_set() {
        let sig = cl3();
        assert!(GeneratorSet::from_labels(&sig, &["s4"]).is_err());
        assert!(GeneratorSet::new(&sig, vec![0, 0]).is_err());
        assert!(GeneratorSet::replica(&sig, 1).is_err());
    }

    #[test]
    fn substitution_jacobians() {
        let sig = Signature::replicated(2, 2).unwrap();
        let from = GeneratorSet::replica(&sig, 0).unwrap();
        let to = GeneratorSet::replica(&sig, 1).unwrap();
        let s12 = from.generator(0).wedge(&from.generator(1)).unwrap();
        let int_from = berezin_integrate(&s12, &from).unwrap().scalar_part();

        let id = DMatrix::<Complex64>::identity(2, 2);
        let (same, j) = linear_substitution(&s12, &id, &from, &from).unwrap();
        assert_eq!((same, j), (s12.clone(), c(1.0)));

        let swap = DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
        let (sw, j) = linear_substitution(&s12, &swap, &from, &to).unwrap();
        assert_eq!(j, c(-1.0));
        let int_to = berezin_integrate(&sw, &to).unwrap().scalar_part();
        assert_eq!(int_to, j * int_from);

        let k = 1.7;
        let scale = DMatrix::from_row_slice(2, 2, &[c(k), c(0.0), c(0.0), c(k)]);
        let (sc, j) = linear_substitution(&s12, &scale, &from, &to).unwrap();
        assert!((j - c(k * k)).norm() < 1e-14);
        let int_to = berezin_integrate(&sc, &to).unwrap().scalar_part();
        assert!((int_to - j * int_from).norm() < 1e-14);

        let singular = DMatrix::from_row_slice(2, 2, &[c(1.0), c(2.0), c(2.0), c(4.0)]);
        assert_eq!(
            linear_substitution(&s12, &singular, &from, &to).unwrap_err(),
            Error::SingularMatrix
        );
    }

    #[test]
    fn substitution_rule_single_pair() {
        // ∫dσ₂ σ₁ with σ₁ = aσ'₁ + bσ'₂, σ₂ = cσ'₁ + dσ'₂
        let sig = Signature::replicated(2, 2).unwrap();
        let from = GeneratorSet::replica(&sig, 0).unwrap();
        let to = GeneratorSet::replica(&sig, 1).unwrap();
        let m = DMatrix::from_row_slice(2, 2, &[c(2.0), c(1.0), c(0.5), c(3.0)]);
        let a = from.generator(0).wedge(&from.generator(1)).unwrap();
        let (sub, jac) = linear_substitution(&a, &m, &from, &to).unwrap();
        let lhs = berezin_integrate(&a, &from).unwrap().scalar_part();
        let rhs = berezin_integrate(&sub, &to).unwrap().scalar_part();
        assert!((rhs - jac * lhs).norm() < 1e-14);
    }

    #[test]
    fn gaussian_values() {
        for n in [2, 4, 6] {
            let g = gaussian_pair_integral(n).unwrap();
            assert!(g.even);
            assert!((g.value - c(1.0)).norm() < 1e-12, "N = {n}: {}", g.value);
        }
        let odd = gaussian_pair_integral(3).unwrap();
        assert!(!odd.even);
        assert_eq!(odd.value, c(0.0));
        assert!(gaussian_pair_integral(1).is_err());
        assert!(gaussian_pair_integral(7).is_err());
    }

    #[test]
    fn fourier_of_zero_is_zero() {
        let sig = Signature::replicated(3, 2).unwrap();
        let a = GeneratorSet::replica(&sig, 0).unwrap();
        let b = GeneratorSet::replica(&sig, 1).unwrap();
        assert!(grassmann_fourier(&Multivector::zero(&sig), &a, &b)
            .unwrap()
            .is_zero());
        assert_eq!(
            grassmann_fourier(&Multivector::zero(&sig), &a, &a).unwrap_err(),
            Error::OverlappingSets
        );
    }

    #[test]
    fn delta_sifting_unit() {
        let sig = Signature::replicated(3, 2).unwrap();
        let x = GeneratorSet::replica(&sig, 1).unwrap();
        let y = GeneratorSet::replica(&sig, 0).unwrap();
        let d = delta_function(&x, &y).unwrap();
        let sifted = berezin_integrate(&d, &y).unwrap();
        assert_eq!(sifted, Multivector::one(&sig));
    }
}

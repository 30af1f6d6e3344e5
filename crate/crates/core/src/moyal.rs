//! Polynomial phase-space functions, the Moyal product, and the combined
//! Moyal-Clifford product used for the Pauli Hamiltonian.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::error::{Error, Result};
use crate::multivector::{format_term, Multivector};
use crate::signature::{cl3, Signature};
use crate::star::{basis_bivector, blade_star};
use crate::PRUNE_THRESHOLD;

/// Polynomial in commuting variables `(q₁…q_d, p₁…p_d)`. Exponent vectors
/// have length `2d`, positions ordered `q₁…q_d p₁…p_d`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseSpacePolynomial {
    d: usize,
    terms: BTreeMap<Vec<u32>, Complex64>,
}

impl PhaseSpacePolynomial {
    pub fn zero(d: usize) -> Self {
        Self {
            d,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(d: usize, c: impl Into<Complex64>) -> Self {
        let mut out = Self::zero(d);
        out.add_term(vec![0; 2 * d], c.into());
        out
    }

    pub fn monomial(d: usize, exponents: Vec<u32>, c: impl Into<Complex64>) -> Self {
        assert_eq!(exponents.len(), 2 * d, "exponent vector length");
        let mut out = Self::zero(d);
        out.add_term(exponents, c.into());
        out
    }

    /// `q_k` with zero-based `k`.
    pub fn q(d: usize, k: usize) -> Self {
        let mut e = vec![0; 2 * d];
        e[k] = 1;
        Self::monomial(d, e, 1.0)
    }

    /// `p_k` with zero-based `k`.
    pub fn p(d: usize, k: usize) -> Self {
        let mut e = vec![0; 2 * d];
        e[d + k] = 1;
        Self::monomial(d, e, 1.0)
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    fn add_term(&mut self, e: Vec<u32>, c: Complex64) {
        let entry = self.terms.entry(e.clone()).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if entry.norm() < PRUNE_THRESHOLD {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], Complex64)> + '_ {
        self.terms.iter().map(|(e, c)| (e.as_slice(), *c))
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Complex64 {
        self.terms
            .get(exponents)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn constant_part(&self) -> Complex64 {
        self.coefficient(&vec![0; 2 * self.d])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// Largest exponent of each variable.
    fn degrees(&self) -> Vec<u32> {
        let mut out = vec![0; 2 * self.d];
        for e in self.terms.keys() {
            for (o, &x) in out.iter_mut().zip(e) {
                *o = (*o).max(x);
            }
        }
        out
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    fn check_dim(&self, other: &Self) {
        assert_eq!(self.d, other.d, "phase-space dimension mismatch");
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> Self {
        let c = c.into();
        let mut out = Self::zero(self.d);
        for (e, &x) in &self.terms {
            out.add_term(e.clone(), x * c);
        }
        out
    }

    /// Pointwise (commutative) product.
    pub fn mul(&self, other: &Self) -> Self {
        self.check_dim(other);
        let mut out = Self::zero(self.d);
        for (ea, &x) in &self.terms {
            for (eb, &y) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, x * y);
            }
        }
        out
    }

    /// `∂ⁿ/∂v^n` for variable position `var` (`0..2d`).
    pub fn derivative(&self, var: usize, n: u32) -> Self {
        let mut out = Self::zero(self.d);
        for (e, &c) in &self.terms {
            if e[var] < n {
                continue;
            }
            let falling: f64 = (0..n).map(|k| f64::from(e[var] - k)).product();
            let mut e2 = e.clone();
            e2[var] -= n;
            out.add_term(e2, c * falling);
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self - other)
            .terms
            .values()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    fn monomial_name(&self, e: &[u32]) -> String {
        let mut parts = Vec::new();
        for (pos, &x) in e.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let (var, k) = if pos < self.d { ('q', pos) } else { ('p', pos - self.d) };
            if x == 1 {
                parts.push(format!("{var}{}", k + 1));
            } else {
                parts.push(format!("{var}{}^{x}", k + 1));
            }
        }
        parts.join(" ")
    }

    fn canonical_terms(&self) -> Vec<(&Vec<u32>, Complex64)> {
        let mut terms: Vec<_> = self.terms.iter().map(|(e, c)| (e, *c)).collect();
        terms.sort_by_key(|(e, _)| (e.iter().sum::<u32>(), std::cmp::Reverse((*e).clone())));
        terms
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polynomial serializes")
    }
}

impl Serialize for PhaseSpacePolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self.canonical_terms();
        let mut map = serializer.serialize_map(Some(terms.len()))?;
        for (e, c) in terms {
            map.serialize_entry(&self.monomial_name(e), &[c.re, c.im])?;
        }
        map.end()
    }
}

impl fmt::Display for PhaseSpacePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.canonical_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in terms.into_iter().enumerate() {
            let term = format_term(&self.monomial_name(e), c);
            match (k, term.strip_prefix('-')) {
                (0, _) => write!(f, "{term}")?,
                (_, Some(rest)) => write!(f, " - {rest}")?,
                (_, None) => write!(f, " + {term}")?,
            }
        }
        Ok(())
    }
}

impl std::ops::Add for &PhaseSpacePolynomial {
    type Output = PhaseSpacePolynomial;
    fn add(self, rhs: &PhaseSpacePolynomial) -> PhaseSpacePolynomial {
        self.check_dim(rhs);
        let mut out = self.clone();
        for (e, &c) in &rhs.terms {
            out.add_term(e.clone(), c);
        }
        out
    }
}

impl std::ops::Sub for &PhaseSpacePolynomial {
    type Output = PhaseSpacePolynomial;
    fn sub(self, rhs: &PhaseSpacePolynomial) -> PhaseSpacePolynomial {
        self + &rhs.scale(-1.0)
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `f exp[(iħ/2) Σ_k (∂⃖_{q_k}∂⃗_{p_k} − ∂⃖_{p_k}∂⃗_{q_k})] g`.
///
/// The operators for different `k` commute, so the exponential factors
/// into `Σ_{a,b} (iħ/2)^{a+b} (−1)^b/(a!b!) (∂_q^a ∂_p^b f)(∂_p^a ∂_q^b g)`
/// per degree of freedom; the sums stop at the polynomial degrees.
pub fn moyal_star(f: &PhaseSpacePolynomial, g: &PhaseSpacePolynomial, hbar: f64) -> PhaseSpacePolynomial {
    f.check_dim(g);
    let c = Complex64::new(0.0, hbar / 2.0);
    let (df, dg) = (f.degrees(), g.degrees());
    let mut out = PhaseSpacePolynomial::zero(f.d);
    moyal_dim(f, g, 0, Complex64::new(1.0, 0.0), c, &df, &dg, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn moyal_dim(
    f: &PhaseSpacePolynomial,
    g: &PhaseSpacePolynomial,
    k: usize,
    weight: Complex64,
    c: Complex64,
    df: &[u32],
    dg: &[u32],
    out: &mut PhaseSpacePolynomial,
) {
    let d = f.d;
    if k == d {
        let prod = f.mul(g).scale(weight);
        *out = &*out + &prod;
        return;
    }
    let (q, p) = (k, d + k);
    for a in 0..=df[q].min(dg[p]) {
        for b in 0..=df[p].min(dg[q]) {
            let fa = f.derivative(q, a).derivative(p, b);
            let gb = g.derivative(p, a).derivative(q, b);
            if fa.is_zero() || gb.is_zero() {
                continue;
            }
            let sign = if b % 2 == 1 { -1.0 } else { 1.0 };
            let w = weight * c.powu(a + b) * sign / (factorial(a) * factorial(b));
            moyal_dim(&fa, &gb, k + 1, w, c, df, dg, out);
        }
    }
}

/// Multivector with polynomial phase-space coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseSpaceMultivector {
    sig: Arc<Signature>,
    d: usize,
    terms: BTreeMap<u32, PhaseSpacePolynomial>,
}

impl PhaseSpaceMultivector {
    pub fn zero(sig: &Arc<Signature>, d: usize) -> Self {
        Self {
            sig: sig.clone(),
            d,
            terms: BTreeMap::new(),
        }
    }

    pub fn blade(sig: &Arc<Signature>, mask: u32, coef: PhaseSpacePolynomial) -> Self {
        let mut out = Self::zero(sig, coef.d);
        out.add_term(mask, &coef);
        out
    }

    /// Constant coefficients taken from an ordinary multivector.
    pub fn from_multivector(a: &Multivector, d: usize) -> Self {
        let mut out = Self::zero(a.signature(), d);
        for (m, c) in a.terms() {
            out.add_term(m, &PhaseSpacePolynomial::constant(d, c));
        }
        out
    }

    /// The multivector of constant terms, if every coefficient is constant.
    pub fn to_multivector(&self) -> Option<Multivector> {
        let mut out = Multivector::zero(&self.sig);
        for (&m, poly) in &self.terms {
            if !poly.is_constant() {
                return None;
            }
            out.add_term(m, poly.constant_part());
        }
        Some(out)
    }

    fn add_term(&mut self, mask: u32, coef: &PhaseSpacePolynomial) {
        assert_eq!(coef.d, self.d, "phase-space dimension mismatch");
        let entry = self
            .terms
            .entry(mask)
            .or_insert_with(|| PhaseSpacePolynomial::zero(coef.d));
        *entry = &*entry + coef;
        if entry.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn coefficient(&self, mask: u32) -> PhaseSpacePolynomial {
        self.terms
            .get(&mask)
            .cloned()
            .unwrap_or_else(|| PhaseSpacePolynomial::zero(self.d))
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &PhaseSpacePolynomial)> + '_ {
        self.terms.iter().map(|(&m, p)| (m, p))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn grade_project(&self, k: usize) -> Self {
        let mut out = Self::zero(&self.sig, self.d);
        for (&m, p) in &self.terms {
            if m.count_ones() as usize == k {
                out.add_term(m, p);
            }
        }
        out
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> Self {
        let c = c.into();
        let mut out = Self::zero(&self.sig, self.d);
        for (&m, p) in &self.terms {
            out.add_term(m, &p.scale(c));
        }
        out
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.sig != other.sig || self.d != other.d {
            return Err(Error::SignatureMismatch);
        }
        let mut out = self.clone();
        for (&m, p) in &other.terms {
            out.add_term(m, p);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(-1.0))
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        let diff = self.try_sub(other)?;
        Ok(diff
            .terms
            .values()
            .flat_map(|p| p.terms.values().map(|c| c.norm()))
            .fold(0.0, f64::max))
    }
}

impl fmt::Display for PhaseSpaceMultivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<u32> = self.terms.keys().copied().collect();
        keys.sort_by_key(|&m| (m.count_ones(), m));
        for (k, m) in keys.into_iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let blade = self.sig.blade_name(m);
            if blade.is_empty() {
                write!(f, "[{}]", self.terms[&m])?;
            } else {
                write!(f, "[{}]*{blade}", self.terms[&m])?;
            }
        }
        Ok(())
    }
}

/// Moyal product on the coefficients tensored with the Clifford star on
/// the blades. The coefficients commute with the generators.
pub fn combined_star(
    a: &PhaseSpaceMultivector,
    b: &PhaseSpaceMultivector,
    hbar: f64,
) -> Result<PhaseSpaceMultivector> {
    if a.sig != b.sig || a.d != b.d {
        return Err(Error::SignatureMismatch);
    }
    let mut out = PhaseSpaceMultivector::zero(&a.sig, a.d);
    for (&ma, f) in &a.terms {
        for (&mb, g) in &b.terms {
            if let Some((s, m)) = blade_star(&a.sig, ma, mb) {
                out.add_term(m, &moyal_star(f, g, hbar).scale(s));
            }
        }
    }
    Ok(out)
}

/// Symmetric-gauge potential `𝗔 = ½ B⃗ × q⃗` as a vector in ℂℓ(3); for
/// `B⃗ = (0,0,B)` this is `−(B/2)q₂σ₁ + (B/2)q₁σ₂`.
pub fn symmetric_gauge_potential(b: [f64; 3]) -> PhaseSpaceMultivector {
    let sig = cl3();
    let mut out = PhaseSpaceMultivector::zero(&sig, 3);
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let comp = &PhaseSpacePolynomial::q(3, k).scale(0.5 * b[j])
            - &PhaseSpacePolynomial::q(3, j).scale(0.5 * b[k]);
        out.add_term(1 << i, &comp);
    }
    out
}

/// `∇𝗔 = Σ_{ij} (∂A_j/∂q_i) σ_i⋆σ_j` for a grade-1 field on ℂℓ(3).
pub fn nabla(a: &PhaseSpaceMultivector) -> Result<PhaseSpaceMultivector> {
    if !a.sig.is_euclidean3() || a.d != 3 {
        return Err(Error::NotEuclidean3);
    }
    if a.terms.keys().any(|m| m.count_ones() != 1) {
        return Err(Error::NotHomogeneous { expected: Some(1) });
    }
    let mut out = PhaseSpaceMultivector::zero(&a.sig, 3);
    for i in 0..3 {
        let grad = PhaseSpaceMultivector::blade(&a.sig, 1 << i, PhaseSpacePolynomial::constant(3, 1.0));
        let mut da = PhaseSpaceMultivector::zero(&a.sig, 3);
        for (&m, p) in &a.terms {
            da.add_term(m, &p.derivative(i, 1));
        }
        out = out.try_add(&combined_star(&grad, &da, 0.0)?)?;
    }
    Ok(out)
}

/// Pauli Hamiltonian for a homogeneous field and its split into the
/// orbital part and the bivector spin term.
#[derive(Clone, Debug)]
pub struct LandauSplit {
    /// `(1/2m)[(p_i + eA_i)σ_i]^{2⋆}`.
    pub hamiltonian: PhaseSpaceMultivector,
    /// `(1/2m) Σ (p_i + eA_i)^{2⋆}`.
    pub h0: PhaseSpaceMultivector,
    /// `Σ ε_ikl (ħω_i/4i) σ_kσ_l`, `ω_i = eB_i/m`.
    pub spin: Multivector,
    /// `∇𝗔`, which equals `Σ B_i 𝙱_i`.
    pub nabla_a: PhaseSpaceMultivector,
}

impl LandauSplit {
    /// `H − H₀ − 𝙷_S`, which vanishes identically.
    pub fn residual(&self) -> Result<f64> {
        let spin = PhaseSpaceMultivector::from_multivector(&self.spin, 3);
        let rest = self.hamiltonian.try_sub(&self.h0)?.try_sub(&spin)?;
        rest.max_abs_diff(&PhaseSpaceMultivector::zero(self.spin.signature(), 3))
    }
}

/// `Σ ε_ikl (ħω_i/4i) σ_kσ_l` with `ω_i = eB_i/m`.
pub fn spin_term(b: [f64; 3], e: f64, m: f64, hbar: f64) -> Result<Multivector> {
    if m == 0.0 {
        return Err(Error::ZeroMass);
    }
    let sig = cl3();
    let mut out = Multivector::zero(&sig);
    for (i, &bi) in b.iter().enumerate() {
        let omega = e * bi / m;
        // ε_ikl σ_kσ_l summed over k,l is 2𝙱_i
        out += &basis_bivector(i).scale(Complex64::new(0.0, -hbar * omega / 2.0));
    }
    Ok(out)
}

pub fn landau_split(b: [f64; 3], e: f64, m: f64, hbar: f64) -> Result<LandauSplit> {
    if m == 0.0 {
        return Err(Error::ZeroMass);
    }
    let sig = cl3();
    let potential = symmetric_gauge_potential(b);
    let mut velocity = PhaseSpaceMultivector::zero(&sig, 3);
    let mut h0 = PhaseSpacePolynomial::zero(3);
    for i in 0..3 {
        let pi = &PhaseSpacePolynomial::p(3, i) + &potential.coefficient(1 << i).scale(e);
        h0 = &h0 + &moyal_star(&pi, &pi, hbar);
        velocity.add_term(1 << i, &pi);
    }
    let hamiltonian = combined_star(&velocity, &velocity, hbar)?.scale(1.0 / (2.0 * m));
    let h0 = PhaseSpaceMultivector::blade(&sig, 0, h0.scale(1.0 / (2.0 * m)));
    Ok(LandauSplit {
        hamiltonian,
        h0,
        spin: spin_term(b, e, m, hbar)?,
        nabla_a: nabla(&potential)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(k: usize) -> PhaseSpacePolynomial {
        PhaseSpacePolynomial::q(1, k)
    }

    fn p(k: usize) -> PhaseSpacePolynomial {
        PhaseSpacePolynomial::p(1, k)
    }

    #[test]
    fn canonical_pair() {
        let hbar = 0.7;
        let qp = moyal_star(&q(0), &p(0), hbar);
        let want = &q(0).mul(&p(0)) + &PhaseSpacePolynomial::constant(1, Complex64::new(0.0, hbar / 2.0));
        assert!(qp.approx_eq(&want, 1e-15));
        let comm = &qp - &moyal_star(&p(0), &q(0), hbar);
        assert!(comm.approx_eq(&PhaseSpacePolynomial::constant(1, Complex64::new(0.0, hbar)), 1e-15));
        let one = PhaseSpacePolynomial::constant(1, 1.0);
        assert_eq!(moyal_star(&qp, &one, hbar), qp);
    }

    #[test]
    fn display_and_json() {
        let f = &q(0).mul(&q(0)).scale(2.0) - &p(0);
        assert_eq!(f.to_string(), "-p1 + 2*q1^2");
        assert_eq!(f.to_json(), r#"{"p1":[-1.0,0.0],"q1^2":[2.0,0.0]}"#);
        let g = PhaseSpacePolynomial::monomial(2, vec![2, 0, 0, 1], 1.0);
        assert_eq!(g.to_string(), "q1^2 p2");
    }

    #[test]
    fn z_field_spin_term() {
        let (b, e, m, hbar) = (1.5, 0.8, 2.0, 1.1);
        let split = landau_split([0.0, 0.0, b], e, m, hbar).unwrap();
        let omega = e * b / m;
        let want = Multivector::blade(&cl3(), 0b011, Complex64::new(0.0, -hbar * omega / 2.0));
        assert!(split.spin.approx_eq(&want, 1e-15));
        assert!(split.residual().unwrap() < 1e-12);
        let nab = split.nabla_a.to_multivector().unwrap();
        assert!(nab.approx_eq(&basis_bivector(2).scale(b), 1e-15));
    }

    #[test]
    fn zero_field() {
        let split = landau_split([0.0; 3], 1.0, 2.0, 1.0).unwrap();
        assert!(split.spin.is_zero());
        let mut p2 = PhaseSpacePolynomial::zero(3);
        for i in 0..3 {
            p2 = &p2 + &PhaseSpacePolynomial::p(3, i).mul(&PhaseSpacePolynomial::p(3, i));
        }
        assert!(split.h0.coefficient(0).approx_eq(&p2.scale(0.25), 1e-15));
        assert_eq!(landau_split([0.0; 3], 1.0, 0.0, 1.0).unwrap_err(), Error::ZeroMass);
    }
}

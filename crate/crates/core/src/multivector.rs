//! Sparse Grassmann multivectors.
//!
//! A blade is stored as a bitmask over the generators of its [`Signature`]
//! (bit `i` set means generator `i` is present) and always in ascending
//! generator order. The sign of any reordering lives in the coefficient.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::error::{Error, Result};
use crate::format::format_coefficient;
use crate::signature::Signature;
use crate::{DEFAULT_TOLERANCE, PRUNE_THRESHOLD};

/// Parity of the number of transpositions needed to sort the concatenation
/// of blade `a` followed by blade `b`.
#[inline]
pub fn reorder_parity(a: u32, b: u32) -> u32 {
    let mut a = a >> 1;
    let mut swaps = 0;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    swaps & 1
}

#[inline]
pub(crate) fn parity_sign(parity: u32) -> f64 {
    if parity & 1 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// Sign of `a ∧ b` relative to the canonical blade `a | b`, or `None` when
/// the blades share a generator.
#[inline]
pub fn wedge_sign(a: u32, b: u32) -> Option<f64> {
    if a & b != 0 {
        None
    } else {
        Some(parity_sign(reorder_parity(a, b)))
    }
}

/// Sign picked up by the left derivative with respect to generator `i`
/// (generator anticommuted to the front).
#[inline]
pub(crate) fn left_derivative_sign(blade: u32, i: usize) -> f64 {
    parity_sign((blade & ((1u32 << i) - 1)).count_ones())
}

/// Sign picked up by the right derivative (generator anticommuted to the back).
#[inline]
pub(crate) fn right_derivative_sign(blade: u32, i: usize) -> f64 {
    parity_sign(blade.checked_shr(i as u32 + 1).unwrap_or(0).count_ones())
}

/// `(-1)^{k(k-1)/2}` for a blade of grade `k`.
#[inline]
pub fn reversion_sign(grade: u32) -> f64 {
    if (grade / 2) % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}

#[derive(Clone, Debug)]
pub struct Multivector {
    sig: Arc<Signature>,
    terms: BTreeMap<u32, Complex64>,
}

impl PartialEq for Multivector {
    fn eq(&self, other: &Self) -> bool {
        self.sig == other.sig && self.terms == other.terms
    }
}

impl Multivector {
    pub fn zero(sig: &Arc<Signature>) -> Self {
        Self {
            sig: sig.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(sig: &Arc<Signature>, c: impl Into<Complex64>) -> Self {
        Self::blade(sig, 0, c)
    }

    pub fn one(sig: &Arc<Signature>) -> Self {
        Self::scalar(sig, 1.0)
    }

    pub fn blade(sig: &Arc<Signature>, mask: u32, c: impl Into<Complex64>) -> Self {
        debug_assert!(mask & !sig.full_mask() == 0, "blade outside signature");
        let mut mv = Self::zero(sig);
        mv.add_term(mask, c.into());
        mv
    }

    /// Generator `i` as a grade-1 multivector.
    pub fn generator(sig: &Arc<Signature>, i: usize) -> Result<Self> {
        sig.check_index(i)?;
        Ok(Self::blade(sig, 1 << i, 1.0))
    }

    /// Generator by label, e.g. `s2'`.
    pub fn named(sig: &Arc<Signature>, label: &str) -> Result<Self> {
        Self::generator(sig, sig.index_of(label)?)
    }

    /// Real linear combination of the first `coeffs.len()` generators.
    pub fn vector(sig: &Arc<Signature>, coeffs: &[f64]) -> Result<Self> {
        let mut mv = Self::zero(sig);
        for (i, &c) in coeffs.iter().enumerate() {
            sig.check_index(i)?;
            mv.add_term(1 << i, c.into());
        }
        Ok(mv)
    }

    pub fn from_terms<I>(sig: &Arc<Signature>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, Complex64)>,
    {
        let mut mv = Self::zero(sig);
        for (mask, c) in terms {
            if mask & !sig.full_mask() != 0 {
                return Err(Error::MalformedBlade(format!("{mask:#b}")));
            }
            mv.add_term(mask, c);
        }
        Ok(mv)
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn same_signature(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.sig, &other.sig) || self.sig == other.sig {
            Ok(())
        } else {
            Err(Error::SignatureMismatch)
        }
    }

    /// Accumulates `c` onto blade `mask`, dropping it if the result falls
    /// below the prune threshold.
    pub(crate) fn add_term(&mut self, mask: u32, c: Complex64) {
        let entry = self.terms.entry(mask).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if entry.norm() < PRUNE_THRESHOLD {
            self.terms.remove(&mask);
        }
    }

    pub fn coefficient(&self, mask: u32) -> Complex64 {
        self.terms.get(&mask).copied().unwrap_or_default()
    }

    pub fn scalar_part(&self) -> Complex64 {
        self.coefficient(0)
    }

    /// Terms in ascending bitmask order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, Complex64)> + '_ {
        self.terms.iter().map(|(&m, &c)| (m, c))
    }

    /// Terms sorted by `(grade, bitmask)`, the order used for printing.
    pub fn canonical_terms(&self) -> Vec<(u32, Complex64)> {
        let mut v: Vec<_> = self.terms().collect();
        v.sort_by_key(|&(m, _)| (m.count_ones(), m));
        v
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Union of all generators appearing in any term.
    pub fn support(&self) -> u32 {
        self.terms.keys().fold(0, |acc, &m| acc | m)
    }

    pub fn max_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient difference; `INFINITY` across signatures.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.same_signature(other).is_err() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for (&m, &c) in &self.terms {
            worst = worst.max((c - other.coefficient(m)).norm());
        }
        for (&m, &c) in &other.terms {
            if !self.terms.contains_key(&m) {
                worst = worst.max(c.norm());
            }
        }
        worst
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_signature(other)?;
        let mut out = self.clone();
        for (&m, &c) in &other.terms {
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> Self {
        let c = c.into();
        let mut out = Self::zero(&self.sig);
        for (&m, &v) in &self.terms {
            out.add_term(m, v * c);
        }
        out
    }

    pub fn map_coefficients(&self, f: impl Fn(u32, Complex64) -> Complex64) -> Self {
        let mut out = Self::zero(&self.sig);
        for (&m, &v) in &self.terms {
            out.add_term(m, f(m, v));
        }
        out
    }

    /// Exterior (Grassmann) product.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.same_signature(other)?;
        let mut out = Self::zero(&self.sig);
        for (&a, &x) in &self.terms {
            for (&b, &y) in &other.terms {
                if let Some(s) = wedge_sign(a, b) {
                    out.add_term(a | b, x * y * s);
                }
            }
        }
        Ok(out)
    }

    /// `⟨A⟩_k`. Out-of-range grades give zero.
    pub fn grade_project(&self, k: usize) -> Self {
        self.filter(|m| m.count_ones() as usize == k)
    }

    pub fn even_part(&self) -> Self {
        self.filter(|m| m.count_ones() % 2 == 0)
    }

    pub fn odd_part(&self) -> Self {
        self.filter(|m| m.count_ones() % 2 == 1)
    }

    fn filter(&self, keep: impl Fn(u32) -> bool) -> Self {
        Self {
            sig: self.sig.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(&m, _)| keep(m))
                .map(|(&m, &c)| (m, c))
                .collect(),
        }
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|m| m.count_ones() % 2 == 0)
    }

    /// The single grade present, if the multivector is homogeneous. Zero is
    /// homogeneous of every grade and reports `None`.
    pub fn homogeneous_grade(&self) -> Option<usize> {
        let mut grades = self.terms.keys().map(|m| m.count_ones() as usize);
        let first = grades.next()?;
        grades.all(|g| g == first).then_some(first)
    }

    /// Reversion (the bar involution): reverses generator order and
    /// complex-conjugates the coefficients.
    pub fn reversion(&self) -> Self {
        self.map_coefficients(|m, c| c.conj() * reversion_sign(m.count_ones()))
    }

    /// Grade involution `(-1)^k` on grade-k blades, coefficients untouched.
    pub fn grade_involution(&self) -> Self {
        self.map_coefficients(|m, c| c * parity_sign(m.count_ones()))
    }

    pub fn conj(&self) -> Self {
        self.map_coefficients(|_, c| c.conj())
    }

    /// `∂⃗/∂σ_i`: anticommute σ_i to the front, then delete it.
    pub fn left_derivative(&self, i: usize) -> Result<Self> {
        self.sig.check_index(i)?;
        let bit = 1u32 << i;
        let mut out = Self::zero(&self.sig);
        for (&m, &c) in &self.terms {
            if m & bit != 0 {
                out.add_term(m ^ bit, c * left_derivative_sign(m, i));
            }
        }
        Ok(out)
    }

    /// `∂⃖/∂σ_i`: anticommute σ_i to the back, then delete it.
    pub fn right_derivative(&self, i: usize) -> Result<Self> {
        self.sig.check_index(i)?;
        let bit = 1u32 << i;
        let mut out = Self::zero(&self.sig);
        for (&m, &c) in &self.terms {
            if m & bit != 0 {
                out.add_term(m ^ bit, c * right_derivative_sign(m, i));
            }
        }
        Ok(out)
    }

    /// `bar(A) = A` within `tol`.
    pub fn is_real_within(&self, tol: f64) -> bool {
        self.reversion().approx_eq(self, tol)
    }

    pub fn is_real(&self) -> bool {
        self.is_real_within(DEFAULT_TOLERANCE)
    }

    /// True when every coefficient has negligible imaginary part.
    pub fn has_real_coefficients(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.im.abs() <= tol)
    }

    /// JSON object mapping blade names to `[re, im]`, canonical order.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("multivector serializes")
    }

    pub fn from_json(sig: &Arc<Signature>, text: &str) -> Result<Self> {
        let raw: BTreeMap<String, [f64; 2]> =
            serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
        let mut mv = Self::zero(sig);
        for (name, [re, im]) in raw {
            let (sign, mask) = sig.parse_blade(&name)?;
            // exact insertion: JSON round trips must not re-prune or re-sum
            let c = Complex64::new(re, im) * sign;
            if mv.terms.insert(mask, c).is_some() {
                return Err(Error::Json(format!("blade `{name}` listed twice")));
            }
        }
        Ok(mv)
    }
}

impl Serialize for Multivector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self.canonical_terms();
        let mut map = serializer.serialize_map(Some(terms.len()))?;
        for (m, c) in terms {
            map.serialize_entry(&self.sig.blade_name(m), &[c.re, c.im])?;
        }
        map.end()
    }
}

impl fmt::Display for Multivector {
    /// Canonical form: terms sorted by `(grade, bitmask)`, coefficients with
    /// 12 significant digits, unit coefficients elided.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.canonical_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let term = format_term(&self.sig.blade_name(m), c);
            match (k, term.strip_prefix('-')) {
                (0, _) => write!(f, "{term}")?,
                (_, Some(rest)) => write!(f, " - {rest}")?,
                (_, None) => write!(f, " + {term}")?,
            }
        }
        Ok(())
    }
}

pub(crate) fn format_term(blade: &str, c: Complex64) -> String {
    let coef = format_coefficient(c);
    if blade.is_empty() {
        return coef;
    }
    match coef.as_str() {
        "1" => blade.to_string(),
        "-1" => format!("-{blade}"),
        _ => format!("{coef}*{blade}"),
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale(-1.0)
    }
}

impl Neg for Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        -&self
    }
}

/// Panics on signature mismatch; use [`Multivector::try_add`] otherwise.
impl Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        self.try_add(rhs).expect("signature mismatch in multivector addition")
    }
}

impl Add for Multivector {
    type Output = Multivector;
    fn add(self, rhs: Multivector) -> Multivector {
        &self + &rhs
    }
}

impl AddAssign<&Multivector> for Multivector {
    fn add_assign(&mut self, rhs: &Multivector) {
        self.same_signature(rhs)
            .expect("signature mismatch in multivector addition");
        for (&m, &c) in &rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        self.try_sub(rhs)
            .expect("signature mismatch in multivector subtraction")
    }
}

impl Sub for Multivector {
    type Output = Multivector;
    fn sub(self, rhs: Multivector) -> Multivector {
        &self - &rhs
    }
}

impl Mul<Complex64> for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Complex64) -> Multivector {
        self.scale(rhs)
    }
}

impl Mul<f64> for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: f64) -> Multivector {
        self.scale(rhs)
    }
}

impl Mul<Complex64> for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Complex64) -> Multivector {
        self.scale(rhs)
    }
}

impl Mul<f64> for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: f64) -> Multivector {
        self.scale(rhs)
    }
}

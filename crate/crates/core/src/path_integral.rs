//! Fermionic Green's functions and the discretized propagator.
//!
//! Green's functions live in a six-generator frame: `s1 s2 s3` are the
//! final-time set `σ⃗_t` (metric 1, so star products act on them) and
//! `s1' s2' s3'` the initial-time set `σ⃗_{t0}` (inert). Integral forms are
//! evaluated in a twelve-generator work signature that adds the
//! integration set `σ⃗'` and a spare set for composition.

use std::sync::{Arc, LazyLock};

use crate::berezin::{
    berezin_integrate, delta_function, relabel, substitute, GeneratorSet,
};
use crate::error::{Error, Result};
use crate::multivector::Multivector;
use crate::signature::{cl3, Signature};
use crate::spin::SpinHamiltonian;
use crate::star::{clifford_star, exp_wedge};
use crate::DEFAULT_TOLERANCE;

static FRAME: LazyLock<Arc<Signature>> =
    LazyLock::new(|| Signature::replicated(3, 2).expect("six generators"));
static WORK: LazyLock<Arc<Signature>> =
    LazyLock::new(|| Signature::replicated(3, 4).expect("twelve generators"));

/// Tolerance for the discretized propagator's two evaluation routes.
pub const ROUTE_TOLERANCE: f64 = 1e-9;

/// The six-generator signature of Green's functions.
pub fn green_frame() -> Arc<Signature> {
    FRAME.clone()
}

fn set(sig: &Arc<Signature>, level: usize) -> GeneratorSet {
    GeneratorSet::replica(sig, level).expect("replica exists")
}

fn pair(sig: &Arc<Signature>, a: &GeneratorSet, b: &GeneratorSet) -> GeneratorSet {
    let indices = a.indices().iter().chain(b.indices()).copied().collect();
    GeneratorSet::new(sig, indices).expect("disjoint sets")
}

/// `σ⃗_t` in the Green frame.
pub fn final_set() -> GeneratorSet {
    set(&FRAME, 0)
}

/// `σ⃗_{t0}` in the Green frame.
pub fn initial_set() -> GeneratorSet {
    set(&FRAME, 1)
}

fn cl3_set() -> GeneratorSet {
    GeneratorSet::all(&cl3())
}

/// Frame multivector moved onto the sets `(t, t0)` of another signature.
fn from_frame(g: &Multivector, t: &GeneratorSet, t0: &GeneratorSet) -> Result<Multivector> {
    let frame = pair(&FRAME, &final_set(), &initial_set());
    relabel(g, &frame, &pair(t.signature(), t, t0))
}

fn to_frame(g: &Multivector, t: &GeneratorSet, t0: &GeneratorSet) -> Result<Multivector> {
    let frame = pair(&FRAME, &final_set(), &initial_set());
    relabel(g, &pair(t.signature(), t, t0), &frame)
}

fn check_frame(g: &Multivector) -> Result<()> {
    if g.signature() != &*FRAME {
        return Err(Error::SignatureMismatch);
    }
    Ok(())
}

/// The star exponential must be even for the Grassmann measure to commute
/// with it.
fn even_exponential(h: &SpinHamiltonian, dt: f64) -> Result<Multivector> {
    if !h.signature().is_euclidean3() {
        return Err(Error::NotEuclidean3);
    }
    if !h.times_unit(h.multivector()).is_even() {
        return Err(Error::OddPropagator);
    }
    Ok(h.star_exponential(dt))
}

/// `G = Exp(H(σ⃗_t)Δt) ⋆ δ³(σ⃗_t − σ⃗_{t0})`.
pub fn greens_function_star_delta(h: &SpinHamiltonian, dt: f64) -> Result<Multivector> {
    let e = relabel(&even_exponential(h, dt)?, &cl3_set(), &final_set())?;
    clifford_star(&e, &delta_function(&final_set(), &initial_set())?)
}

/// `G = −∫d³σ' Exp(H(σ⃗')Δt) e^{σ⃗_tσ⃗' + σ⃗'σ⃗_{t0} + σ⃗_{t0}σ⃗_t}`.
pub fn greens_function_integral(h: &SpinHamiltonian, dt: f64) -> Result<Multivector> {
    let (t, t0, sp) = (set(&WORK, 0), set(&WORK, 1), set(&WORK, 2));
    let e = relabel(&even_exponential(h, dt)?, &cl3_set(), &sp)?;
    let kernel = exp_wedge(&(t.dot(&sp)? + sp.dot(&t0)? + t0.dot(&t)?))?;
    let g = -berezin_integrate(&e.wedge(&kernel)?, &sp)?;
    to_frame(&g, &t, &t0)
}

/// Green's function from the star-times-delta construction, checked
/// against the integral form.
pub fn greens_function_delta_form(h: &SpinHamiltonian, dt: f64) -> Result<Multivector> {
    let direct = greens_function_star_delta(h, dt)?;
    let integral = greens_function_integral(h, dt)?;
    let gap = direct.max_abs_diff(&integral);
    if gap > DEFAULT_TOLERANCE {
        return Err(Error::RouteMismatch(gap));
    }
    Ok(direct)
}

/// `G = ∫d³σ' Exp(H(σ⃗_t − σ⃗')Δt) e^{σ⃗'(σ⃗_t − σ⃗_{t0})}`.
pub fn greens_function_fourier_form(h: &SpinHamiltonian, dt: f64) -> Result<Multivector> {
    let (t, t0, sp) = (set(&WORK, 0), set(&WORK, 1), set(&WORK, 2));
    let e = even_exponential(h, dt)?;
    let images: Vec<Multivector> = (0..3).map(|k| t.generator(k) - sp.generator(k)).collect();
    let shifted = substitute(&e, &cl3_set(), &images, &WORK)?;
    let kernel = exp_wedge(&(sp.dot(&t)? - sp.dot(&t0)?))?;
    let g = berezin_integrate(&shifted.wedge(&kernel)?, &sp)?;
    to_frame(&g, &t, &t0)
}

/// `ψ(σ⃗_t) = ∫d³σ_{t0} G ψ(σ⃗_{t0})` for frame multivectors.
pub fn propagate(g: &Multivector, psi: &Multivector) -> Result<Multivector> {
    check_frame(g)?;
    check_frame(psi)?;
    if psi.support() & !initial_set().mask() != 0 {
        return Err(Error::OutsideSubstitution);
    }
    berezin_integrate(&g.wedge(psi)?, &initial_set())
}

/// [`propagate`] for a wave function on ℂℓ(3).
pub fn propagate_state(g: &Multivector, psi: &Multivector) -> Result<Multivector> {
    let at_t0 = relabel(psi, &cl3_set(), &initial_set())?;
    relabel(&propagate(g, &at_t0)?, &final_set(), &cl3_set())
}

/// `G(t₂;t₀) = ∫d³σ₁ G(t₂;t₁) G(t₁;t₀)`.
pub fn compose_propagators(g21: &Multivector, g10: &Multivector) -> Result<Multivector> {
    check_frame(g21)?;
    check_frame(g10)?;
    let (t, t0, mid) = (set(&WORK, 0), set(&WORK, 1), set(&WORK, 3));
    let later = from_frame(g21, &t, &mid)?;
    let earlier = from_frame(g10, &mid, &t0)?;
    to_frame(&berezin_integrate(&later.wedge(&earlier)?, &mid)?, &t, &t0)
}

/// `N + 1` generator triples `σ⃗_0 = σ⃗_{t0}, σ⃗_1, …, σ⃗_N = σ⃗_t`.
#[derive(Clone, Debug)]
pub struct SliceLattice {
    sig: Arc<Signature>,
    sets: Vec<GeneratorSet>,
}

impl SliceLattice {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoSlices);
        }
        let total = 3 * (n + 1);
        if total > crate::MAX_GENERATORS {
            return Err(Error::CapacityExceeded(total));
        }
        let sig = Signature::replicated(3, n + 1)?;
        let sets = (0..=n).map(|k| set(&sig, k)).collect();
        Ok(Self { sig, sets })
    }

    pub fn slices(&self) -> usize {
        self.sets.len() - 1
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn set(&self, k: usize) -> &GeneratorSet {
        &self.sets[k]
    }

    /// `∫d³σ_{N−1} ⋯ d³σ_1 G(σ_N,σ_{N−1}) ⋯ G(σ_1,σ_0)` for a single-step
    /// kernel, integrating the earliest intermediate set first.
    pub fn chain(&self, kernel: &Multivector) -> Result<Multivector> {
        check_frame(kernel)?;
        let mut acc = from_frame(kernel, &self.sets[1], &self.sets[0])?;
        for k in 2..self.sets.len() {
            let step = from_frame(kernel, &self.sets[k], &self.sets[k - 1])?;
            acc = berezin_integrate(&step.wedge(&acc)?, &self.sets[k - 1])?;
        }
        to_frame(&acc, &self.sets[self.slices()], &self.sets[0])
    }
}

/// `[Exp(Ht/N)]^{N⋆}`, evaluated slice by slice through Berezin integrals
/// on a [`SliceLattice`] and checked against the N-fold star product.
pub fn discretized_propagator(h: &SpinHamiltonian, t: f64, n: usize) -> Result<Multivector> {
    let lattice = SliceLattice::new(n)?;
    let kernel = greens_function_integral(h, t / n as f64)?;
    let g = lattice.chain(&kernel)?;
    let from_kernel = propagate_state(&g, &Multivector::one(&cl3()))?;
    let gap = from_kernel.max_abs_diff(&h.sliced_exponential(t, n));
    if gap > ROUTE_TOLERANCE {
        return Err(Error::RouteMismatch(gap));
    }
    Ok(from_kernel)
}

/// `(N, max |G_N − Exp(Ht)|)` for `N = 1..=max_n`.
pub fn convergence_table(h: &SpinHamiltonian, t: f64, max_n: usize) -> Result<Vec<(usize, f64)>> {
    let exact = h.star_exponential(t);
    (1..=max_n)
        .map(|n| Ok((n, discretized_propagator(h, t, n)?.max_abs_diff(&exact))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn hz() -> SpinHamiltonian {
        SpinHamiltonian::z_direction(1.3).unwrap()
    }

    #[test]
    fn zero_time_is_delta() {
        let delta = delta_function(&final_set(), &initial_set()).unwrap();
        assert_eq!(greens_function_delta_form(&hz(), 0.0).unwrap(), delta);
        assert!(greens_function_fourier_form(&hz(), 0.0)
            .unwrap()
            .approx_eq(&delta, 1e-15));
    }

    #[test]
    fn forms_agree() {
        for dt in [0.1, 0.7, 2.3] {
            let a = greens_function_delta_form(&hz(), dt).unwrap();
            let b = greens_function_fourier_form(&hz(), dt).unwrap();
            assert!(a.approx_eq(&b, 1e-12), "dt = {dt}");
        }
    }

    #[test]
    fn eigenphase_through_kernel() {
        let h = hz();
        let (plus, _) = h.projectors();
        let dt = 0.9;
        let g = greens_function_delta_form(&h, dt).unwrap();
        let out = propagate_state(&g, &plus).unwrap();
        let phase = Complex64::new(0.0, -h.abs_energy() * dt).exp();
        assert!(out.approx_eq(&plus.scale(phase), 1e-14));
    }

    #[test]
    fn semigroup() {
        let h = hz();
        let g = compose_propagators(
            &greens_function_delta_form(&h, 0.3).unwrap(),
            &greens_function_delta_form(&h, 0.5).unwrap(),
        )
        .unwrap();
        assert!(g.approx_eq(&greens_function_delta_form(&h, 0.8).unwrap(), 1e-14));
    }

    #[test]
    fn odd_exponential_is_rejected() {
        let h = SpinHamiltonian::new(Multivector::generator(&cl3(), 0).unwrap()).unwrap();
        assert_eq!(greens_function_delta_form(&h, 0.2).unwrap_err(), Error::OddPropagator);
        let real = SpinHamiltonian::real_z_direction(1.0).unwrap();
        assert!(greens_function_delta_form(&real, 0.2).is_ok());
    }

    #[test]
    fn slices() {
        let h = hz();
        for n in [1, 2, 3] {
            let g = discretized_propagator(&h, 1.1, n).unwrap();
            assert!(g.approx_eq(&h.star_exponential(1.1), 1e-12));
        }
        assert_eq!(SliceLattice::new(0).unwrap_err(), Error::NoSlices);
        assert_eq!(SliceLattice::new(8).unwrap_err(), Error::CapacityExceeded(27));
    }
}

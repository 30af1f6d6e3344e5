//! Verification suites: each identity is evaluated numerically and
//! reported as a list of checks with their worst error and tolerance.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64;
use rand::Rng;

use crate::berezin::{
    berezin_integrate, delta_function, gaussian_pair_integral, grassmann_fourier,
    inverse_grassmann_fourier, linear_substitution, star_under_integral, GeneratorSet,
};
use crate::error::Result;
use crate::moyal::{landau_split, moyal_star, PhaseSpacePolynomial};
use crate::multivector::Multivector;
use crate::path_integral::{
    compose_propagators, discretized_propagator, greens_function_delta_form,
    greens_function_fourier_form, propagate_state,
};
use crate::sampling::{self, SampleRng};
use crate::signature::{cl2, cl3, Signature};
use crate::spin::{
    complex_to_real, even_cl3_to_cl2, holomorphic_decomposition, ladder_operators,
    lifted_evolution, primed_ladder_operators, real_ladder, rotor_between, scalar_product,
    wigner_eigenvalue_residual, wigner_from_spinor, LadderFlavor, Ladders, OperatorLift,
    SpinHamiltonian, Spinor,
};
use crate::star::{
    basis_bivector, clifford_star, clifford_star_integral_form, exp_wedge, quaternion_units,
    star_anticommutator, star_chain, star_commutator,
};
use crate::DEFAULT_TOLERANCE;

/// Environment variable overriding the default comparison tolerance.
pub const TOLERANCE_ENV: &str = "STARSPIN_TOL";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Used wherever an identity has no tighter or looser stated bound.
    pub default: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            default: DEFAULT_TOLERANCE,
        }
    }
}

impl Tolerances {
    pub fn from_env() -> Self {
        let default = std::env::var(TOLERANCE_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<f64>().ok())
            .filter(|v| v.is_finite() && *v > 0.0)
            .unwrap_or(DEFAULT_TOLERANCE);
        Self { default }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub error: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.error.is_finite() && self.error <= self.tolerance
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub id: usize,
    pub title: &'static str,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    /// Largest error relative to its tolerance.
    pub fn worst(&self) -> Option<&Check> {
        self.checks
            .iter()
            .max_by(|a, b| (a.error / a.tolerance).total_cmp(&(b.error / b.tolerance)))
    }

    pub fn summary_line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let worst = self
            .worst()
            .map(|c| format!("max error {:.2e} (tol {:.0e}) in {}", c.error, c.tolerance, c.name))
            .unwrap_or_else(|| "no checks".into());
        format!(
            "[{status}] {:2} {}: {} checks, {worst}",
            self.id,
            self.title,
            self.checks.len()
        )
    }
}

pub const SUITES: [(usize, &str); 15] = [
    (1, "basis product law"),
    (2, "quaternion relations"),
    (3, "integral form of the Clifford product"),
    (4, "Wigner projectors"),
    (5, "star exponential"),
    (6, "generator precession"),
    (7, "ladder operators"),
    (8, "Landau splitting"),
    (9, "Berezin integral, Fourier transform and delta function"),
    (10, "Grassmannian Gauss integral"),
    (11, "operator lift"),
    (12, "scalar product"),
    (13, "spinors and Wigner functions"),
    (14, "algebra isomorphisms"),
    (15, "discretized path integral"),
];

struct Recorder {
    checks: Vec<Check>,
}

impl Recorder {
    fn check(&mut self, name: impl Into<String>, error: f64, tolerance: f64) {
        self.checks.push(Check {
            name: name.into(),
            error,
            tolerance,
        });
    }

    fn close(&mut self, name: impl Into<String>, got: &Multivector, want: &Multivector, tol: f64) {
        let err = if got.same_signature(want).is_ok() {
            got.max_abs_diff(want)
        } else {
            f64::INFINITY
        };
        self.check(name, err, tol);
    }

    /// Keeps the worst error over a family under one name.
    fn worst(&mut self, name: impl Into<String>, errors: impl IntoIterator<Item = f64>, tol: f64) {
        let e = errors.into_iter().fold(0.0, |a: f64, b| if b.is_nan() { f64::INFINITY } else { a.max(b) });
        self.check(name, e, tol);
    }

    fn holds(&mut self, name: impl Into<String>, ok: bool) {
        self.check(name, if ok { 0.0 } else { 1.0 }, 0.0);
    }
}

pub fn run_suite(id: usize, tol: &Tolerances) -> SuiteReport {
    let title = SUITES
        .iter()
        .find(|(k, _)| *k == id)
        .map(|(_, t)| *t)
        .unwrap_or("unknown suite");
    let mut rec = Recorder { checks: Vec::new() };
    let t = tol.default;
    let outcome = match id {
        1 => basis_products(&mut rec),
        2 => quaternions(&mut rec),
        3 => integral_form(&mut rec, t),
        4 => projectors(&mut rec, t),
        5 => star_exponential(&mut rec, t),
        6 => precession(&mut rec, t),
        7 => ladders(&mut rec),
        8 => landau(&mut rec, t),
        9 => berezin(&mut rec),
        10 => gaussian(&mut rec),
        11 => lift(&mut rec),
        12 => scalar_products(&mut rec, t),
        13 => spinors(&mut rec, t),
        14 => isomorphisms(&mut rec),
        15 => path_integral(&mut rec, t),
        _ => {
            rec.holds(format!("suite {id} exists"), false);
            Ok(())
        }
    };
    if let Err(e) = outcome {
        rec.check(format!("evaluation error: {e}"), f64::INFINITY, 0.0);
    }
    SuiteReport {
        id,
        title,
        checks: rec.checks,
    }
}

pub fn run_all(tol: &Tolerances) -> Vec<SuiteReport> {
    SUITES.iter().map(|(id, _)| run_suite(*id, tol)).collect()
}

fn s(i: usize) -> Multivector {
    Multivector::generator(&cl3(), i).expect("index < 3")
}

fn one() -> Multivector {
    Multivector::one(&cl3())
}

fn scalar(c: impl Into<Complex64>) -> Multivector {
    Multivector::scalar(&cl3(), c)
}

fn i() -> Complex64 {
    Complex64::i()
}

fn sample_times(n: usize, upper: f64) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| upper * k as f64 / (n - 1) as f64)
}

fn basis_products(rec: &mut Recorder) -> Result<()> {
    let sig = cl3();
    for a in 0..3 {
        for b in 0..3 {
            let want = match a.cmp(&b) {
                std::cmp::Ordering::Equal => one(),
                std::cmp::Ordering::Less => Multivector::blade(&sig, 1 << a | 1 << b, 1.0),
                std::cmp::Ordering::Greater => Multivector::blade(&sig, 1 << a | 1 << b, -1.0),
            };
            rec.close(format!("s{}*s{}", a + 1, b + 1), &clifford_star(&s(a), &s(b))?, &want, 1e-12);
        }
    }
    Ok(())
}

fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

fn quaternions(rec: &mut Recorder) -> Result<()> {
    let [qi, qj, qk] = quaternion_units();
    let minus_one = -one();
    rec.close("i*i", &clifford_star(&qi, &qi)?, &minus_one, 1e-12);
    rec.close("j*j", &clifford_star(&qj, &qj)?, &minus_one, 1e-12);
    rec.close("k*k", &clifford_star(&qk, &qk)?, &minus_one, 1e-12);
    rec.close("i*j*k", &star_chain(&[&qi, &qj, &qk])?, &minus_one, 1e-12);
    let b: Vec<Multivector> = (0..3).map(basis_bivector).collect();
    let mut anti = Vec::new();
    let mut comm = Vec::new();
    for x in 0..3 {
        for y in 0..3 {
            let delta = if x == y { -1.0 } else { 0.0 };
            anti.push(star_anticommutator(&b[x], &b[y])?.scale(0.5).max_abs_diff(&scalar(delta)));
            let mut want = Multivector::zero(&cl3());
            for (z, bz) in b.iter().enumerate() {
                want += &bz.scale(-levi_civita(x, y, z));
            }
            comm.push(star_commutator(&b[x], &b[y])?.scale(0.5).max_abs_diff(&want));
        }
    }
    rec.worst("{B_i,B_j}/2 = -delta_ij", anti, 1e-12);
    rec.worst("[B_i,B_j]/2 = -eps_ijk B_k", comm, 1e-12);
    Ok(())
}

fn integral_form(rec: &mut Recorder, tol: f64) -> Result<()> {
    let mut rng = sampling::rng(3);
    let sig = cl3();
    let mut errs = Vec::new();
    for _ in 0..200 {
        let a = sampling::random_multivector(&mut rng, &sig);
        let b = sampling::random_multivector(&mut rng, &sig);
        errs.push(clifford_star_integral_form(&a, &b)?.max_abs_diff(&clifford_star(&a, &b)?));
    }
    rec.worst("200 random pairs", errs, tol);
    rec.close("(s1, s2)", &clifford_star_integral_form(&s(0), &s(1))?, &s(0).wedge(&s(1))?, tol);
    rec.close("(s1, s1)", &clifford_star_integral_form(&s(0), &s(0))?, &one(), tol);
    Ok(())
}

fn projector_checks(rec: &mut Recorder, label: &str, h: &SpinHamiltonian, tol: f64) -> Result<()> {
    let (p, m) = h.projectors();
    let e = h.abs_energy();
    let hm = h.multivector();
    let zero = Multivector::zero(h.signature());
    let errs = [
        clifford_star(&p, &p)?.max_abs_diff(&p),
        clifford_star(&m, &m)?.max_abs_diff(&m),
        clifford_star(&p, &m)?.max_abs_diff(&zero),
        clifford_star(&m, &p)?.max_abs_diff(&zero),
        (&p + &m).max_abs_diff(&Multivector::one(h.signature())),
        clifford_star(hm, &p)?.max_abs_diff(&p.scale(e)),
        clifford_star(hm, &m)?.max_abs_diff(&m.scale(-e)),
        (p.scale(e) - m.scale(e)).max_abs_diff(hm),
    ];
    rec.worst(format!("{label}: projector algebra and eigenvalues"), errs, tol);
    Ok(())
}

fn projectors(rec: &mut Recorder, tol: f64) -> Result<()> {
    let hz = SpinHamiltonian::z_direction(1.3)?;
    rec.check("|E| of Hz = hbar omega/2", (hz.abs_energy() - 0.65).abs(), tol);
    let b3 = s(0).wedge(&s(1))?;
    let (p, m) = hz.projectors();
    rec.close("pi+ = (1 - i s1 s2)/2", &p, &(one() - b3.scale(i())).scale(0.5), tol);
    rec.close("pi- = (1 + i s1 s2)/2", &m, &(one() + b3.scale(i())).scale(0.5), tol);
    projector_checks(rec, "Hz", &hz, tol)?;
    let real = SpinHamiltonian::real_z_direction(1.3)?;
    let (rp, rm) = real.projectors();
    rec.close("real pi+ = (1 + s3)/2", &rp, &(one() + s(2)).scale(0.5), tol);
    rec.close("real pi- = (1 - s3)/2", &rm, &(one() - s(2)).scale(0.5), tol);
    let mut rng = sampling::rng(4);
    for k in 0..20 {
        let h = sampling::random_hamiltonian(&mut rng);
        projector_checks(rec, &format!("random H #{k}"), &h, tol)?;
    }
    Ok(())
}

fn exponential_checks(rec: &mut Recorder, label: &str, h: &SpinHamiltonian, rng: &mut SampleRng, tol: f64) -> Result<()> {
    let e = h.abs_energy();
    let series: Vec<f64> = sample_times(50, TAU / e)
        .map(|t| h.star_exponential(t).max_abs_diff(&h.star_exponential_series(t, 40)))
        .collect();
    rec.worst(format!("{label}: closed form = series of order 40"), series, tol);
    let fd: Vec<f64> = sample_times(50, 2.0 * TAU / e)
        .map(|t| h.star_exponential(t).max_abs_diff(&h.fourier_dirichlet(t)))
        .collect();
    rec.worst(format!("{label}: Fourier-Dirichlet expansion"), fd, tol);
    let mut group = Vec::new();
    for _ in 0..20 {
        let (t1, t2) = (rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let lhs = clifford_star(&h.star_exponential(t1), &h.star_exponential(t2))?;
        group.push(lhs.max_abs_diff(&h.star_exponential(t1 + t2)));
    }
    rec.worst(format!("{label}: Exp(t1)*Exp(t2) = Exp(t1+t2)"), group, tol);
    rec.close(format!("{label}: Exp(0) = 1"), &h.star_exponential(0.0), &Multivector::one(h.signature()), tol);
    let step = 1e-5;
    let mut schr = Vec::new();
    for t in sample_times(10, TAU / e) {
        let deriv = (h.star_exponential(t + step) - h.star_exponential(t - step)).scale(1.0 / (2.0 * step));
        let lhs = h.times_unit(&deriv);
        schr.push(lhs.max_abs_diff(&clifford_star(h.multivector(), &h.star_exponential(t))?));
    }
    rec.worst(format!("{label}: i d/dt Exp = H * Exp"), schr, 1e-8);
    Ok(())
}

fn star_exponential(rec: &mut Recorder, tol: f64) -> Result<()> {
    let mut rng = sampling::rng(5);
    let hz = SpinHamiltonian::z_direction(1.3)?;
    let printed: Vec<f64> = sample_times(50, 10.0)
        .map(|t| {
            let (sn, cs) = (0.65 * t).sin_cos();
            let want = scalar(cs) - s(0).wedge(&s(1)).expect("cl3").scale(sn);
            hz.star_exponential(t).max_abs_diff(&want)
        })
        .collect();
    rec.worst("Hz: Exp = cos(hw t/2) - s1 s2 sin(hw t/2)", printed, tol);
    exponential_checks(rec, "Hz", &hz, &mut rng, tol)?;
    exponential_checks(rec, "real Hz", &SpinHamiltonian::real_z_direction(1.3)?, &mut rng, tol)?;
    for k in 0..3 {
        let h = sampling::random_hamiltonian(&mut rng);
        exponential_checks(rec, &format!("random H #{k}"), &h, &mut rng, tol)?;
    }
    let nfold: Vec<f64> = (1..=6)
        .map(|n| hz.sliced_exponential(2.1, n).max_abs_diff(&hz.star_exponential(2.1)))
        .collect();
    rec.worst("Exp(Ht/N)^N = Exp(Ht)", nfold, tol);
    Ok(())
}

fn precession(rec: &mut Recorder, tol: f64) -> Result<()> {
    let w = 1.3;
    let hz = SpinHamiltonian::z_direction(w)?;
    let (mut e1, mut e2, mut e3) = (Vec::new(), Vec::new(), Vec::new());
    for t in sample_times(50, 3.0 * TAU / w) {
        let (sn, cs) = (w * t).sin_cos();
        e1.push(hz.evolve_generator(0, t)?.max_abs_diff(&(s(0).scale(cs) - s(1).scale(sn))));
        e2.push(hz.evolve_generator(1, t)?.max_abs_diff(&(s(0).scale(sn) + s(1).scale(cs))));
        e3.push(hz.evolve_generator(2, t)?.max_abs_diff(&s(2)));
    }
    rec.worst("s1(t) = s1 cos(wt) - s2 sin(wt)", e1, tol);
    rec.worst("s2(t) = s1 sin(wt) + s2 cos(wt)", e2, tol);
    rec.worst("s3(t) = s3", e3, tol);
    let period = TAU / w;
    let closure: Vec<f64> = (0..3)
        .map(|k| hz.evolve_generator(k, period).map(|x| x.max_abs_diff(&s(k))))
        .collect::<Result<_>>()?;
    rec.worst("period 2 pi/(hbar omega) returns to s_i", closure, 1e-9);
    Ok(())
}

fn ladder_residuals(rec: &mut Recorder, name: &str, l: &Ladders, plus: &Multivector, minus: &Multivector) -> Result<()> {
    let (a, b) = l.residuals(plus, minus)?;
    rec.check(format!("{name}: fbar*pi+*f = pi-"), a, 1e-12);
    rec.check(format!("{name}: f*pi-*fbar = pi+"), b, 1e-12);
    Ok(())
}

fn ladders(rec: &mut Recorder) -> Result<()> {
    let hz = SpinHamiltonian::z_direction(1.0)?;
    let (p, m) = hz.projectors();
    rec.close("s1*pi+*s1 = pi-", &star_chain(&[&s(0), &p, &s(0)])?, &m, 1e-12);
    rec.close("s1*pi-*s1 = pi+", &star_chain(&[&s(0), &m, &s(0)])?, &p, 1e-12);
    let v = ladder_operators(&hz, LadderFlavor::Vector)?;
    rec.close("f = (s1 + i s2)/2", &v.f, &(s(0) + s(1).scale(i())).scale(0.5), 1e-12);
    rec.close("fbar = (s1 - i s2)/2", &v.f_bar, &(s(0) - s(1).scale(i())).scale(0.5), 1e-12);
    ladder_residuals(rec, "vector", &v, &p, &m)?;
    let b = ladder_operators(&hz, LadderFlavor::Bivector)?;
    let (s31, s23) = (s(2).wedge(&s(0))?, s(1).wedge(&s(2))?);
    rec.close("f = (s3 s1 - i s2 s3)/2", &b.f, &(&s31 - &s23.scale(i())).scale(0.5), 1e-12);
    rec.close("fbar = -(s3 s1 + i s2 s3)/2", &b.f_bar, &(&s31 + &s23.scale(i())).scale(-0.5), 1e-12);
    ladder_residuals(rec, "bivector", &b, &p, &m)?;
    for flavor in [LadderFlavor::Vector, LadderFlavor::Bivector] {
        let l = primed_ladder_operators(&hz, flavor)?;
        ladder_residuals(rec, &format!("primed {flavor:?}"), &l, &p, &m)?;
    }
    let real = SpinHamiltonian::real_z_direction(1.0)?;
    let (rp, rm) = real.projectors();
    let rl = real_ladder();
    ladder_residuals(rec, "real algebra", &rl, &rp, &rm)?;
    rec.close("real: f + fbar = s1", &(&rl.f + &rl.f_bar), &s(0), 1e-12);
    for (name, err) in holomorphic_decomposition()?.entries {
        rec.check(format!("holomorphic: {name}"), err, 1e-12);
    }
    let mut rng = sampling::rng(7);
    for k in 0..5 {
        let h = sampling::random_bivector_hamiltonian(&mut rng);
        let (hp, hm) = h.projectors();
        for flavor in [LadderFlavor::Vector, LadderFlavor::Bivector] {
            let l = ladder_operators(&h, flavor)?;
            ladder_residuals(rec, &format!("tilted H #{k} {flavor:?}"), &l, &hp, &hm)?;
        }
    }
    Ok(())
}

/// `Σ_n (iħ/2)^n/n! f Pⁿ g` with `P = Σ_k (∂⃖_{q_k}∂⃗_{p_k} − ∂⃖_{p_k}∂⃗_{q_k})`,
/// applying `P` to a list of factor pairs until every pair vanishes.
pub fn moyal_star_by_iteration(
    f: &PhaseSpacePolynomial,
    g: &PhaseSpacePolynomial,
    hbar: f64,
) -> PhaseSpacePolynomial {
    let d = f.dimension();
    let mut pairs = vec![(f.clone(), g.clone())];
    let mut out = PhaseSpacePolynomial::zero(d);
    let mut weight = Complex64::new(1.0, 0.0);
    let mut n = 0;
    while !pairs.is_empty() {
        for (a, b) in &pairs {
            out = &out + &a.mul(b).scale(weight);
        }
        n += 1;
        weight *= Complex64::new(0.0, hbar / 2.0) / n as f64;
        let mut next = Vec::new();
        for (a, b) in &pairs {
            for k in 0..d {
                let terms = [
                    (a.derivative(k, 1), b.derivative(d + k, 1)),
                    (a.derivative(d + k, 1).scale(-1.0), b.derivative(k, 1)),
                ];
                next.extend(terms.into_iter().filter(|(x, y)| !x.is_zero() && !y.is_zero()));
            }
        }
        pairs = next;
    }
    out
}

fn landau(rec: &mut Recorder, tol: f64) -> Result<()> {
    let hbar = 0.8;
    let q = PhaseSpacePolynomial::q(1, 0);
    let p = PhaseSpacePolynomial::p(1, 0);
    let comm = &moyal_star(&q, &p, hbar) - &moyal_star(&p, &q, hbar);
    let mut agree = Vec::new();
    for (a, b) in [(&q, &p), (&p, &q)] {
        let sq = a.mul(a).mul(b);
        agree.push(moyal_star(&sq, b, hbar).max_abs_diff(&moyal_star_by_iteration(&sq, b, hbar)));
        agree.push(moyal_star(b, &sq, hbar).max_abs_diff(&moyal_star_by_iteration(b, &sq, hbar)));
    }
    rec.worst("Moyal product against operator iteration", agree, tol);
    rec.check(
        "[q, p] = i hbar",
        comm.max_abs_diff(&PhaseSpacePolynomial::constant(1, Complex64::new(0.0, hbar))),
        tol,
    );
    let (b, e, m) = (1.7, 0.6, 1.9);
    let z = landau_split([0.0, 0.0, b], e, m, hbar)?;
    let omega = e * b / m;
    rec.close(
        "z field: H_S = (hbar omega/2i) s1 s2",
        &z.spin,
        &s(0).wedge(&s(1))?.scale(Complex64::new(0.0, -hbar * omega / 2.0)),
        tol,
    );
    let mut rng = sampling::rng(8);
    for k in 0..20 {
        let (bv, e, m, hbar) = sampling::random_landau(&mut rng);
        let split = landau_split(bv, e, m, hbar)?;
        rec.check(format!("#{k}: H - H0 - H_S = 0"), split.residual()?, tol);
        // oracle: H_S from the coefficient form sum eps_ikl (hbar w_i/4i) s_k s_l
        let mut want = Multivector::zero(&cl3());
        for (ii, bi) in bv.iter().enumerate() {
            for kk in 0..3 {
                for ll in 0..3 {
                    let eps = levi_civita(ii, kk, ll);
                    if eps != 0.0 {
                        let c = Complex64::new(0.0, -eps * hbar * e * bi / m / 4.0);
                        want += &s(kk).wedge(&s(ll))?.scale(c);
                    }
                }
            }
        }
        rec.close(format!("#{k}: H_S coefficients"), &split.spin, &want, tol);
        // oracle: bivector part of H is (1/2m) sum_{k<l} [Pi_k, Pi_l] s_k s_l
        let pi: Vec<PhaseSpacePolynomial> = (0..3)
            .map(|a| {
                let (b1, b2) = ((a + 1) % 3, (a + 2) % 3);
                let cross = &PhaseSpacePolynomial::q(3, b2).scale(bv[b1] * 0.5)
                    - &PhaseSpacePolynomial::q(3, b1).scale(bv[b2] * 0.5);
                &PhaseSpacePolynomial::p(3, a) + &cross.scale(e)
            })
            .collect();
        let mut h0 = PhaseSpacePolynomial::zero(3);
        for p in &pi {
            h0 = &h0 + &moyal_star_by_iteration(p, p, hbar);
        }
        let err = split
            .h0
            .coefficient(0)
            .max_abs_diff(&h0.scale(1.0 / (2.0 * m)));
        rec.check(format!("#{k}: H0 by operator iteration"), err, tol);
        let mut errs = Vec::new();
        for a in 0..3 {
            for b in a + 1..3 {
                let comm = &moyal_star_by_iteration(&pi[a], &pi[b], hbar)
                    - &moyal_star_by_iteration(&pi[b], &pi[a], hbar);
                let got = split.hamiltonian.coefficient(1 << a | 1 << b);
                errs.push(got.max_abs_diff(&comm.scale(1.0 / (2.0 * m))));
            }
        }
        rec.worst(format!("#{k}: bivector part from [Pi_k, Pi_l]"), errs, tol);
        let mut nabla_want = Multivector::zero(&cl3());
        for (ii, bi) in bv.iter().enumerate() {
            nabla_want += &basis_bivector(ii).scale(*bi);
        }
        let err = match split.nabla_a.to_multivector() {
            Some(n) => n.max_abs_diff(&nabla_want),
            None => f64::INFINITY,
        };
        rec.check(format!("#{k}: nabla A = sum B_i B_i"), err, tol);
    }
    Ok(())
}

fn blade_of(set: &GeneratorSet, bits: u32) -> Multivector {
    let mut out = Multivector::one(set.signature());
    for k in 0..set.len() {
        if bits >> k & 1 == 1 {
            out = out.wedge(&set.generator(k)).expect("same signature");
        }
    }
    out
}

fn berezin(rec: &mut Recorder) -> Result<()> {
    let tol = 1e-12;
    let sig3 = cl3();
    let all = GeneratorSet::all(&sig3);
    rec.close(
        "int d3s s1 s2 s3 = 1",
        &berezin_integrate(&Multivector::blade(&sig3, 0b111, 1.0), &all)?,
        &one(),
        tol,
    );
    let sig = Signature::replicated(3, 3)?;
    let x = GeneratorSet::replica(&sig, 0)?;
    let y = GeneratorSet::replica(&sig, 1)?;
    let z = GeneratorSet::replica(&sig, 2)?;
    let delta_yx = delta_function(&y, &x)?;
    let mut sift = Vec::new();
    let mut round = Vec::new();
    for bits in 0..8 {
        let f = blade_of(&x, bits);
        sift.push(berezin_integrate(&delta_yx.wedge(&f)?, &x)?.max_abs_diff(&blade_of(&y, bits)));
        let back = inverse_grassmann_fourier(&grassmann_fourier(&f, &x, &y)?, &y, &x)?;
        round.push(back.max_abs_diff(&f));
    }
    rec.worst("sifting on all 8 blades", sift, tol);
    rec.worst("Fourier round trip on all 8 blades", round, tol);
    // F[δ(σ' − σ)](τ) with σ' a parameter
    let f_delta = grassmann_fourier(&delta_function(&z, &x)?, &x, &y)?;
    let want = exp_wedge(&z.dot(&y)?.scale(i()))?;
    rec.close("F(delta) = exp(i s' s)", &f_delta, &want, tol);
    let via_exp = berezin_integrate(&exp_wedge(&(z.dot(&y)? - z.dot(&x)?))?, &z)?;
    rec.close("delta = int d3s'' exp(s''(s' - s))", &via_exp, &delta_yx, tol);
    let via_fourier = berezin_integrate(&exp_wedge(&(z.dot(&x)? - z.dot(&y)?).scale(i()))?, &z)?
        .scale(-i());
    rec.close("delta = -i int d3s'' exp(i s''(s - s'))", &via_fourier, &delta_yx, tol);
    let sig2 = Signature::replicated(2, 2)?;
    let (a, b) = (GeneratorSet::replica(&sig2, 0)?, GeneratorSet::replica(&sig2, 1)?);
    let top = blade_of(&a, 0b11);
    let c = |x: f64| Complex64::new(x, 0.0);
    for (name, m, jac) in [
        ("identity", [c(1.0), c(0.0), c(0.0), c(1.0)], c(1.0)),
        ("swap", [c(0.0), c(1.0), c(1.0), c(0.0)], c(-1.0)),
        ("scale by 1.5", [c(1.5), c(0.0), c(0.0), c(1.5)], c(2.25)),
        ("general", [c(2.0), c(0.5), Complex64::new(0.0, 1.0), c(3.0)], Complex64::new(6.0, -0.5)),
    ] {
        let mat = nalgebra::DMatrix::from_row_slice(2, 2, &m);
        let (sub, j) = linear_substitution(&top, &mat, &a, &b)?;
        let lhs = berezin_integrate(&sub, &b)?.scalar_part();
        let rhs = j * berezin_integrate(&top, &a)?.scalar_part();
        rec.check(format!("substitution {name}: jacobian"), (j - jac).norm(), tol);
        rec.check(format!("substitution {name}: integral"), (lhs - rhs).norm(), tol);
    }
    Ok(())
}

fn gaussian(rec: &mut Recorder) -> Result<()> {
    for n in [2, 4, 6] {
        let g = gaussian_pair_integral(n)?;
        rec.check(format!("N = {n}"), (g.value - 1.0).norm(), 1e-12);
        rec.holds(format!("N = {n} flagged even"), g.even);
    }
    Ok(())
}

fn hat(i: usize, x: &Multivector) -> Result<Multivector> {
    Ok(s(i).wedge(x)? + x.left_derivative(i)?)
}

fn lift(rec: &mut Recorder) -> Result<()> {
    let sig = cl3();
    let mut grid = Vec::new();
    for a in 0..8u32 {
        let am = Multivector::blade(&sig, a, 1.0);
        let l = OperatorLift::new(&am)?;
        for b in 0..8u32 {
            let bm = Multivector::blade(&sig, b, 1.0);
            grid.push(l.apply(&bm)?.max_abs_diff(&clifford_star(&am, &bm)?));
        }
    }
    rec.worst("lift(A)(B) = A*B on the 8x8 basis grid", grid, 1e-12);
    let hz = SpinHamiltonian::z_direction(1.3)?;
    let e = hz.abs_energy();
    let lifted = OperatorLift::new(hz.multivector())?;
    let mut ops = Vec::new();
    for b in 0..8u32 {
        let bm = Multivector::blade(&sig, b, 1.0);
        let printed = hat(0, &hat(1, &bm)?)?.scale(Complex64::new(0.0, -e));
        ops.push(lifted.apply(&bm)?.max_abs_diff(&printed));
        ops.push(clifford_star(hz.multivector(), &bm)?.max_abs_diff(&printed));
    }
    rec.worst("H = -|E| i (s1 + d1)(s2 + d2) on all blades", ops, 1e-12);
    let mut rng = sampling::rng(11);
    let (mut evol, mut unitary) = (Vec::new(), Vec::new());
    for _ in 0..10 {
        let h = sampling::random_hamiltonian(&mut rng);
        let psi = sampling::random_multivector(&mut rng, &sig);
        let norm = scalar_product(&psi, &psi)?;
        for t in [0.0, 0.4, 1.7, 5.2] {
            let star = h.evolve_state(&psi, t)?;
            evol.push(star.max_abs_diff(&lifted_evolution(&psi, &h, t)?));
            unitary.push((scalar_product(&star, &star)? - norm).norm());
        }
    }
    rec.worst("Exp*psi = exp(-i H^ t) psi", evol, 1e-9);
    rec.worst("scalar product preserved in time", unitary, 1e-9);
    Ok(())
}

fn scalar_products(rec: &mut Recorder, tol: f64) -> Result<()> {
    let sig = cl3();
    let b3 = s(0).wedge(&s(1))?;
    let up = (one() - b3.scale(i())).scale(FRAC_1_SQRT_2);
    let down = (one() + b3.scale(i())).scale(FRAC_1_SQRT_2);
    rec.check("<psi+|psi+> = 1", (scalar_product(&up, &up)? - 1.0).norm(), tol);
    rec.check("<psi+|psi-> = 0", scalar_product(&up, &down)?.norm(), tol);
    let hz = SpinHamiltonian::z_direction(1.0)?;
    let (p, _) = hz.projectors();
    rec.close("psi+ = sqrt(2) pi+", &up, &p.scale(2f64.sqrt()), tol);
    let flat = Multivector::from_terms(&sig, (0..8).map(|m| (m, Complex64::new(8f64.sqrt().recip(), 0.0))))?;
    rec.check("uniform real psi has norm 1", (scalar_product(&flat, &flat)? - 1.0).norm(), tol);
    let mut rng = sampling::rng(12);
    let mut squares = Vec::new();
    for _ in 0..20 {
        let psi = sampling::random_real_multivector(&mut rng, &sig);
        let want: f64 = psi.terms().map(|(_, c)| c.re * c.re).sum();
        squares.push((scalar_product(&psi, &psi)? - want).norm());
    }
    rec.worst("sum of squares for 20 random real psi", squares, tol);
    let mut under = Vec::new();
    for _ in 0..50 {
        let a = sampling::random_multivector(&mut rng, &sig);
        let b = sampling::random_multivector(&mut rng, &sig);
        let (lhs, rhs) = star_under_integral(&a, &b)?;
        under.push((lhs - rhs).norm());
    }
    rec.worst("int A*B = int AB for 50 random pairs", under, tol);
    Ok(())
}

fn spinors(rec: &mut Recorder, tol: f64) -> Result<()> {
    let half = scalar(0.5);
    rec.close("pi(psi+) = (1 + s3)/2", &wigner_from_spinor(&Spinor::up())?, &(&half + &s(2).scale(0.5)), tol);
    rec.close("pi(psi-) = (1 - s3)/2", &wigner_from_spinor(&Spinor::down())?, &(&half - &s(2).scale(0.5)), tol);
    let mut rng = sampling::rng(13);
    let mut spinors = vec![("psi+".to_string(), Spinor::up()), ("psi-".to_string(), Spinor::down())];
    for k in 0..10 {
        spinors.push((format!("rotor #{k}"), Spinor::new(sampling::random_rotor(&mut rng))?));
    }
    for axis in 0..3 {
        for sign in [1.0, -1.0] {
            let mut n = [0.0; 3];
            n[axis] = sign;
            spinors.push((format!("s3 -> {sign:+} s{}", axis + 1), Spinor::new(rotor_between([0.0, 0.0, 1.0], n)?)?));
        }
    }
    let mut idem = Vec::new();
    for (name, psi) in &spinors {
        let pi = wigner_from_spinor(psi)?;
        idem.push(clifford_star(&pi, &pi)?.max_abs_diff(&pi));
        let mut consistent = true;
        for axis in 0..3 {
            for lambda in [1.0, -1.0] {
                let lam = Complex64::new(lambda, 0.0);
                let r1 = psi.eigenvalue_residual(axis, lam)?.max_norm();
                let r2 = wigner_eigenvalue_residual(&pi, axis, lam)?.max_norm();
                let both_zero = r1 < tol && r2 < tol;
                let both_nonzero = r1 > 1e-3 && r2 > 1e-3;
                consistent &= both_zero || both_nonzero;
            }
        }
        rec.holds(format!("{name}: eigenvalue equations equivalent"), consistent);
    }
    rec.worst("Wigner functions of spinors are idempotent", idem, tol);
    let one_c = Complex64::new(1.0, 0.0);
    rec.check("psi+ solves lambda = +1 along s3", Spinor::up().eigenvalue_residual(2, one_c)?.max_norm(), tol);
    rec.check("psi- solves lambda = -1 along s3", Spinor::down().eigenvalue_residual(2, -one_c)?.max_norm(), tol);
    let tuples = [Spinor::up().to_tuple(), Spinor::down().to_tuple()];
    rec.holds("tuple of psi+ is (1, 0)", tuples[0] == [one_c, Complex64::new(0.0, 0.0)]);
    rec.holds("tuple of psi- is (0, -1)", tuples[1] == [Complex64::new(0.0, 0.0), -one_c]);
    Ok(())
}

fn even_basis() -> Vec<Multivector> {
    [0u32, 0b011, 0b101, 0b110]
        .iter()
        .map(|&m| Multivector::blade(&cl3(), m, 1.0))
        .collect()
}

fn isomorphisms(rec: &mut Recorder) -> Result<()> {
    let tol = 1e-12;
    let basis = even_basis();
    let mut homo1 = Vec::new();
    for a in &basis {
        for b in &basis {
            let lhs = even_cl3_to_cl2(&clifford_star(a, b)?)?;
            let rhs = clifford_star(&even_cl3_to_cl2(a)?, &even_cl3_to_cl2(b)?)?;
            homo1.push(lhs.max_abs_diff(&rhs));
        }
    }
    rec.worst("even Cl3 -> Cl2 preserves products", homo1, tol);
    let complex_basis: Vec<Multivector> = basis
        .iter()
        .flat_map(|b| [b.clone(), b.scale(i())])
        .collect();
    let mut homo2 = Vec::new();
    for a in &complex_basis {
        for b in &complex_basis {
            let lhs = complex_to_real(&clifford_star(a, b)?)?;
            let rhs = clifford_star(&complex_to_real(a)?, &complex_to_real(b)?)?;
            homo2.push(lhs.max_abs_diff(&rhs));
        }
    }
    rec.worst("complex -> real preserves products", homo2, tol);
    rec.close("i -> I", &complex_to_real(&scalar(i()))?, &Multivector::blade(&cl3(), 0b111, 1.0), tol);

    let hz = SpinHamiltonian::z_direction(1.3)?;
    let (p, m) = hz.projectors();
    let h2 = SpinHamiltonian::new(even_cl3_to_cl2(hz.multivector())?)?;
    rec.close("Hz in Cl2 keeps its form", h2.multivector(), &Multivector::blade(&cl2(), 0b11, Complex64::new(0.0, -0.65)), tol);
    let (p2, m2) = h2.projectors();
    rec.close("Cl2 pi+", &p2, &even_cl3_to_cl2(&p)?, tol);
    rec.close("Cl2 pi-", &m2, &even_cl3_to_cl2(&m)?, tol);
    let v = ladder_operators(&hz, LadderFlavor::Bivector)?;
    let s2 = |k: usize| Multivector::generator(&cl2(), k).expect("cl2");
    rec.close("bivector f -> (s1 + i s2)/2 in Cl2", &even_cl3_to_cl2(&v.f)?, &(s2(0) + s2(1).scale(i())).scale(0.5), tol);
    let hr = SpinHamiltonian::real_z_direction(1.3)?;
    rec.close("Hz -> (hbar omega/2) s3", &complex_to_real(hz.multivector())?, hr.multivector(), tol);
    let (rp, rm) = hr.projectors();
    rec.close("real pi+", &rp, &complex_to_real(&p)?, tol);
    rec.close("real pi-", &rm, &complex_to_real(&m)?, tol);
    let (mut e2, mut er) = (Vec::new(), Vec::new());
    for t in sample_times(10, 9.0) {
        let e = hz.star_exponential(t);
        e2.push(h2.star_exponential(t).max_abs_diff(&even_cl3_to_cl2(&e)?));
        er.push(hr.star_exponential(t).max_abs_diff(&complex_to_real(&e)?));
    }
    rec.worst("Cl2 exponential is the image", e2, tol);
    rec.worst("real exponential is the image", er, tol);
    Ok(())
}

fn path_integral(rec: &mut Recorder, tol: f64) -> Result<()> {
    let hz = SpinHamiltonian::z_direction(1.3)?;
    let t = 2.3;
    let (sn, cs) = (hz.abs_energy() * t).sin_cos();
    let closed = scalar(cs) - s(0).wedge(&s(1))?.scale(sn);
    for n in 1..=6 {
        rec.close(format!("N = {n} slices"), &discretized_propagator(&hz, t, n)?, &closed, 1e-9);
    }
    let mut rng = sampling::rng(15);
    let mut forms = Vec::new();
    for _ in 0..10 {
        let h = sampling::random_bivector_hamiltonian(&mut rng);
        let dt = rng.gen_range(-3.0..3.0);
        forms.push(greens_function_delta_form(&h, dt)?.max_abs_diff(&greens_function_fourier_form(&h, dt)?));
    }
    rec.worst("delta form = Fourier form at 10 random (H, dt)", forms, tol);
    let g = |dt: f64| greens_function_delta_form(&hz, dt);
    rec.close("G(t/2) G(t/2) = G(t)", &compose_propagators(&g(t / 2.0)?, &g(t / 2.0)?)?, &g(t)?, 1e-9);
    rec.close("G(0) G(dt) = G(dt)", &compose_propagators(&g(0.0)?, &g(0.7)?)?, &g(0.7)?, 1e-9);
    let quarter = g(t / 4.0)?;
    let mut chain = quarter.clone();
    for _ in 0..3 {
        chain = compose_propagators(&quarter, &chain)?;
    }
    rec.close("four quarter steps = G(t)", &chain, &g(t)?, 1e-9);
    let (a, b, c) = (g(0.3)?, g(0.9)?, g(1.4)?);
    let left = compose_propagators(&compose_propagators(&a, &b)?, &c)?;
    let right = compose_propagators(&a, &compose_propagators(&b, &c)?)?;
    rec.close("composition is associative", &left, &right, 1e-9);
    let mut prop = Vec::new();
    for _ in 0..10 {
        let h = sampling::random_bivector_hamiltonian(&mut rng);
        let dt = rng.gen_range(-3.0..3.0);
        let psi = sampling::random_multivector(&mut rng, &cl3());
        let through = propagate_state(&greens_function_delta_form(&h, dt)?, &psi)?;
        prop.push(through.max_abs_diff(&h.evolve_state(&psi, dt)?));
        prop.push(through.max_abs_diff(&lifted_evolution(&psi, &h, dt)?));
    }
    rec.worst("propagate = direct and lifted evolution", prop, tol);
    let hr = SpinHamiltonian::real_z_direction(1.3)?;
    let psi = sampling::random_multivector(&mut rng, &cl3()).even_part();
    let complex = propagate_state(&g(0.8)?, &psi)?;
    let real = propagate_state(&greens_function_delta_form(&hr, 0.8)?, &complex_to_real(&psi)?)?;
    rec.close("real-algebra kernel transports under i -> I", &real, &complex_to_real(&complex)?, tol);
    let delta_dt0 = g(0.0)?;
    let relabelled = propagate_state(&delta_dt0, &psi)?;
    rec.close("G(0) propagates as the identity", &relabelled, &psi, tol);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suites_pass() {
        let tol = Tolerances::default();
        for id in [1, 2, 4, 6, 7, 9, 10, 11, 12, 13, 14] {
            let r = run_suite(id, &tol);
            assert!(r.passed(), "{}\n{:?}", r.summary_line(), r.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn unknown_suite_fails() {
        assert!(!run_suite(99, &Tolerances::default()).passed());
    }
}

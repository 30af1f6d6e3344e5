use std::process::Command;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use starspin::star::clifford_star;
use starspin::Multivector;
use starspin_cli::{canonicalize, Session};

fn random_value(rng: &mut ChaCha8Rng, session: &Session) -> Multivector {
    let sig = session.signature();
    let terms: Vec<(u32, Complex64)> = (0..8)
        .map(|m| (m, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
        .collect();
    Multivector::from_terms(sig, terms).unwrap()
}

#[test]
fn star_in_the_interpreter_is_the_clifford_star() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..50 {
        let mut session = Session::default();
        let a = random_value(&mut rng, &session);
        let b = random_value(&mut rng, &session);
        session.bind("a", a.clone());
        session.bind("b", b.clone());
        let got = session.eval_str("a * b").unwrap();
        assert_eq!(got, clifford_star(&a, &b).unwrap());
        assert_eq!(session.eval_str("a ^ b").unwrap(), a.wedge(&b).unwrap());
        assert_eq!(session.eval_str("a - b").unwrap(), &a - &b);
    }
}

#[test]
fn printed_values_evaluate_back() {
    let session = Session::default();
    for text in [
        "0.5*(1 - 1i*s1^s2)",
        "exp_c(hsz, 0.7)",
        "(2+3i)*s1 s2 s3 - s2'",
        "rotor(s2^s3, 1.1)",
        "ft(s1^s2 + 3, s1 s2 s3, s1'' s2'' s3'')",
        "1e-7*s1 + 123456*s2",
    ] {
        let v = session.eval_str(text).unwrap();
        let back = session.eval_str(&v.to_string()).unwrap();
        assert!(back.approx_eq(&v, 1e-11), "{text}: {v} -> {back}");
    }
}

#[test]
fn canonical_forms() {
    for (input, want) in [
        ("s1*s2+1", "s1*s2 + 1"),
        ("((s1))", "s1"),
        ("s1 *  (s2 * s3)", "s1*(s2*s3)"),
        ("(s1 * s2) * s3", "s1*s2*s3"),
        ("s1 - (s2 + s3)", "s1 - (s2 + s3)"),
        ("- - s1", "--s1"),
        ("grade( s1 , 2 )", "grade(s1, 2)"),
        ("2.50i", "2.5i"),
        ("int(s1^s2^s3,s1 s2 s3)", "int(s1^s2^s3, s1 s2 s3)"),
    ] {
        assert_eq!(canonicalize(input).unwrap(), want);
        assert_eq!(canonicalize(want).unwrap(), want);
    }
}

#[test]
fn binary_exit_codes() {
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_starspin"))
            .args(args)
            .output()
            .unwrap()
    };
    let ok = run(&["eval", "s2*s1"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout), "-s1 s2\n");
    assert_eq!(run(&["eval", "rev(s1*s2"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "pi_plus(s1 + 1)"]).status.code(), Some(1));
    assert_eq!(run(&["demo", "precession", "--steps", "0"]).status.code(), Some(2));
    assert_eq!(run(&["check", "1"]).status.code(), Some(0));
    let json = run(&["eval", "--json", "0.5 - 0.5i*s1 s2"]);
    assert_eq!(String::from_utf8_lossy(&json.stdout).trim(), r#"{"":[0.5,0.0],"s1 s2":[0.0,-0.5]}"#);
}

#[test]
fn tolerance_override_is_honoured() {
    let out = Command::new(env!("CARGO_BIN_EXE_starspin"))
        .args(["check", "3"])
        .env("STARSPIN_TOL", "1e-30")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

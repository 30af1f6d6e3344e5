//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::process::{Command, Output};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use starspin::verify::{run_suite, Tolerances, SUITES};
use starspin_cli::{canonicalize, Session};

struct Outcome {
    passed: bool,
    detail: String,
}

fn suite(id: usize) -> Outcome {
    let report = run_suite(id, &Tolerances::default());
    let mut detail = match report.worst() {
        Some(c) => format!(
            "{} checks, max error {:.2e} (tol {:.0e})",
            report.checks.len(),
            c.error,
            c.tolerance
        ),
        None => "no checks".into(),
    };
    for f in report.failures() {
        detail.push_str(&format!("\n      failed: {} error {:.3e} tol {:.0e}", f.name, f.error, f.tolerance));
    }
    Outcome {
        passed: report.passed(),
        detail,
    }
}

fn binary(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_starspin"))
        .args(args)
        .env_remove("STARSPIN_TOL")
        .output()
        .expect("binary runs")
}

fn random_literal(rng: &mut ChaCha8Rng) -> String {
    let base = match rng.gen_range(0..5) {
        0 => rng.gen_range(0..10).to_string(),
        1 => format!("{:.3}", rng.gen_range(0.0..5.0)),
        2 => format!("{}e-{}", rng.gen_range(1..9), rng.gen_range(1..4)),
        3 => format!(".{}", rng.gen_range(1..99)),
        _ => return "i".into(),
    };
    if rng.gen_bool(0.3) {
        base + "i"
    } else {
        base
    }
}

fn random_blade(rng: &mut ChaCha8Rng) -> String {
    let len = rng.gen_range(1..=3);
    let mut gens: Vec<String> = (1..=3)
        .map(|k| format!("s{k}{}", "'".repeat(rng.gen_range(0..=2))))
        .collect();
    gens.shuffle(rng);
    gens.truncate(len);
    gens.join(" ")
}

fn space(rng: &mut ChaCha8Rng) -> &'static str {
    ["", " ", "  "][rng.gen_range(0..3)]
}

fn random_expr(rng: &mut ChaCha8Rng, depth: usize) -> String {
    let leaf = depth == 0 || rng.gen_bool(0.25);
    let text = if leaf {
        match rng.gen_range(0..4) {
            0 => random_literal(rng),
            1 | 2 => random_blade(rng),
            _ => ["hsz", "I3"][rng.gen_range(0..2)].to_string(),
        }
    } else {
        let a = random_expr(rng, depth - 1);
        let (l, r) = (space(rng), space(rng));
        match rng.gen_range(0..10) {
            0..=5 => {
                let b = random_expr(rng, depth - 1);
                let op = ["+", "-", "*", "^"][rng.gen_range(0..4)];
                format!("{a}{l}{op}{r}{b}")
            }
            6 => format!("-{l}{a}"),
            7 => {
                let f = ["rev", "neg"][rng.gen_range(0..2)];
                format!("{f}({l}{a}{r})")
            }
            8 => format!("grade({a},{l}{})", rng.gen_range(0..4)),
            _ => format!("int({a}, {})", random_blade(rng)),
        }
    };
    if rng.gen_bool(0.3) {
        format!("({text})")
    } else {
        text
    }
}

fn corpus() -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let mut out = vec![
        "s1 * s2".to_string(),
        "0.5*(1 - 1i*s1^s2)".into(),
        "s1''".into(),
        "s1*s2 + 1".into(),
        "int(s1^s2^s3, s1 s2 s3)".into(),
        "pi_plus(hsz) * pi_minus(hsz)".into(),
        "grade(1 + s1 + s1^s2, 2)".into(),
        "exp_c(hsz, 0.25)*s1*rev(exp_c(hsz, 0.25))".into(),
        "ift(ft(s1^s2, s1 s2 s3, s1' s2' s3'), s1' s2' s3', s1 s2 s3)".into(),
        "lift(s1 + s2, rotor(s1^s2, 0.5))".into(),
    ];
    while out.len() < 200 {
        out.push(random_expr(&mut rng, 4));
    }
    out
}

fn cli() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;

    let check = binary(&["check", "all"]);
    let code = check.status.code();
    ok &= code == Some(0);
    notes.push(format!("check all exit {code:?}"));

    let session = Session::default();
    let mut idempotent = 0;
    let mut same_value = 0;
    let mut evaluated = 0;
    let exprs = corpus();
    for text in &exprs {
        let Ok(first) = canonicalize(text) else {
            notes.push(format!("corpus entry does not parse: {text}"));
            ok = false;
            continue;
        };
        if canonicalize(&first).as_ref() == Ok(&first) {
            idempotent += 1;
        } else {
            notes.push(format!("not idempotent: {text}"));
        }
        if let Ok(v) = session.eval_str(text) {
            evaluated += 1;
            match session.eval_str(&first) {
                Ok(w) if v.approx_eq(&w, 1e-12) => same_value += 1,
                _ => notes.push(format!("value changed by printing: {text}")),
            }
        }
    }
    ok &= idempotent == exprs.len() && same_value == evaluated;
    notes.push(format!("round trip {idempotent}/{} ({evaluated} evaluated)", exprs.len()));

    let demos: [&[&str]; 4] = [
        &["demo", "precession", "--omega", "1.3", "--steps", "12"],
        &["demo", "projectors"],
        &["demo", "landau", "--B", "0.5,-1,2", "--e", "1.5", "--m", "0.7"],
        &["demo", "path-integral", "--slices", "4"],
    ];
    let mut identical = 0;
    for args in demos {
        let (a, b) = (binary(args), binary(args));
        if a.status.success() && a.stdout == b.stdout && !a.stdout.is_empty() {
            identical += 1;
        } else {
            notes.push(format!("demo differs or fails: {}", args.join(" ")));
        }
    }
    ok &= identical == demos.len();
    notes.push(format!("demos byte-identical {identical}/{}", demos.len()));

    let pi = binary(&["demo", "path-integral", "--slices", "4"]);
    let text = String::from_utf8_lossy(&pi.stdout);
    let small = text
        .lines()
        .skip(1)
        .all(|l| l.split('\t').nth(1).and_then(|d| d.parse::<f64>().ok()).is_some_and(|d| d < 1e-9));
    ok &= small;

    let s21 = binary(&["eval", "s2*s1"]);
    ok &= s21.stdout == b"-s1 s2\n";

    Outcome {
        passed: ok,
        detail: notes.join(", "),
    }
}

fn main() {
    let mut failed = 0;
    for (id, title) in SUITES {
        let start = Instant::now();
        let o = suite(id);
        failed += usize::from(!o.passed);
        println!(
            "{} criterion {id:2} {title}: {} [{:.2}s]",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    let start = Instant::now();
    let o = cli();
    failed += usize::from(!o.passed);
    println!(
        "{} criterion 16 command-line interface: {} [{:.2}s]",
        if o.passed { "PASS" } else { "FAIL" },
        o.detail,
        start.elapsed().as_secs_f64()
    );
    println!("{}/16 criteria passed", 16 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

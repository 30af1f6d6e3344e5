//! Command-line parsing and the subcommands.

use std::io::{self, BufRead, Write};
use std::f64::consts::TAU;

use clap::{Args, Parser, Subcommand};
use starspin::format::format_real;
use starspin::moyal::landau_split;
use starspin::path_integral::convergence_table;
use starspin::spin::SpinHamiltonian;
use starspin::star::clifford_star;
use starspin::verify::{run_suite, SuiteReport, Tolerances, SUITES};
use starspin::Multivector;

use crate::session::{EvalError, Session};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "starspin", version, about = "Clifford star products, Berezin calculus and spin dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one expression and print its canonical form.
    Eval(EvalArgs),
    /// Read expressions from standard input, one per line.
    Repl,
    /// Print a demonstration table.
    #[command(subcommand)]
    Demo(Demo),
    /// Run verification suites: `all` or a suite number.
    Check {
        #[arg(default_value = "all")]
        target: String,
    },
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Print the multivector as JSON.
    #[arg(long)]
    json: bool,
    /// Bind a name before evaluating, as NAME=EXPR. Repeatable.
    #[arg(long = "let", value_name = "NAME=EXPR", allow_hyphen_values = true)]
    bindings: Vec<String>,
    #[arg(allow_hyphen_values = true)]
    expr: String,
}

#[derive(Debug, Subcommand)]
enum Demo {
    /// Generator precession under the z-direction spin Hamiltonian.
    Precession {
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        omega: f64,
        #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u32).range(1..))]
        steps: u32,
    },
    /// Wigner projectors of the z-direction spin Hamiltonian.
    Projectors {
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        omega: f64,
    },
    /// Pauli Hamiltonian in a homogeneous field split into orbital and spin parts.
    Landau {
        #[arg(long = "B", value_name = "BX,BY,BZ", value_delimiter = ',', allow_hyphen_values = true, required = true)]
        b: Vec<f64>,
        #[arg(long, allow_negative_numbers = true)]
        e: f64,
        #[arg(long, allow_negative_numbers = true)]
        m: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        hbar: f64,
    },
    /// Slice-evaluated propagator against the closed-form star exponential.
    PathIntegral {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=7))]
        slices: u32,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        omega: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        t: f64,
    },
}

/// Runs the command line `args` (including the program name) and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let informational = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let text = e.render().to_string();
            if informational {
                let _ = write!(out, "{text}");
                return EXIT_OK;
            }
            let _ = write!(err, "{text}");
            return EXIT_USAGE;
        }
    };
    let result = match cli.command {
        Command::Eval(a) => eval(a, out, err),
        Command::Repl => repl(&mut io::stdin().lock(), out),
        Command::Demo(d) => demo(d, out, err),
        Command::Check { target } => check(&target, out, err),
    };
    result.unwrap_or(EXIT_FAILURE)
}

fn report_eval_error(err: &mut dyn Write, source: &str, e: &EvalError) -> io::Result<()> {
    writeln!(err, "error: {e}")?;
    writeln!(err, "  {source}")?;
    let col = source[..e.pos().min(source.len())].chars().count();
    writeln!(err, "  {}^", " ".repeat(col))
}

fn eval(a: EvalArgs, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<i32> {
    let mut session = Session::default();
    for b in &a.bindings {
        if let Err(e) = session.define(b) {
            report_eval_error(err, b, &e)?;
            return Ok(if e.is_syntax() { EXIT_USAGE } else { EXIT_FAILURE });
        }
    }
    match session.eval_str(&a.expr) {
        Ok(v) if a.json => writeln!(out, "{}", v.to_json())?,
        Ok(v) => writeln!(out, "{v}")?,
        Err(e) => {
            report_eval_error(err, &a.expr, &e)?;
            return Ok(if e.is_syntax() { EXIT_USAGE } else { EXIT_FAILURE });
        }
    }
    Ok(EXIT_OK)
}

/// Interactive loop: `let NAME = EXPR` binds, anything else is evaluated.
pub fn repl(input: &mut dyn BufRead, out: &mut dyn Write) -> io::Result<i32> {
    let mut session = Session::default();
    let mut line = String::new();
    loop {
        line.clear();
        if input.read_line(&mut line)? == 0 {
            return Ok(EXIT_OK);
        }
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        if matches!(text, "quit" | "exit") {
            return Ok(EXIT_OK);
        }
        let (source, result) = match text.strip_prefix("let ") {
            Some(def) => (def, session.define(def)),
            None => (text, session.eval_str(text)),
        };
        match result {
            Ok(v) => writeln!(out, "{v}")?,
            Err(e) => report_eval_error(out, source, &e)?,
        }
    }
}

fn demo(d: Demo, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<i32> {
    let table = match d {
        Demo::Precession { omega, steps } => precession(omega, steps),
        Demo::Projectors { omega } => projectors(omega),
        Demo::Landau { b, e, m, hbar } => {
            let Ok(b) = <[f64; 3]>::try_from(b.as_slice()) else {
                writeln!(err, "error: --B takes exactly three comma-separated components")?;
                return Ok(EXIT_USAGE);
            };
            landau(b, e, m, hbar)
        }
        Demo::PathIntegral { slices, omega, t } => path_integral(slices as usize, omega, t),
    };
    match table {
        Ok(rows) => {
            for r in rows {
                writeln!(out, "{}", r.join("\t"))?;
            }
            Ok(EXIT_OK)
        }
        Err(e) => {
            writeln!(err, "error: {e}")?;
            Ok(EXIT_FAILURE)
        }
    }
}

type Table = starspin::Result<Vec<Vec<String>>>;

fn header(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|c| c.to_string()).collect()
}

fn precession(omega: f64, steps: u32) -> Table {
    let h = SpinHamiltonian::z_direction(omega)?;
    let period = TAU / omega.abs();
    let mut rows = vec![header(&[
        "t", "s1(t).s1", "s1(t).s2", "s2(t).s1", "s2(t).s2", "cos", "sin", "deviation",
    ])];
    for k in 0..=steps {
        let t = period * f64::from(k) / f64::from(steps);
        let s1 = h.evolve_generator(0, t)?;
        let s2 = h.evolve_generator(1, t)?;
        let (sn, cs) = (omega * t).sin_cos();
        let got = [
            s1.coefficient(0b001).re,
            s1.coefficient(0b010).re,
            s2.coefficient(0b001).re,
            s2.coefficient(0b010).re,
        ];
        let g = |k: usize| Multivector::generator(h.signature(), k).expect("cl3");
        let dev = s1
            .max_abs_diff(&(g(0).scale(cs) - g(1).scale(sn)))
            .max(s2.max_abs_diff(&(g(0).scale(sn) + g(1).scale(cs))));
        let mut row = vec![format_real(t)];
        row.extend(got.iter().map(|x| format_real(*x)));
        row.extend([format_real(cs), format_real(sn), format!("{dev:.3e}")]);
        rows.push(row);
    }
    Ok(rows)
}

fn projectors(omega: f64) -> Table {
    let h = SpinHamiltonian::z_direction(omega)?;
    let (p, m) = h.projectors();
    let e = h.abs_energy();
    let hm = h.multivector();
    let one = Multivector::one(h.signature());
    let residual = |x: Multivector| format!("{:.3e}", x.max_norm());
    let real = SpinHamiltonian::real_z_direction(omega)?;
    let (rp, rm) = real.projectors();
    Ok(vec![
        header(&["quantity", "value"]),
        header(&["H", &hm.to_string()]),
        header(&["|E|", &format_real(e)]),
        header(&["pi_plus", &p.to_string()]),
        header(&["pi_minus", &m.to_string()]),
        header(&["pi_plus*pi_plus - pi_plus", &residual(&clifford_star(&p, &p)? - &p)]),
        header(&["pi_minus*pi_minus - pi_minus", &residual(&clifford_star(&m, &m)? - &m)]),
        header(&["pi_plus*pi_minus", &residual(clifford_star(&p, &m)?)]),
        header(&["pi_plus + pi_minus - 1", &residual(&p + &m - one)]),
        header(&["H*pi_plus - |E| pi_plus", &residual(clifford_star(hm, &p)? - p.scale(e))]),
        header(&["H*pi_minus + |E| pi_minus", &residual(clifford_star(hm, &m)? + m.scale(e))]),
        header(&["real H", &real.multivector().to_string()]),
        header(&["real pi_plus", &rp.to_string()]),
        header(&["real pi_minus", &rm.to_string()]),
    ])
}

fn landau(b: [f64; 3], e: f64, m: f64, hbar: f64) -> Table {
    let split = landau_split(b, e, m, hbar)?;
    Ok(vec![
        header(&["quantity", "value"]),
        header(&["H", &split.hamiltonian.to_string()]),
        header(&["H0", &split.h0.to_string()]),
        header(&["H_S", &split.spin.to_string()]),
        header(&["nabla A", &split.nabla_a.to_string()]),
        header(&["H - H0 - H_S", &format!("{:.3e}", split.residual()?)]),
    ])
}

fn path_integral(slices: usize, omega: f64, t: f64) -> Table {
    let h = SpinHamiltonian::z_direction(omega)?;
    let mut rows = vec![header(&["N", "deviation"])];
    for (n, dev) in convergence_table(&h, t, slices)? {
        rows.push(vec![n.to_string(), format!("{dev:.3e}")]);
    }
    Ok(rows)
}

fn check(target: &str, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<i32> {
    let ids: Vec<usize> = if target == "all" {
        SUITES.iter().map(|(id, _)| *id).collect()
    } else {
        match target.parse::<usize>() {
            Ok(id) if SUITES.iter().any(|(k, _)| *k == id) => vec![id],
            _ => {
                writeln!(err, "error: check target must be `all` or a suite number 1-{}", SUITES.len())?;
                return Ok(EXIT_USAGE);
            }
        }
    };
    let tol = Tolerances::from_env();
    let reports: Vec<SuiteReport> = std::thread::scope(|scope| {
        let handles: Vec<_> = ids
            .iter()
            .map(|&id| scope.spawn(move || run_suite(id, &tol)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("suite thread panicked"))
            .collect()
    });
    let mut passed = 0;
    for r in &reports {
        writeln!(out, "{}", r.summary_line())?;
        for f in r.failures() {
            writeln!(out, "    {}: error {:.3e} > tol {:.0e}", f.name, f.error, f.tolerance)?;
        }
        passed += usize::from(r.passed());
    }
    writeln!(out, "{passed}/{} suites passed", reports.len())?;
    Ok(if passed == reports.len() { EXIT_OK } else { EXIT_FAILURE })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut argv = vec!["starspin"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn eval_prints_canonical_form() {
        assert_eq!(run_args(&["eval", "s2*s1"]), (0, "-s1 s2\n".into(), String::new()));
        let (code, out, _) = run_args(&["eval", "--json", "1i*s1"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), r#"{"s1":[0.0,1.0]}"#);
        let (code, out, _) = run_args(&["eval", "--let", "a=s1+s2", "a*a"]);
        assert_eq!((code, out.as_str()), (0, "2\n"));
        assert_eq!(run_args(&["eval", "-s1"]).1, "-s1\n");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_args(&["eval", "rev(s1"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["eval", "s9"]).0, EXIT_FAILURE);
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["demo", "path-integral"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["demo", "landau", "--B", "1,2", "--e", "1", "--m", "1"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["demo", "landau", "--B", "1,2,3", "--e", "1", "--m", "0"]).0, EXIT_FAILURE);
        assert_eq!(run_args(&["check", "99"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn path_integral_table() {
        let (code, out, _) = run_args(&["demo", "path-integral", "--slices", "4"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "N\tdeviation");
        assert_eq!(lines.len(), 5);
        for l in &lines[1..] {
            let dev: f64 = l.split('\t').nth(1).unwrap().parse().unwrap();
            assert!(dev < 1e-9);
        }
    }

    #[test]
    fn demos_are_deterministic() {
        for args in [
            &["demo", "precession", "--omega", "1.3", "--steps", "8"][..],
            &["demo", "projectors"],
            &["demo", "landau", "--B", "0,-1,2", "--e", "-0.5", "--m", "2"],
        ] {
            let a = run_args(args);
            assert_eq!(a.0, 0, "{}", a.2);
            assert_eq!(a, run_args(args));
        }
    }

    #[test]
    fn repl_session() {
        let mut input = io::Cursor::new("let a = s1 + s2\na*a\nrev(\n\ns3*s3\n");
        let mut out = Vec::new();
        assert_eq!(repl(&mut input, &mut out).unwrap(), 0);
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "s1 + s2");
        assert_eq!(lines[1], "2");
        assert!(lines[2].starts_with("error: syntax error"));
        assert_eq!(lines.last(), Some(&"1"));
    }
}

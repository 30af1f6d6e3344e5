//! Evaluation of parsed expressions against a signature and named bindings.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use starspin::berezin::{
    berezin_integrate, delta_function, grassmann_fourier, inverse_grassmann_fourier, GeneratorSet,
};
use starspin::signature::cl3;
use starspin::spin::{rotor, OperatorLift, SpinHamiltonian};
use starspin::star::clifford_star;
use starspin::{Multivector, Signature};

use crate::expr::{parse, BinaryOp, Expr, ExprKind, Pos, SyntaxError};

#[derive(Clone, Debug, PartialEq)]
pub enum EvalError {
    Syntax(SyntaxError),
    Eval { pos: Pos, message: String },
}

impl EvalError {
    pub fn pos(&self) -> Pos {
        match self {
            EvalError::Syntax(e) => e.pos,
            EvalError::Eval { pos, .. } => *pos,
        }
    }

    pub fn is_syntax(&self) -> bool {
        matches!(self, EvalError::Syntax(_))
    }
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::Syntax(e) => write!(f, "{e}"),
            EvalError::Eval { pos, message } => {
                write!(f, "evaluation error at position {pos}: {message}")
            }
        }
    }
}

impl std::error::Error for EvalError {}

impl From<SyntaxError> for EvalError {
    fn from(e: SyntaxError) -> Self {
        EvalError::Syntax(e)
    }
}

fn fail(pos: Pos, message: impl fmt::Display) -> EvalError {
    EvalError::Eval {
        pos,
        message: message.to_string(),
    }
}

type Eval<T> = Result<T, EvalError>;

trait At<T> {
    fn at(self, pos: Pos) -> Eval<T>;
}

impl<T> At<T> for starspin::Result<T> {
    fn at(self, pos: Pos) -> Eval<T> {
        self.map_err(|e| fail(pos, e))
    }
}

/// A signature plus named values. The default session holds
/// `s1 s2 s3`, the replicas `s1' … s3''`, `hsz` (the z-direction spin
/// Hamiltonian with ħω = 1) and `I3 = s1 s2 s3`.
#[derive(Clone, Debug)]
pub struct Session {
    sig: Arc<Signature>,
    bindings: BTreeMap<String, Multivector>,
}

impl Default for Session {
    fn default() -> Self {
        let sig = Signature::replicated(3, 3).expect("nine generators");
        let mut s = Self::new(sig.clone());
        let hsz = SpinHamiltonian::z_direction_in(&sig, 1.0).expect("valid");
        s.bind("hsz", hsz.multivector().clone());
        s.bind("I3", Multivector::blade(&sig, 0b111, 1.0));
        s
    }
}

impl Session {
    pub fn new(sig: Arc<Signature>) -> Self {
        Self {
            sig,
            bindings: BTreeMap::new(),
        }
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn bind(&mut self, name: &str, value: Multivector) {
        self.bindings.insert(name.to_string(), value);
    }

    pub fn binding(&self, name: &str) -> Option<&Multivector> {
        self.bindings.get(name)
    }

    /// Handles `name = expr` by evaluating and binding.
    pub fn define(&mut self, definition: &str) -> Eval<Multivector> {
        let Some((name, body)) = definition.split_once('=') else {
            return Err(fail(0, "binding must look like name=expr"));
        };
        let name = name.trim();
        let valid = name
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        let reserved = name == "i" || crate::expr::arity(name).is_some();
        if !valid || reserved || crate::expr::tokenize(name).is_ok_and(|t| {
            matches!(t.first().map(|t| &t.kind), Some(crate::expr::TokenKind::Generator(_)))
        }) {
            return Err(fail(0, format!("`{name}` cannot be bound")));
        }
        let offset = definition.len() - body.len();
        let value = self.eval_str(body).map_err(|e| match e {
            EvalError::Syntax(s) => EvalError::Syntax(SyntaxError {
                pos: s.pos + offset,
                message: s.message,
            }),
            EvalError::Eval { pos, message } => EvalError::Eval {
                pos: pos + offset,
                message,
            },
        })?;
        self.bind(name, value.clone());
        Ok(value)
    }

    pub fn eval_str(&self, text: &str) -> Eval<Multivector> {
        self.eval(&parse(text)?)
    }

    pub fn eval(&self, e: &Expr) -> Eval<Multivector> {
        let pos = e.pos;
        match &e.kind {
            ExprKind::Number { value, imaginary } => {
                let c = if *imaginary {
                    Complex64::new(0.0, *value)
                } else {
                    Complex64::new(*value, 0.0)
                };
                Ok(Multivector::scalar(&self.sig, c))
            }
            ExprKind::Blade(names) => {
                let mut out = Multivector::one(&self.sig);
                for name in names {
                    let k = self.sig.index_of(name).at(pos)?;
                    out = out.wedge(&Multivector::generator(&self.sig, k).at(pos)?).at(pos)?;
                }
                Ok(out)
            }
            ExprKind::Variable(name) => self
                .bindings
                .get(name)
                .cloned()
                .ok_or_else(|| fail(pos, format!("unknown name `{name}`"))),
            ExprKind::Neg(inner) => Ok(-self.eval(inner)?),
            ExprKind::Binary(op, lhs, rhs) => {
                let (a, b) = (self.eval(lhs)?, self.eval(rhs)?);
                match op {
                    BinaryOp::Add => a.try_add(&b).at(pos),
                    BinaryOp::Sub => a.try_sub(&b).at(pos),
                    BinaryOp::Star => clifford_star(&a, &b).at(pos),
                    BinaryOp::Wedge => a.wedge(&b).at(pos),
                }
            }
            ExprKind::Call(name, args) => self.call(name, args, pos),
        }
    }

    fn generator_set(&self, e: &Expr) -> Eval<GeneratorSet> {
        let ExprKind::Blade(names) = &e.kind else {
            return Err(fail(e.pos, "expected a list of generators such as `s1 s2 s3`"));
        };
        let labels: Vec<&str> = names.iter().map(String::as_str).collect();
        GeneratorSet::from_labels(&self.sig, &labels).at(e.pos)
    }

    fn real(&self, e: &Expr) -> Eval<f64> {
        let v = self.eval(e)?;
        let c = v.scalar_part();
        if v.try_sub(&Multivector::scalar(&self.sig, c)).at(e.pos)?.max_norm() > 0.0
            || c.im.abs() > starspin::DEFAULT_TOLERANCE
        {
            return Err(fail(e.pos, format!("expected a real number, got {v}")));
        }
        Ok(c.re)
    }

    fn hamiltonian(&self, e: &Expr) -> Eval<SpinHamiltonian> {
        SpinHamiltonian::new(self.eval(e)?).at(e.pos)
    }

    fn call(&self, name: &str, args: &[Expr], pos: Pos) -> Eval<Multivector> {
        match name {
            "int" => {
                let f = self.eval(&args[0])?;
                berezin_integrate(&f, &self.generator_set(&args[1])?).at(pos)
            }
            "ft" | "ift" => {
                let f = self.eval(&args[0])?;
                let from = self.generator_set(&args[1])?;
                let to = self.generator_set(&args[2])?;
                if name == "ft" {
                    grassmann_fourier(&f, &from, &to).at(pos)
                } else {
                    inverse_grassmann_fourier(&f, &from, &to).at(pos)
                }
            }
            "delta" => {
                let x = self.generator_set(&args[0])?;
                let y = self.generator_set(&args[1])?;
                delta_function(&x, &y).at(pos)
            }
            "exp_c" => {
                let h = self.hamiltonian(&args[0])?;
                Ok(h.star_exponential(self.real(&args[1])?))
            }
            "pi_plus" => Ok(self.hamiltonian(&args[0])?.projectors().0),
            "pi_minus" => Ok(self.hamiltonian(&args[0])?.projectors().1),
            "rotor" => {
                let b = self.eval(&args[0])?;
                rotor(&b, self.real(&args[1])?).at(pos)
            }
            "lift" => {
                let a = self.to_cl3(&args[0])?;
                let b = self.to_cl3(&args[1])?;
                let image = OperatorLift::new(&a).at(pos)?.apply(&b).at(pos)?;
                Ok(self.embed_cl3(&image))
            }
            "rev" => Ok(self.eval(&args[0])?.reversion()),
            "grade" => {
                let v = self.eval(&args[0])?;
                let k = self.real(&args[1])?;
                if k < 0.0 || k.fract() != 0.0 {
                    return Err(fail(args[1].pos, "grade must be a non-negative integer"));
                }
                Ok(v.grade_project(k as usize))
            }
            "neg" => Ok(-self.eval(&args[0])?),
            _ => Err(fail(pos, format!("unknown function `{name}`"))),
        }
    }

    /// The value restricted to its first three generators, as an element of ℂℓ(3).
    fn to_cl3(&self, e: &Expr) -> Eval<Multivector> {
        let v = self.eval(e)?;
        if self.sig.dim() < 3 || v.support() & !0b111 != 0 {
            return Err(fail(e.pos, "operand must live on s1 s2 s3"));
        }
        Multivector::from_terms(&cl3(), v.terms()).at(e.pos)
    }

    fn embed_cl3(&self, v: &Multivector) -> Multivector {
        Multivector::from_terms(&self.sig, v.terms()).expect("masks fit")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(s: &str) -> String {
        Session::default().eval_str(s).unwrap().to_string()
    }

    #[test]
    fn basic_products() {
        assert_eq!(eval("s1*s1"), "1");
        assert_eq!(eval("s2*s1"), "-s1 s2");
        assert_eq!(eval("s1^s1"), "0");
        assert_eq!(eval("s1' * s1'"), "0");
        assert_eq!(eval("grade(1 + s1 + s1^s2, 2)"), "s1 s2");
        assert_eq!(eval("0.5*(1 - 1i*s1^s2)"), "0.5 - 0.5i*s1 s2");
        assert_eq!(eval("s2 s1"), "-s1 s2");
        assert_eq!(eval("2 + 3i"), "(2+3i)");
    }

    #[test]
    fn functions() {
        assert_eq!(eval("pi_plus(hsz) * pi_minus(hsz)"), "0");
        assert_eq!(eval("pi_plus(hsz) + pi_minus(hsz)"), "1");
        assert_eq!(eval("int(s1^s2^s3, s1 s2 s3)"), "1");
        assert_eq!(eval("int(delta(s1' s2' s3', s1 s2 s3)^s1, s1 s2 s3)"), "s1'");
        assert_eq!(eval("ift(ft(s1^s2, s1 s2 s3, s1' s2' s3'), s1' s2' s3', s1 s2 s3)"), "s1 s2");
        assert_eq!(eval("exp_c(hsz, 0)"), "1");
        assert_eq!(eval("rev(s1^s2)"), "-s1 s2");
        assert_eq!(eval("neg(s3)"), "-s3");
        assert_eq!(eval("lift(s1, s1^s2)"), eval("s1*(s1^s2)"));
        assert_eq!(eval("rotor(s1^s2, 0)"), "1");
        assert_eq!(eval("I3*I3"), "-1");
    }

    #[test]
    fn errors_carry_positions() {
        let s = Session::default();
        let e = s.eval_str("s1 + s9").unwrap_err();
        assert_eq!(e.pos(), 5);
        assert!(!e.is_syntax());
        assert_eq!(s.eval_str("1 + nope").unwrap_err().pos(), 4);
        assert_eq!(s.eval_str("int(s1, s1 + s2)").unwrap_err().pos(), 11);
        assert!(s.eval_str("pi_plus(s1 + 1)").is_err());
        assert!(s.eval_str("lift(s1', s1)").is_err());
        assert!(s.eval_str("rev(s1*s2").unwrap_err().is_syntax());
    }

    #[test]
    fn bindings() {
        let mut s = Session::default();
        s.define("a = s1 + s2").unwrap();
        assert_eq!(s.eval_str("a*a").unwrap().to_string(), "2");
        assert!(s.define("s1 = 2").is_err());
        assert!(s.define("int = 2").is_err());
        assert_eq!(s.define("b = 1 +").unwrap_err().pos(), 7);
    }
}

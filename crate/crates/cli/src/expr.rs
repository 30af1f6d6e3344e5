//! Tokenizer, parser and canonical printer for multivector expressions.
//!
//! `*` is the Clifford star product and `^` the wedge product; generators
//! written next to each other (`s1 s2 s3`) form a blade.

use std::fmt;

/// Byte offset into the source text.
pub type Pos = usize;

#[derive(Clone, Debug, PartialEq)]
pub enum TokenKind {
    /// Real or imaginary literal; `imaginary` marks an `i` suffix.
    Number { value: f64, imaginary: bool },
    Generator(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Wedge,
    LParen,
    RParen,
    Comma,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SyntaxError {
    pub pos: Pos,
    pub message: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at position {}: {}", self.pos, self.message)
    }
}

impl std::error::Error for SyntaxError {}

fn syntax(pos: Pos, message: impl Into<String>) -> SyntaxError {
    SyntaxError {
        pos,
        message: message.into(),
    }
}

pub fn tokenize(input: &str) -> Result<Vec<Token>, SyntaxError> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut k = 0;
    while k < bytes.len() {
        let c = bytes[k];
        let start = k;
        let simple = match c {
            b'+' => Some(TokenKind::Plus),
            b'-' => Some(TokenKind::Minus),
            b'*' => Some(TokenKind::Star),
            b'^' => Some(TokenKind::Wedge),
            b'(' => Some(TokenKind::LParen),
            b')' => Some(TokenKind::RParen),
            b',' => Some(TokenKind::Comma),
            _ => None,
        };
        if let Some(kind) = simple {
            out.push(Token { kind, pos: start });
            k += 1;
        } else if c.is_ascii_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() || c == b'.' {
            k = lex_number(bytes, k, &mut out)?;
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while k < bytes.len() && (bytes[k].is_ascii_alphanumeric() || bytes[k] == b'_') {
                k += 1;
            }
            let word = &input[start..k];
            let kind = if word == "i" {
                TokenKind::Number {
                    value: 1.0,
                    imaginary: true,
                }
            } else if is_generator_name(word) {
                while k < bytes.len() && bytes[k] == b'\'' {
                    k += 1;
                }
                TokenKind::Generator(input[start..k].to_string())
            } else {
                TokenKind::Ident(word.to_string())
            };
            out.push(Token { kind, pos: start });
        } else {
            let ch = input[start..].chars().next().unwrap_or('?');
            return Err(syntax(start, format!("unexpected character `{ch}`")));
        }
    }
    Ok(out)
}

fn is_generator_name(word: &str) -> bool {
    word.strip_prefix('s').is_some_and(|d| {
        !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()) && !d.starts_with('0')
    })
}

fn lex_number(bytes: &[u8], start: usize, out: &mut Vec<Token>) -> Result<usize, SyntaxError> {
    let mut k = start;
    let digits = |k: &mut usize| {
        let s = *k;
        while *k < bytes.len() && bytes[*k].is_ascii_digit() {
            *k += 1;
        }
        *k - s
    };
    let mut n = digits(&mut k);
    if k < bytes.len() && bytes[k] == b'.' {
        k += 1;
        n += digits(&mut k);
    }
    if n == 0 {
        return Err(syntax(start, "malformed number"));
    }
    if k < bytes.len() && (bytes[k] == b'e' || bytes[k] == b'E') {
        let mut j = k + 1;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            j += 1;
        }
        let exp_start = j;
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        if j == exp_start {
            return Err(syntax(k, "exponent has no digits"));
        }
        k = j;
    }
    let text = std::str::from_utf8(&bytes[start..k]).expect("ascii");
    let value: f64 = text.parse().map_err(|_| syntax(start, "malformed number"))?;
    if !value.is_finite() {
        return Err(syntax(start, "number out of range"));
    }
    let mut imaginary = false;
    if k < bytes.len() && bytes[k] == b'i' {
        imaginary = true;
        k += 1;
    }
    if k < bytes.len() && (bytes[k].is_ascii_alphanumeric() || bytes[k] == b'_') {
        return Err(syntax(k, "number runs into an identifier"));
    }
    out.push(Token {
        kind: TokenKind::Number { value, imaginary },
        pos: start,
    });
    Ok(k)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Star,
    Wedge,
}

impl BinaryOp {
    fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => " + ",
            BinaryOp::Sub => " - ",
            BinaryOp::Star => "*",
            BinaryOp::Wedge => "^",
        }
    }

    fn is_additive(self) -> bool {
        matches!(self, BinaryOp::Add | BinaryOp::Sub)
    }
}

/// Built-in functions and their arities.
pub const FUNCTIONS: [(&str, usize); 12] = [
    ("int", 2),
    ("ft", 3),
    ("ift", 3),
    ("delta", 2),
    ("exp_c", 2),
    ("pi_plus", 1),
    ("pi_minus", 1),
    ("rotor", 2),
    ("lift", 2),
    ("rev", 1),
    ("grade", 2),
    ("neg", 1),
];

pub fn arity(name: &str) -> Option<usize> {
    FUNCTIONS.iter().find(|(n, _)| *n == name).map(|(_, a)| *a)
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Number { value: f64, imaginary: bool },
    /// One or more juxtaposed generators, wedged in the written order.
    Blade(Vec<String>),
    Variable(String),
    Neg(Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Call(String, Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

impl Expr {
    fn new(kind: ExprKind, pos: Pos) -> Self {
        Self { kind, pos }
    }

    fn is_additive(&self) -> bool {
        matches!(&self.kind, ExprKind::Binary(op, ..) if op.is_additive())
    }

    fn is_binary(&self) -> bool {
        matches!(self.kind, ExprKind::Binary(..))
    }
}

pub fn parse(input: &str) -> Result<Expr, SyntaxError> {
    let tokens = tokenize(input)?;
    let mut p = Parser {
        tokens,
        next: 0,
        end: input.len(),
    };
    let e = p.expr()?;
    match p.peek() {
        None => Ok(e),
        Some(t) => Err(syntax(t.pos, "unexpected token after expression")),
    }
}

struct Parser {
    tokens: Vec<Token>,
    next: usize,
    end: Pos,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.next)
    }

    fn peek_kind(&self) -> Option<&TokenKind> {
        self.peek().map(|t| &t.kind)
    }

    fn pos(&self) -> Pos {
        self.peek().map_or(self.end, |t| t.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.next).cloned();
        self.next += 1;
        t
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> Result<(), SyntaxError> {
        match self.peek() {
            Some(t) if t.kind == kind => {
                self.next += 1;
                Ok(())
            }
            Some(t) => Err(syntax(t.pos, format!("expected {what}"))),
            None => Err(syntax(self.end, format!("expected {what} at end of input"))),
        }
    }

    fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek_kind() {
                Some(TokenKind::Plus) => BinaryOp::Add,
                Some(TokenKind::Minus) => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            let pos = self.pos();
            self.next += 1;
            let rhs = self.term()?;
            lhs = Expr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), pos);
        }
    }

    fn term(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek_kind() {
                Some(TokenKind::Star) => BinaryOp::Star,
                Some(TokenKind::Wedge) => BinaryOp::Wedge,
                _ => return Ok(lhs),
            };
            let pos = self.pos();
            self.next += 1;
            let rhs = self.unary()?;
            lhs = Expr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), pos);
        }
    }

    fn unary(&mut self) -> Result<Expr, SyntaxError> {
        if self.peek_kind() == Some(&TokenKind::Minus) {
            let pos = self.pos();
            self.next += 1;
            let inner = self.unary()?;
            return Ok(Expr::new(ExprKind::Neg(Box::new(inner)), pos));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr, SyntaxError> {
        let pos = self.pos();
        let Some(tok) = self.bump() else {
            return Err(syntax(self.end, "unexpected end of input"));
        };
        match tok.kind {
            TokenKind::Number { value, imaginary } => {
                Ok(Expr::new(ExprKind::Number { value, imaginary }, pos))
            }
            TokenKind::Generator(g) => {
                let mut names = vec![g];
                while let Some(TokenKind::Generator(next)) = self.peek_kind() {
                    names.push(next.clone());
                    self.next += 1;
                }
                Ok(Expr::new(ExprKind::Blade(names), pos))
            }
            TokenKind::Ident(name) => {
                if self.peek_kind() != Some(&TokenKind::LParen) {
                    if arity(&name).is_some() {
                        return Err(syntax(pos, format!("function `{name}` needs arguments")));
                    }
                    return Ok(Expr::new(ExprKind::Variable(name), pos));
                }
                let Some(n) = arity(&name) else {
                    return Err(syntax(pos, format!("unknown function `{name}`")));
                };
                self.next += 1;
                let mut args = vec![self.expr()?];
                while self.peek_kind() == Some(&TokenKind::Comma) {
                    self.next += 1;
                    args.push(self.expr()?);
                }
                self.expect(TokenKind::RParen, "`)`")?;
                if args.len() != n {
                    return Err(syntax(
                        pos,
                        format!("`{name}` takes {n} argument(s), got {}", args.len()),
                    ));
                }
                Ok(Expr::new(ExprKind::Call(name, args), pos))
            }
            TokenKind::LParen => {
                let e = self.expr()?;
                self.expect(TokenKind::RParen, "`)`")?;
                Ok(e)
            }
            _ => Err(syntax(pos, "expected a number, generator, name or `(`")),
        }
    }
}

fn wrap(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

/// Canonical text with the fewest parentheses that reparse to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Number { value, imaginary } => {
                write!(f, "{value}")?;
                if *imaginary {
                    write!(f, "i")?;
                }
                Ok(())
            }
            ExprKind::Blade(names) => write!(f, "{}", names.join(" ")),
            ExprKind::Variable(name) => write!(f, "{name}"),
            ExprKind::Neg(inner) => {
                write!(f, "-")?;
                wrap(f, inner, inner.is_binary())
            }
            ExprKind::Binary(op, lhs, rhs) => {
                if op.is_additive() {
                    wrap(f, lhs, false)?;
                    write!(f, "{}", op.symbol())?;
                    wrap(f, rhs, rhs.is_additive())
                } else {
                    wrap(f, lhs, lhs.is_additive())?;
                    write!(f, "{}", op.symbol())?;
                    wrap(f, rhs, rhs.is_binary())
                }
            }
            ExprKind::Call(name, args) => {
                write!(f, "{name}(")?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// `print(parse(text))`.
pub fn canonicalize(text: &str) -> Result<String, SyntaxError> {
    parse(text).map(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(s: &str) -> Vec<TokenKind> {
        tokenize(s).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn tokens() {
        assert_eq!(
            kinds("s1 * s2"),
            vec![
                TokenKind::Generator("s1".into()),
                TokenKind::Star,
                TokenKind::Generator("s2".into())
            ]
        );
        assert_eq!(kinds("s1''"), vec![TokenKind::Generator("s1''".into())]);
        let stream = kinds("0.5*(1 - 1i*s1^s2)");
        assert_eq!(stream.len(), 11);
        assert_eq!(
            stream[5],
            TokenKind::Number {
                value: 1.0,
                imaginary: true
            }
        );
        assert_eq!(
            kinds("i"),
            vec![TokenKind::Number {
                value: 1.0,
                imaginary: true
            }]
        );
        assert_eq!(
            kinds("2.5e-3i"),
            vec![TokenKind::Number {
                value: 2.5e-3,
                imaginary: true
            }]
        );
    }

    #[test]
    fn lexer_errors() {
        assert_eq!(tokenize("s1 $ s2").unwrap_err().pos, 3);
        assert!(tokenize("2x").is_err());
        assert!(tokenize("1e").is_err());
        assert!(tokenize(".").is_err());
    }

    #[test]
    fn precedence() {
        let e = parse("s1*s2 + 1").unwrap();
        let ExprKind::Binary(BinaryOp::Add, lhs, rhs) = &e.kind else {
            panic!("{e:?}")
        };
        assert!(matches!(lhs.kind, ExprKind::Binary(BinaryOp::Star, ..)));
        assert!(matches!(rhs.kind, ExprKind::Number { value, .. } if value == 1.0));
        assert_eq!(canonicalize("(s1*s2)^s3").unwrap(), "s1*s2^s3");
        assert_eq!(canonicalize("s1*(s2^s3)").unwrap(), "s1*(s2^s3)");
        assert_eq!(canonicalize("-(s1*s2)").unwrap(), "-(s1*s2)");
        assert_eq!(canonicalize("-s1*s2").unwrap(), "-s1*s2");
        assert_eq!(canonicalize("a - (b - c)").unwrap(), "a - (b - c)");
        assert_eq!(canonicalize("(a - b) - c").unwrap(), "a - b - c");
        assert_eq!(canonicalize("(1+2)*i").unwrap(), "(1 + 2)*1i");
    }

    #[test]
    fn calls_and_blades() {
        let e = parse("int(s1^s2^s3, s1 s2 s3)").unwrap();
        let ExprKind::Call(name, args) = &e.kind else {
            panic!()
        };
        assert_eq!(name, "int");
        assert_eq!(args[1].kind, ExprKind::Blade(vec!["s1".into(), "s2".into(), "s3".into()]));
        assert_eq!(e.to_string(), "int(s1^s2^s3, s1 s2 s3)");
    }

    #[test]
    fn syntax_errors() {
        let err = parse("rev(s1*s2").unwrap_err();
        assert_eq!(err.pos, 9);
        assert!(err.message.contains("end of input"));
        assert!(parse("foo(s1)").unwrap_err().message.contains("unknown function"));
        assert!(parse("rev(s1, s2)").is_err());
        assert!(parse("s1 +").is_err());
        assert!(parse("rev").is_err());
        assert_eq!(parse("s1 s2)").unwrap_err().pos, 5);
    }
}

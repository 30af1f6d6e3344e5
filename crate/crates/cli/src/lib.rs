//! Expression language and command-line front end for the starspin kernel.

pub mod commands;
pub mod expr;
pub mod session;

pub use commands::run;
pub use expr::{canonicalize, parse, tokenize, Expr, ExprKind, SyntaxError};
pub use session::{EvalError, Session};

//! Exact symbolic expressions over chart coordinates.

mod display;
mod eval;
mod expr;
mod parse;
mod raw;
mod rational;

pub use display::latex_symbol;
pub use eval::{CoordAssignment, EvalError};
pub use expr::{Expr, FuncKind, SymSet, Symbol};
pub use parse::{parse_raw, parse_with, ParseError, MAX_DEPTH, MAX_EXPONENT};
pub use raw::{canonicalize, CanonError, ExprKind, RawExpr};
pub use rational::Rational;

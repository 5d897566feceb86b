//! Floating-point evaluation.

use thiserror::Error;

use super::expr::{Atom, Expr, FuncKind, Symbol};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("no value assigned to `{0}`")]
    Missing(String),
    #[error("domain error in `{subexpr}`: {reason}")]
    Domain { subexpr: String, reason: &'static str },
}

/// Finite values for coordinate symbols, keyed by symbol id (ids are unique
/// within a chart).
#[derive(Debug, Clone, Default)]
pub struct CoordAssignment {
    dense: Vec<Option<f64>>,
}

impl CoordAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Panics if `value` is not finite.
    pub fn set(&mut self, s: &Symbol, value: f64) {
        assert!(value.is_finite(), "non-finite coordinate value for {s}");
        let id = s.id() as usize;
        if self.dense.len() <= id {
            self.dense.resize(id + 1, None);
        }
        self.dense[id] = Some(value);
    }

    pub fn with(mut self, s: &Symbol, value: f64) -> Self {
        self.set(s, value);
        self
    }

    pub fn get(&self, s: &Symbol) -> Option<f64> {
        self.dense.get(s.id() as usize).copied().flatten()
    }
}

impl FromIterator<(Symbol, f64)> for CoordAssignment {
    fn from_iter<I: IntoIterator<Item = (Symbol, f64)>>(iter: I) -> Self {
        let mut a = CoordAssignment::new();
        for (s, v) in iter {
            a.set(&s, v);
        }
        a
    }
}

pub(crate) fn apply_func(kind: FuncKind, v: f64) -> Result<f64, &'static str> {
    Ok(match kind {
        FuncKind::Sin => v.sin(),
        FuncKind::Cos => v.cos(),
        FuncKind::Tan => {
            if v.cos() == 0.0 {
                return Err("tan at a pole");
            }
            v.tan()
        }
        FuncKind::Exp => v.exp(),
        FuncKind::Log => {
            if v <= 0.0 {
                return Err("log of a non-positive number");
            }
            v.ln()
        }
        FuncKind::Sqrt => {
            if v < 0.0 {
                return Err("sqrt of a negative number");
            }
            v.sqrt()
        }
    })
}

impl Expr {
    /// IEEE double value at `a`.
    pub fn eval(&self, a: &CoordAssignment) -> Result<f64, EvalError> {
        let mut total = 0.0;
        for t in self.terms() {
            let mut prod = t.coeff.to_f64();
            for f in t.mono.iter() {
                let base = eval_atom(&f.atom, a)?;
                if f.exp < 0 && base == 0.0 {
                    return Err(EvalError::Domain {
                        subexpr: f.atom.to_expr().to_string(),
                        reason: "division by zero",
                    });
                }
                prod *= base.powi(f.exp);
            }
            total += prod;
        }
        if !total.is_finite() {
            return Err(EvalError::Domain { subexpr: self.to_string(), reason: "non-finite value" });
        }
        Ok(total)
    }
}

fn eval_atom(atom: &Atom, a: &CoordAssignment) -> Result<f64, EvalError> {
    match atom {
        Atom::Sym(s) => a.get(s).ok_or_else(|| EvalError::Missing(s.name().to_string())),
        Atom::Sum(e) => e.eval(a),
        Atom::Func(kind, arg) => {
            let v = arg.eval(a)?;
            apply_func(*kind, v).map_err(|reason| EvalError::Domain { subexpr: atom.to_expr().to_string(), reason })
        }
    }
}

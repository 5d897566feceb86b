//! Uncanonicalised expression trees and the tree view of canonical forms.

use thiserror::Error;

use super::eval::{apply_func, CoordAssignment, EvalError};
use super::expr::{Atom, Expr, FuncKind, Symbol};
use super::rational::Rational;

/// Expression tree exactly as written, before canonicalisation.
#[derive(Debug, Clone, PartialEq)]
pub enum RawExpr {
    Num(Rational),
    Sym(Symbol),
    Sum(Vec<RawExpr>),
    Product(Vec<RawExpr>),
    Pow(Box<RawExpr>, i64),
    Func(FuncKind, Box<RawExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonError {
    #[error("division by an expression that is identically zero")]
    ZeroDivision,
}

impl RawExpr {
    pub fn neg(e: RawExpr) -> RawExpr {
        RawExpr::Product(vec![RawExpr::Num(Rational::from_int(-1)), e])
    }

    pub fn recip(e: RawExpr) -> RawExpr {
        RawExpr::Pow(Box::new(e), -1)
    }

    /// Canonical form of the tree.
    pub fn canonicalize(&self) -> Result<Expr, CanonError> {
        Ok(match self {
            RawExpr::Num(r) => Expr::rational(r.clone()),
            RawExpr::Sym(s) => Expr::symbol(s),
            RawExpr::Sum(items) => {
                let mut parts = Vec::with_capacity(items.len());
                for it in items {
                    parts.push(it.canonicalize()?);
                }
                Expr::sum(parts)
            }
            RawExpr::Product(items) => {
                let mut acc = Expr::one();
                for it in items {
                    acc = &acc * &it.canonicalize()?;
                }
                acc
            }
            RawExpr::Pow(base, k) => base.canonicalize()?.checked_pow(*k).ok_or(CanonError::ZeroDivision)?,
            RawExpr::Func(kind, arg) => Expr::func(*kind, arg.canonicalize()?),
        })
    }

    /// Direct floating-point evaluation of the tree, without canonicalising.
    pub fn eval(&self, a: &CoordAssignment) -> Result<f64, EvalError> {
        Ok(match self {
            RawExpr::Num(r) => r.to_f64(),
            RawExpr::Sym(s) => a.get(s).ok_or_else(|| EvalError::Missing(s.name().to_string()))?,
            RawExpr::Sum(items) => {
                let mut acc = 0.0;
                for it in items {
                    acc += it.eval(a)?;
                }
                acc
            }
            RawExpr::Product(items) => {
                let mut acc = 1.0;
                for it in items {
                    acc *= it.eval(a)?;
                }
                acc
            }
            RawExpr::Pow(base, k) => {
                let b = base.eval(a)?;
                if *k < 0 && b == 0.0 {
                    return Err(EvalError::Domain { subexpr: format!("{base:?}"), reason: "division by zero" });
                }
                b.powi(i32::try_from(*k).unwrap_or(i32::MAX))
            }
            RawExpr::Func(kind, arg) => {
                let v = arg.eval(a)?;
                apply_func(*kind, v).map_err(|reason| EvalError::Domain { subexpr: format!("{self:?}"), reason })?
            }
        })
    }
}

/// One level of the canonical tree.
#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Rational(Rational),
    Symbol(Symbol),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Pow(Expr, i64),
    Func(FuncKind, Expr),
}

impl Expr {
    pub fn kind(&self) -> ExprKind {
        let terms = self.terms();
        if terms.len() != 1 {
            if terms.is_empty() {
                return ExprKind::Rational(Rational::ZERO);
            }
            return ExprKind::Sum(
                terms
                    .iter()
                    .map(|t| monomial_expr(&t.coeff, &t.mono))
                    .collect(),
            );
        }
        let t = &terms[0];
        if t.mono.is_empty() {
            return ExprKind::Rational(t.coeff.clone());
        }
        if t.coeff.is_one() && t.mono.len() == 1 {
            let f = &t.mono[0];
            if f.exp == 1 {
                return match &f.atom {
                    Atom::Sym(s) => ExprKind::Symbol(s.clone()),
                    Atom::Func(k, e) => ExprKind::Func(*k, e.clone()),
                    Atom::Sum(e) => ExprKind::Sum(e.terms().iter().map(|t| monomial_expr(&t.coeff, &t.mono)).collect()),
                };
            }
            return ExprKind::Pow(f.atom.to_expr(), f.exp as i64);
        }
        let mut items = Vec::new();
        if !t.coeff.is_one() {
            items.push(Expr::rational(t.coeff.clone()));
        }
        for f in t.mono.iter() {
            items.push(monomial_expr(&Rational::ONE, std::slice::from_ref(f)));
        }
        ExprKind::Product(items)
    }

    /// Tree form whose canonicalisation gives back `self`.
    pub fn to_raw(&self) -> RawExpr {
        match self.kind() {
            ExprKind::Rational(r) => RawExpr::Num(r),
            ExprKind::Symbol(s) => RawExpr::Sym(s),
            ExprKind::Sum(items) => RawExpr::Sum(items.iter().map(Expr::to_raw).collect()),
            ExprKind::Product(items) => RawExpr::Product(items.iter().map(Expr::to_raw).collect()),
            ExprKind::Pow(b, k) => RawExpr::Pow(Box::new(b.to_raw()), k),
            ExprKind::Func(k, e) => RawExpr::Func(k, Box::new(e.to_raw())),
        }
    }
}

fn monomial_expr(coeff: &Rational, factors: &[super::expr::Factor]) -> Expr {
    let mut acc = Expr::rational(coeff.clone());
    for f in factors {
        acc = &acc * &f.atom.to_expr().pow(f.exp as i64);
    }
    acc
}

/// Canonical form of a raw tree.
pub fn canonicalize(raw: &RawExpr) -> Result<Expr, CanonError> {
    raw.canonicalize()
}

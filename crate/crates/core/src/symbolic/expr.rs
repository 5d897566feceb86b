//! Canonical symbolic expressions.
//!
//! Every [`Expr`] is kept in one canonical shape: a sorted sum of terms, each
//! term a nonzero rational coefficient times a sorted product of atoms raised
//! to nonzero integer powers. Atoms are coordinate symbols, function
//! applications and (only with negative exponents) irreducible sums.
//! Products are always distributed over sums, so two polynomial or Laurent
//! expressions are equal exactly when their canonical forms are.
//!
//! Trigonometric monomials in a common argument `u` are reduced with
//! `sin(u)^2 -> 1 - cos(u)^2`; when the sine exponent is negative, even cosine
//! powers are traded back with `cos(u)^2 -> 1 - sin(u)^2` so that quotients by
//! `sin(u)` also have a unique representative.

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::rational::Rational;

/// A coordinate symbol. Identity is the pair `(id, name)`; ids order symbols
/// inside canonical forms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    id: u32,
    name: Arc<str>,
}

impl Symbol {
    pub fn new(id: u32, name: &str) -> Self {
        Symbol { id, name: Arc::from(name) }
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FuncKind {
    Cos,
    Sin,
    Tan,
    Exp,
    Log,
    Sqrt,
}

impl FuncKind {
    pub fn name(self) -> &'static str {
        match self {
            FuncKind::Sin => "sin",
            FuncKind::Cos => "cos",
            FuncKind::Tan => "tan",
            FuncKind::Exp => "exp",
            FuncKind::Log => "log",
            FuncKind::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => FuncKind::Sin,
            "cos" => FuncKind::Cos,
            "tan" => FuncKind::Tan,
            "exp" => FuncKind::Exp,
            "log" => FuncKind::Log,
            "sqrt" => FuncKind::Sqrt,
            _ => return None,
        })
    }
}

/// Bitmask over symbol ids; ids above 126 share the last bit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct SymSet(u128);

impl SymSet {
    fn bit(id: u32) -> u128 {
        1u128 << id.min(127)
    }

    pub fn single(id: u32) -> Self {
        SymSet(Self::bit(id))
    }

    pub fn may_contain(self, id: u32) -> bool {
        self.0 & Self::bit(id) != 0
    }

    pub fn union(self, other: SymSet) -> SymSet {
        SymSet(self.0 | other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Atom {
    Sym(Symbol),
    Func(FuncKind, Expr),
    /// Monic, primitive sum of at least two terms.
    Sum(Expr),
}

impl Atom {
    fn syms(&self) -> SymSet {
        match self {
            Atom::Sym(s) => SymSet::single(s.id),
            Atom::Func(_, e) | Atom::Sum(e) => e.0.syms,
        }
    }

    pub(crate) fn to_expr(&self) -> Expr {
        match self {
            Atom::Sum(e) => e.clone(),
            _ => Expr::from_factors(Rational::ONE, vec![Factor { atom: self.clone(), exp: 1 }]),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Factor {
    pub(crate) atom: Atom,
    pub(crate) exp: i32,
}

pub(crate) type Monomial = Arc<[Factor]>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub(crate) struct Term {
    pub(crate) coeff: Rational,
    pub(crate) mono: Monomial,
}

struct Inner {
    terms: Vec<Term>,
    hash: u64,
    syms: SymSet,
}

/// Immutable canonical expression; cheap to clone.
#[derive(Clone)]
pub struct Expr(Arc<Inner>);

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.hash == other.0.hash && self.0.terms == other.0.terms)
    }
}

impl Eq for Expr {}

impl Hash for Expr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl Ord for Expr {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        let (a, b) = (&self.0.terms, &other.0.terms);
        for (x, y) in a.iter().zip(b.iter()) {
            let o = x.mono.cmp(&y.mono).then_with(|| x.coeff.cmp(&y.coeff));
            if o != Ordering::Equal {
                return o;
            }
        }
        a.len().cmp(&b.len())
    }
}

impl PartialOrd for Expr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn empty_mono() -> Monomial {
    Arc::from(Vec::<Factor>::new())
}

/// Merge two sorted factor lists, adding exponents of equal atoms.
fn merge_factors(a: &[Factor], b: &[Factor]) -> Vec<Factor> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].atom.cmp(&b[j].atom) {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            Ordering::Equal => {
                let e = a[i].exp + b[j].exp;
                if e != 0 {
                    out.push(Factor { atom: a[i].atom.clone(), exp: e });
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Sort and merge an arbitrary factor list.
fn collect_factors(mut factors: Vec<Factor>) -> Vec<Factor> {
    factors.sort_by(|x, y| x.atom.cmp(&y.atom));
    let mut out: Vec<Factor> = Vec::with_capacity(factors.len());
    for f in factors {
        match out.last_mut() {
            Some(last) if last.atom == f.atom => last.exp += f.exp,
            _ => out.push(f),
        }
    }
    out.retain(|f| f.exp != 0);
    out
}

enum Rewrite {
    None,
    /// Expand a sum atom raised to a positive power.
    ExpandSum(usize),
    /// `sqrt(u)^e` with `|e| >= 2`.
    Sqrt(usize),
    /// `sin(u)^e`, `e >= 2`.
    SinSquare(usize),
    /// `sin(u)^e * cos(u)^f` with `e < 0`, `f >= 2`: index of the cosine.
    CosSquare(usize),
}

fn find_rewrite(factors: &[Factor]) -> Rewrite {
    for (idx, f) in factors.iter().enumerate() {
        match &f.atom {
            Atom::Sum(_) if f.exp > 0 => return Rewrite::ExpandSum(idx),
            Atom::Func(FuncKind::Sqrt, _) if f.exp.abs() >= 2 => return Rewrite::Sqrt(idx),
            Atom::Func(FuncKind::Sin, u) => {
                if f.exp >= 2 {
                    return Rewrite::SinSquare(idx);
                }
                if f.exp < 0 {
                    for (cidx, c) in factors.iter().enumerate() {
                        if let Atom::Func(FuncKind::Cos, v) = &c.atom {
                            if v == u && c.exp >= 2 {
                                return Rewrite::CosSquare(cidx);
                            }
                        }
                    }
                }
            }
            _ => {}
        }
    }
    Rewrite::None
}

fn hash_terms(terms: &[Term]) -> u64 {
    let mut h = DefaultHasher::new();
    terms.hash(&mut h);
    h.finish()
}

impl Expr {
    fn from_sorted_terms(terms: Vec<Term>) -> Expr {
        match cancel_sum_quotient(&terms) {
            Some(t) => Expr::from_terms(t),
            None => Expr::build(terms),
        }
    }

    fn build(terms: Vec<Term>) -> Expr {
        let syms = terms
            .iter()
            .flat_map(|t| t.mono.iter())
            .fold(SymSet::default(), |acc, f| acc.union(f.atom.syms()));
        let hash = hash_terms(&terms);
        Expr(Arc::new(Inner { terms, hash, syms }))
    }

    /// Build from already-normalised terms in any order.
    fn from_terms(mut terms: Vec<Term>) -> Expr {
        if terms.len() > 1 {
            terms.sort_unstable_by(|a, b| a.mono.cmp(&b.mono));
            let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
            for t in terms {
                match merged.last_mut() {
                    Some(last) if last.mono == t.mono => last.coeff = &last.coeff + &t.coeff,
                    _ => merged.push(t),
                }
            }
            merged.retain(|t| !t.coeff.is_zero());
            terms = merged;
        } else {
            terms.retain(|t| !t.coeff.is_zero());
        }
        Expr::from_sorted_terms(terms)
    }

    /// Normalise one monomial, applying the rewrite rules until none fires.
    fn from_factors(coeff: Rational, factors: Vec<Factor>) -> Expr {
        let mut out = Vec::new();
        push_normalised(coeff, factors, &mut out);
        Expr::from_terms(out)
    }

    pub(crate) fn terms(&self) -> &[Term] {
        &self.0.terms
    }

    pub fn zero() -> Expr {
        Expr::from_sorted_terms(Vec::new())
    }

    pub fn one() -> Expr {
        Expr::rational(Rational::ONE)
    }

    pub fn int(v: i64) -> Expr {
        Expr::rational(Rational::from_int(v))
    }

    pub fn frac(num: i64, den: i64) -> Expr {
        Expr::rational(Rational::new(num, den))
    }

    pub fn rational(r: Rational) -> Expr {
        if r.is_zero() {
            return Expr::zero();
        }
        Expr::from_sorted_terms(vec![Term { coeff: r, mono: empty_mono() }])
    }

    pub fn symbol(s: &Symbol) -> Expr {
        let mono: Monomial = Arc::from(vec![Factor { atom: Atom::Sym(s.clone()), exp: 1 }]);
        Expr::from_sorted_terms(vec![Term { coeff: Rational::ONE, mono }])
    }

    pub fn is_zero(&self) -> bool {
        self.0.terms.is_empty()
    }

    /// The value if this expression is a rational constant.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.0.terms.as_slice() {
            [] => Some(Rational::ZERO),
            [t] if t.mono.is_empty() => Some(t.coeff.clone()),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.0.syms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.0.terms.len()
    }

    pub fn sym_set(&self) -> SymSet {
        self.0.syms
    }

    /// Whether `s` occurs anywhere in the expression.
    pub fn depends_on(&self, s: &Symbol) -> bool {
        if !self.0.syms.may_contain(s.id) {
            return false;
        }
        self.0.terms.iter().any(|t| {
            t.mono.iter().any(|f| match &f.atom {
                Atom::Sym(x) => x == s,
                Atom::Func(_, e) | Atom::Sum(e) => e.depends_on(s),
            })
        })
    }

    pub fn free_symbols(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        self.collect_symbols(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_symbols(&self, out: &mut Vec<Symbol>) {
        for t in &self.0.terms {
            for f in t.mono.iter() {
                match &f.atom {
                    Atom::Sym(s) => out.push(s.clone()),
                    Atom::Func(_, e) | Atom::Sum(e) => e.collect_symbols(out),
                }
            }
        }
    }

    pub fn scale(&self, r: &Rational) -> Expr {
        if r.is_zero() {
            return Expr::zero();
        }
        if r.is_one() {
            return self.clone();
        }
        let terms = self
            .0
            .terms
            .iter()
            .map(|t| Term { coeff: &t.coeff * r, mono: t.mono.clone() })
            .collect();
        Expr::from_sorted_terms(terms)
    }

    /// Sum of many expressions with a single merge pass.
    pub fn sum<I>(items: I) -> Expr
    where
        I: IntoIterator<Item = Expr>,
    {
        let mut terms = Vec::new();
        let mut count = 0usize;
        let mut last = None;
        for e in items {
            if e.is_zero() {
                continue;
            }
            count += 1;
            terms.extend(e.0.terms.iter().cloned());
            last = Some(e);
        }
        match count {
            0 => Expr::zero(),
            1 => last.unwrap(),
            _ => Expr::from_terms(terms),
        }
    }

    pub fn product<I>(items: I) -> Expr
    where
        I: IntoIterator<Item = Expr>,
    {
        let mut acc = Expr::one();
        for e in items {
            if e.is_zero() {
                return Expr::zero();
            }
            acc = &acc * &e;
        }
        acc
    }

    fn mul_impl(&self, other: &Expr) -> Expr {
        if self.is_zero() || other.is_zero() {
            return Expr::zero();
        }
        if let Some(r) = self.as_rational() {
            return other.scale(&r);
        }
        if let Some(r) = other.as_rational() {
            return self.scale(&r);
        }
        let mut out = Vec::with_capacity(self.0.terms.len() * other.0.terms.len());
        for a in &self.0.terms {
            for b in &other.0.terms {
                let coeff = &a.coeff * &b.coeff;
                let factors = merge_factors(&a.mono, &b.mono);
                push_normalised(coeff, factors, &mut out);
            }
        }
        Expr::from_terms(out)
    }

    /// Integer power; negative powers of sums become sum atoms.
    ///
    /// Returns `None` when raising zero to a negative power.
    pub fn checked_pow(&self, k: i64) -> Option<Expr> {
        if k == 0 {
            return Some(Expr::one());
        }
        if k == 1 {
            return Some(self.clone());
        }
        if self.is_zero() {
            return if k > 0 { Some(Expr::zero()) } else { None };
        }
        let k32 = i32::try_from(k).ok()?;
        match self.0.terms.as_slice() {
            [t] => {
                let coeff = t.coeff.pow(k32)?;
                let factors = t
                    .mono
                    .iter()
                    .map(|f| Factor { atom: f.atom.clone(), exp: f.exp.checked_mul(k32).unwrap_or(f.exp) })
                    .collect();
                Some(Expr::from_factors(coeff, factors))
            }
            _ if k > 0 => {
                let mut result = Expr::one();
                let mut base = self.clone();
                let mut e = k;
                while e > 0 {
                    if e & 1 == 1 {
                        result = &result * &base;
                    }
                    e >>= 1;
                    if e > 0 {
                        base = &base * &base;
                    }
                }
                Some(result)
            }
            _ => {
                let (scale, common, primitive) = self.split_content();
                if let Some((c, u)) = primitive.as_one_minus_cos_sq() {
                    // (1 - cos(u)^2)^k = sin(u)^(2k)
                    let lead = (&scale * &c).pow(k32)?;
                    let mut factors: Vec<Factor> = common
                        .into_iter()
                        .map(|f| Factor { atom: f.atom, exp: f.exp * k32 })
                        .collect();
                    factors.push(Factor { atom: Atom::Func(FuncKind::Sin, u), exp: 2 * k32 });
                    return Some(Expr::from_factors(lead, collect_factors(factors)));
                }
                let lead = scale.pow(k32)?;
                let mut factors: Vec<Factor> = common
                    .into_iter()
                    .map(|f| Factor { atom: f.atom, exp: f.exp * k32 })
                    .collect();
                debug_assert!(primitive.term_count() > 1);
                factors.push(Factor { atom: Atom::Sum(primitive), exp: k32 });
                Some(Expr::from_factors(lead, collect_factors(factors)))
            }
        }
    }

    /// Panics on `0^k` with `k < 0`.
    pub fn pow(&self, k: i64) -> Expr {
        self.checked_pow(k).expect("zero raised to a negative power")
    }

    /// Reciprocal, `None` for zero.
    pub fn recip(&self) -> Option<Expr> {
        self.checked_pow(-1)
    }

    /// Write a multi-term sum as `scale * common * primitive`, where every
    /// symbol of the primitive sum has minimum exponent zero and the sum is
    /// monic in the canonical term order.
    fn split_content(&self) -> (Rational, Vec<Factor>, Expr) {
        let terms = &self.0.terms;
        let mut candidates: Vec<Symbol> = Vec::new();
        for t in terms {
            for f in t.mono.iter() {
                if let Atom::Sym(s) = &f.atom {
                    candidates.push(s.clone());
                }
            }
        }
        candidates.sort();
        candidates.dedup();
        let mut common: Vec<Factor> = Vec::new();
        for s in candidates {
            let min = terms
                .iter()
                .map(|t| {
                    t.mono
                        .iter()
                        .find(|f| matches!(&f.atom, Atom::Sym(x) if *x == s))
                        .map_or(0, |f| f.exp)
                })
                .min()
                .unwrap_or(0);
            if min != 0 {
                common.push(Factor { atom: Atom::Sym(s), exp: min });
            }
        }
        let stripped = if common.is_empty() {
            self.clone()
        } else {
            let divisor: Vec<Factor> =
                common.iter().map(|f| Factor { atom: f.atom.clone(), exp: -f.exp }).collect();
            let terms = terms
                .iter()
                .map(|t| Term { coeff: t.coeff.clone(), mono: Arc::from(merge_factors(&t.mono, &divisor)) })
                .collect();
            Expr::from_terms(terms)
        };
        let scale = stripped.0.terms[0].coeff.clone();
        let primitive = stripped.scale(&scale.recip().expect("nonzero leading coefficient"));
        (scale, common, primitive)
    }

    /// Function application with the elementary simplifications applied.
    pub fn func(kind: FuncKind, arg: Expr) -> Expr {
        if let Some(r) = arg.as_rational() {
            if let Some(v) = eval_constant_func(kind, &r) {
                return Expr::rational(v);
            }
        }
        let negated_lead = arg.0.terms.first().is_some_and(|t| t.coeff.is_negative());
        match kind {
            FuncKind::Tan => {
                let s = Expr::func(FuncKind::Sin, arg.clone());
                let c = Expr::func(FuncKind::Cos, arg);
                return &s * &c.pow(-1);
            }
            FuncKind::Sin if negated_lead => return -Expr::func(FuncKind::Sin, -&arg),
            FuncKind::Cos if negated_lead => return Expr::func(FuncKind::Cos, -&arg),
            FuncKind::Log => {
                if let Some(inner) = arg.as_single_func(FuncKind::Exp) {
                    return inner;
                }
            }
            _ => {}
        }
        Expr::from_factors(Rational::ONE, vec![Factor { atom: Atom::Func(kind, arg), exp: 1 }])
    }

    fn as_single_func(&self, kind: FuncKind) -> Option<Expr> {
        match self.0.terms.as_slice() {
            [t] if t.coeff.is_one() && t.mono.len() == 1 && t.mono[0].exp == 1 => match &t.mono[0].atom {
                Atom::Func(k, e) if *k == kind => Some(e.clone()),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn sin(arg: Expr) -> Expr {
        Expr::func(FuncKind::Sin, arg)
    }

    pub fn cos(arg: Expr) -> Expr {
        Expr::func(FuncKind::Cos, arg)
    }

    pub fn exp(arg: Expr) -> Expr {
        Expr::func(FuncKind::Exp, arg)
    }

    pub fn log(arg: Expr) -> Expr {
        Expr::func(FuncKind::Log, arg)
    }

    pub fn sqrt(arg: Expr) -> Expr {
        Expr::func(FuncKind::Sqrt, arg)
    }

    pub fn tan(arg: Expr) -> Expr {
        Expr::func(FuncKind::Tan, arg)
    }

    /// Exact partial derivative with respect to `v`.
    pub fn diff(&self, v: &Symbol) -> Expr {
        if !self.0.syms.may_contain(v.id) {
            return Expr::zero();
        }
        let mut fast = Vec::new();
        let mut slow = Vec::new();
        for t in &self.0.terms {
            for (idx, f) in t.mono.iter().enumerate() {
                match &f.atom {
                    Atom::Sym(s) if s == v => {
                        let mut factors = t.mono.to_vec();
                        if f.exp == 1 {
                            factors.remove(idx);
                        } else {
                            factors[idx].exp -= 1;
                        }
                        fast.push(Term {
                            coeff: &t.coeff * &Rational::from_int(f.exp as i64),
                            mono: Arc::from(factors),
                        });
                    }
                    Atom::Sym(_) => {}
                    Atom::Func(kind, u) => {
                        if !u.0.syms.may_contain(v.id) {
                            continue;
                        }
                        let du = u.diff(v);
                        if du.is_zero() {
                            continue;
                        }
                        let outer = match kind {
                            FuncKind::Sin => Expr::cos(u.clone()),
                            FuncKind::Cos => -Expr::sin(u.clone()),
                            FuncKind::Tan => {
                                let c = Expr::cos(u.clone());
                                c.pow(-2)
                            }
                            FuncKind::Exp => Expr::exp(u.clone()),
                            FuncKind::Log => u.pow(-1),
                            FuncKind::Sqrt => Expr::sqrt(u.clone()).pow(-1).scale(&Rational::new(1, 2)),
                        };
                        slow.push(Self::chain_term(t, idx, &outer, &du));
                    }
                    Atom::Sum(u) => {
                        if !u.0.syms.may_contain(v.id) {
                            continue;
                        }
                        let du = u.diff(v);
                        if du.is_zero() {
                            continue;
                        }
                        slow.push(Self::chain_term(t, idx, &Expr::one(), &du));
                    }
                }
            }
        }
        let base = Expr::from_terms(fast);
        if slow.is_empty() {
            base
        } else {
            slow.push(base);
            Expr::sum(slow)
        }
    }

    /// `coeff * exp * atom^(exp-1) * rest * outer * inner'` for factor `idx` of `t`.
    fn chain_term(t: &Term, idx: usize, outer: &Expr, inner_d: &Expr) -> Expr {
        let mut factors = t.mono.to_vec();
        let e = factors[idx].exp;
        factors[idx].exp -= 1;
        factors.retain(|f| f.exp != 0);
        let coeff = &t.coeff * &Rational::from_int(e as i64);
        let rest = Expr::from_factors(coeff, factors);
        &(&rest * outer) * inner_d
    }

    /// Simultaneous substitution of symbols.
    pub fn substitute(&self, map: &HashMap<Symbol, Expr>) -> Expr {
        if map.is_empty() || !map.keys().any(|s| self.0.syms.may_contain(s.id)) {
            return self.clone();
        }
        let mut parts = Vec::with_capacity(self.0.terms.len());
        for t in &self.0.terms {
            let mut acc = Expr::rational(t.coeff.clone());
            for f in t.mono.iter() {
                let base = match &f.atom {
                    Atom::Sym(s) => map.get(s).cloned().unwrap_or_else(|| Expr::symbol(s)),
                    Atom::Func(k, u) => Expr::func(*k, u.substitute(map)),
                    Atom::Sum(u) => u.substitute(map),
                };
                match base.checked_pow(f.exp as i64) {
                    Some(p) => acc = &acc * &p,
                    // Substitution made a denominator vanish; keep the atom.
                    None => acc = &acc * &Expr::from_factors(Rational::ONE, vec![f.clone()]),
                }
            }
            parts.push(acc);
        }
        Expr::sum(parts)
    }
}

fn eval_constant_func(kind: FuncKind, r: &Rational) -> Option<Rational> {
    match kind {
        FuncKind::Sin | FuncKind::Tan if r.is_zero() => Some(Rational::ZERO),
        FuncKind::Cos | FuncKind::Exp if r.is_zero() => Some(Rational::ONE),
        FuncKind::Log if r.is_one() => Some(Rational::ZERO),
        FuncKind::Sqrt => r.sqrt_exact(),
        _ => None,
    }
}

/// Push the normal form of `coeff * factors` (factors sorted and merged).
/// Cancel a sum atom against its own denominator. If the terms carrying
/// `S^-k` (for a sum atom `S`) are `M * r * S` once expanded, replace them by
/// `r * M * S^(1-k)`. Returns the new term list when something cancelled.
fn cancel_sum_quotient(terms: &[Term]) -> Option<Vec<Term>> {
    let mut seen: Vec<&Atom> = Vec::new();
    for t in terms {
        for f in t.mono.iter() {
            if f.exp < 0 && matches!(f.atom, Atom::Sum(_)) && !seen.contains(&&f.atom) {
                seen.push(&f.atom);
            }
        }
    }
    for atom in seen {
        let Atom::Sum(s) = atom else { unreachable!() };
        let (group, rest): (Vec<&Term>, Vec<&Term>) =
            terms.iter().partition(|t| t.mono.iter().any(|f| f.atom == *atom && f.exp < 0));
        if group.len() < s.0.terms.len() {
            continue;
        }
        // Common monomial: minimum exponent of every atom over the group.
        let mut common: Vec<Factor> = group[0].mono.to_vec();
        for t in &group[1..] {
            common.retain_mut(|c| match t.mono.iter().find(|f| f.atom == c.atom) {
                Some(f) => {
                    c.exp = c.exp.min(f.exp);
                    true
                }
                None => {
                    c.exp = c.exp.min(0);
                    c.exp != 0
                }
            });
        }
        let inverse: Vec<Factor> = common.iter().map(|f| Factor { atom: f.atom.clone(), exp: -f.exp }).collect();
        let mut quotient: Vec<Term> = group
            .iter()
            .map(|t| Term { coeff: t.coeff.clone(), mono: Arc::from(merge_factors(&t.mono, &inverse)) })
            .collect();
        quotient.sort_by(|a, b| a.mono.cmp(&b.mono));
        let target = &s.0.terms;
        if quotient.len() != target.len() {
            continue;
        }
        let ratio = &quotient[0].coeff / &target[0].coeff;
        let matches = quotient
            .iter()
            .zip(target.iter())
            .all(|(q, t)| q.mono == t.mono && q.coeff == &ratio * &t.coeff);
        if !matches {
            continue;
        }
        let mut out: Vec<Term> = rest.into_iter().cloned().collect();
        let mut factors = common;
        factors.push(Factor { atom: atom.clone(), exp: 1 });
        push_normalised(ratio, collect_factors(factors), &mut out);
        return Some(out);
    }
    None
}

fn push_normalised(coeff: Rational, factors: Vec<Factor>, out: &mut Vec<Term>) {
    if coeff.is_zero() {
        return;
    }
    match find_rewrite(&factors) {
        Rewrite::None => out.push(Term { coeff, mono: Arc::from(factors) }),
        Rewrite::ExpandSum(idx) => {
            let mut rest = factors;
            let f = rest.remove(idx);
            let Atom::Sum(s) = f.atom else { unreachable!() };
            let expanded = s.pow(f.exp as i64);
            append_product(coeff, rest, &expanded, out);
        }
        Rewrite::Sqrt(idx) => {
            let mut rest = factors;
            let e = rest[idx].exp;
            let Atom::Func(_, u) = rest[idx].atom.clone() else { unreachable!() };
            let (q, r) = (e.div_euclid(2), e.rem_euclid(2));
            if r == 0 {
                rest.remove(idx);
            } else {
                rest[idx].exp = r;
            }
            // sqrt(0) folds to 0 on construction, so u is nonzero here.
            let p = u.checked_pow(q as i64).expect("nonzero sqrt argument");
            append_product(coeff, rest, &p, out);
        }
        Rewrite::SinSquare(idx) => {
            let mut rest = factors;
            let Atom::Func(_, u) = rest[idx].atom.clone() else { unreachable!() };
            rest[idx].exp -= 2;
            rest.retain(|f| f.exp != 0);
            let c = Expr::cos(u);
            let one_minus = &Expr::one() - &(&c * &c);
            append_product(coeff, rest, &one_minus, out);
        }
        Rewrite::CosSquare(idx) => {
            let mut rest = factors;
            let Atom::Func(_, u) = rest[idx].atom.clone() else { unreachable!() };
            rest[idx].exp -= 2;
            rest.retain(|f| f.exp != 0);
            // s^e c^f -> s^e c^(f-2) - s^(e+2) c^(f-2); e + 2 <= 1 so no
            // sine rewrite fires on the second product.
            let sin_sq = [Factor { atom: Atom::Func(FuncKind::Sin, u), exp: 2 }];
            push_normalised(-&coeff, merge_factors(&rest, &sin_sq), out);
            push_normalised(coeff, rest, out);
        }
    }
}

/// Append `coeff * rest * e` to `out`.
fn append_product(coeff: Rational, rest: Vec<Factor>, e: &Expr, out: &mut Vec<Term>) {
    for t in e.terms() {
        let c = &coeff * &t.coeff;
        push_normalised(c, merge_factors(&rest, &t.mono), out);
    }
}

impl Expr {
    /// `Some((c, u))` when `self == c * (1 - cos(u)^2)`.
    fn as_one_minus_cos_sq(&self) -> Option<(Rational, Expr)> {
        let [a, b] = self.0.terms.as_slice() else { return None };
        let (konst, trig) = if a.mono.is_empty() { (a, b) } else { (b, a) };
        if !konst.mono.is_empty() || &konst.coeff + &trig.coeff != Rational::ZERO {
            return None;
        }
        match &*trig.mono {
            [Factor { atom: Atom::Func(FuncKind::Cos, u), exp: 2 }] => Some((konst.coeff.clone(), u.clone())),
            _ => None,
        }
    }
}

impl Add for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        // Both inputs are sorted; merge.
        let (a, b) = (&self.0.terms, &rhs.0.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].mono.cmp(&b[j].mono) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &a[i].coeff + &b[j].coeff;
                    if !c.is_zero() {
                        out.push(Term { coeff: c, mono: a[i].mono.clone() });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Expr::from_sorted_terms(out)
    }
}

impl Sub for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        self + &(-rhs)
    }
}

impl Mul for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        self.mul_impl(rhs)
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        self.scale(&Rational::from_int(-1))
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                (&self).$m(rhs)
            }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl From<i64> for Expr {
    fn from(v: i64) -> Self {
        Expr::int(v)
    }
}

impl From<&Symbol> for Expr {
    fn from(s: &Symbol) -> Self {
        Expr::symbol(s)
    }
}

impl Default for Expr {
    fn default() -> Self {
        Expr::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(id: u32, name: &str) -> Expr {
        Expr::symbol(&Symbol::new(id, name))
    }

    #[test]
    fn like_terms_cancel() {
        let t = sym(0, "t1");
        let e = &(&t.scale(&Rational::from_int(2)) - &t) - &t;
        assert!(e.is_zero());
    }

    #[test]
    fn products_distribute() {
        let (x, y, z) = (sym(0, "x"), sym(1, "y"), sym(2, "z"));
        let lhs = &(&x + &y) * &z;
        let rhs = &(&x * &z) + &(&y * &z);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn power_collection() {
        let x = sym(0, "x");
        let s = Expr::sin(x.clone());
        let q = &s.pow(2) * &s.pow(-1);
        assert_eq!(q, s);
        assert_eq!(&x.pow(3) * &x.pow(-3), Expr::one());
    }

    #[test]
    fn pythagorean_rules() {
        let x = sym(0, "x");
        let (s, c) = (Expr::sin(x.clone()), Expr::cos(x.clone()));
        assert_eq!(&(&s * &s) + &(&c * &c), Expr::one());
        // (1 - cos^2) / sin = sin
        let one_minus = &Expr::one() - &(&c * &c);
        assert_eq!(&one_minus * &s.pow(-1), s);
        // sin^-2 - cos^2 sin^-2 = 1
        let e = &s.pow(-2) - &(&c.pow(2) * &s.pow(-2));
        assert_eq!(e, Expr::one());
    }

    #[test]
    fn inverse_of_sine_square() {
        let x = sym(0, "x");
        let s2 = Expr::sin(x.clone()).pow(2);
        assert_eq!(s2.pow(-1), Expr::sin(x.clone()).pow(-2));
        let t = sym(1, "t");
        assert_eq!((&s2 * &t.scale(&Rational::from_int(3))).pow(-1), &Expr::sin(x).pow(-2) * &t.pow(-1).scale(&Rational::new(1, 3)));
    }

    #[test]
    fn negative_power_of_sum_is_normalised() {
        let x = sym(0, "x");
        let a = (&Expr::int(2) + &x.scale(&Rational::from_int(2))).pow(-1);
        let b = (&Expr::one() + &x).pow(-1).scale(&Rational::new(1, 2));
        assert_eq!(a, b);
    }

    #[test]
    fn sum_atom_with_common_factor() {
        let x = sym(0, "x");
        let e = &x + &x.pow(2); // x(1+x)
        let inv = e.pow(-1);
        assert_eq!(inv, &x.pow(-1) * &(&Expr::one() + &x).pow(-1));
        assert_eq!(&inv * &x, (&Expr::one() + &x).pow(-1));
    }

    #[test]
    fn derivative_rules() {
        let x = Symbol::new(0, "x");
        let xe = Expr::symbol(&x);
        let e = &Expr::sin(xe.clone()) * &xe.pow(2);
        let d = e.diff(&x);
        let expect = &(&Expr::cos(xe.clone()) * &xe.pow(2)) + &(&Expr::sin(xe.clone()) * &xe.scale(&Rational::from_int(2)));
        assert_eq!(d, expect);
        assert_eq!(Expr::exp(xe.scale(&Rational::from_int(2))).diff(&x), Expr::exp(xe.scale(&Rational::from_int(2))).scale(&Rational::from_int(2)));
        assert_eq!(Expr::log(xe.clone()).diff(&x), xe.pow(-1));
    }

    #[test]
    fn odd_even_trig_and_tan() {
        let x = sym(0, "x");
        assert_eq!(Expr::sin(-&x), -Expr::sin(x.clone()));
        assert_eq!(Expr::cos(-&x), Expr::cos(x.clone()));
        assert_eq!(Expr::tan(x.clone()), &Expr::sin(x.clone()) * &Expr::cos(x.clone()).pow(-1));
        assert_eq!(Expr::log(Expr::exp(x.clone())), x);
        assert_eq!(Expr::sqrt(x.clone()).pow(2), x);
    }
}

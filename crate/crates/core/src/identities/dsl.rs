//! A small index notation for tensor identities.
//!
//! ```text
//! identity := sum ('=' sum)?
//! sum      := ('+'|'-')? product (('+'|'-') product)*
//! product  := factor ('*' factor)*
//! factor   := integer | tensor | ('alt'|'cyc') '(' index (',' index)* ')' '{' sum '}' | '(' sum ')'
//! tensor   := name '[' index (',' index)* (';' index)* ']'
//! index    := letter | '(' letter letter ')'
//! ```
//!
//! Letters `a`–`h` are temporal, every other lowercase letter is spatial; a
//! pair `(d l)` is the vertical index with temporal part `d` and spatial part
//! `l`. Indices after `;` are covariant derivative directions, applied left
//! to right. `alt(x,y){E}` is `E − E[x↔y]` and `cyc(x,y,z){E}` is the sum of
//! the three cyclic relabelings. A letter that occurs once in a term is free,
//! twice is summed.
//!
//! Names, by number of slots before `;`:
//! * `T`, `P`, `R`, `S`, `C` with 3 slots: torsion `𝕋^F_{BC}`;
//! * `chi`, `R`, `P`, `S` with 4 slots: curvature `ℝ^A_{FBC}`, negated when
//!   the first slot is vertical;
//! * `X` with 1 slot: the test vector field; `p` with 1 slot: `p^a_i ∂/∂p^a_i`;
//! * `B1` with 4 slots `(F,P,Q,S)` and `B2` with 5 slots `(F,U,P,Q,S)`: the
//!   generic Bianchi residuals.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown tensor `{name}` with {slots} slots")]
    UnknownTensor { name: String, slots: usize },
    #[error("vertical pair ({0} {1}) must be (temporal spatial)")]
    BadPair(char, char),
    #[error("letter `{0}` occurs more than twice in one term")]
    TooManyOccurrences(char),
    #[error("terms disagree on free indices: {0:?} vs {1:?}")]
    FreeMismatch(Vec<char>, Vec<char>),
    #[error("relabeling lists must have matching shapes")]
    BadRelabel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Idx {
    One(char),
    Pair(char, char),
}

impl Idx {
    fn letters(self) -> impl Iterator<Item = char> {
        let (a, b) = match self {
            Idx::One(a) => (a, None),
            Idx::Pair(a, b) => (a, Some(b)),
        };
        std::iter::once(a).chain(b)
    }

    fn rename(self, map: &HashMap<char, char>) -> Idx {
        let r = |c: char| *map.get(&c).unwrap_or(&c);
        match self {
            Idx::One(a) => Idx::One(r(a)),
            Idx::Pair(a, b) => Idx::Pair(r(a), r(b)),
        }
    }
}

pub fn is_temporal(c: char) -> bool {
    ('a'..='h').contains(&c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Torsion,
    Curvature,
    Field,
    Liouville,
    B1,
    B2,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub kind: Kind,
    pub name: String,
    /// Base slots followed by derivative directions.
    pub idx: Vec<Idx>,
    pub derivs: usize,
    pub sign: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coef: i64,
    pub factors: Vec<Factor>,
    pub dummies: Vec<char>,
}

/// A parsed identity, expanded into a flat sum `Σ coef · Π factors` equal to
/// LHS − RHS.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identity {
    pub id: String,
    pub source: String,
    pub free: Vec<char>,
    pub terms: Vec<Term>,
}

type RawTerm = (i64, Vec<Factor>);

struct P<'s> {
    s: &'s [u8],
    pos: usize,
}

impl<'s> P<'s> {
    fn err<T>(&self, msg: &str) -> Result<T, DslError> {
        Err(DslError::Syntax { offset: self.pos, message: msg.to_string() })
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), DslError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(&format!("expected `{}`", c as char))
        }
    }

    fn word(&mut self) -> String {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.s[start..self.pos]).into_owned()
    }

    fn letter(&mut self) -> Result<char, DslError> {
        match self.peek() {
            Some(c) if c.is_ascii_lowercase() => {
                self.pos += 1;
                Ok(c as char)
            }
            _ => self.err("expected an index letter"),
        }
    }

    fn index(&mut self) -> Result<Idx, DslError> {
        if self.eat(b'(') {
            let a = self.letter()?;
            let b = self.letter()?;
            self.expect(b')')?;
            if !is_temporal(a) || is_temporal(b) {
                return Err(DslError::BadPair(a, b));
            }
            Ok(Idx::Pair(a, b))
        } else {
            self.letter()
                .map(Idx::One)
        }
    }

    fn sum(&mut self) -> Result<Vec<RawTerm>, DslError> {
        let mut out = Vec::new();
        let mut sign = if self.eat(b'-') {
            -1
        } else {
            self.eat(b'+');
            1
        };
        loop {
            for (c, f) in self.product()? {
                out.push((sign * c, f));
            }
            if self.eat(b'+') {
                sign = 1;
            } else if self.eat(b'-') {
                sign = -1;
            } else {
                return Ok(out);
            }
        }
    }

    fn product(&mut self) -> Result<Vec<RawTerm>, DslError> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            let rhs = self.factor()?;
            let mut next = Vec::with_capacity(acc.len() * rhs.len());
            for (c1, f1) in &acc {
                for (c2, f2) in &rhs {
                    let mut f = f1.clone();
                    f.extend(f2.iter().cloned());
                    next.push((c1 * c2, f));
                }
            }
            acc = next;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Vec<RawTerm>, DslError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let s = self.sum()?;
                self.expect(b')')?;
                Ok(s)
            }
            Some(c) if c.is_ascii_digit() => {
                let w = self.word();
                let v: i64 = match w.parse() {
                    Ok(v) => v,
                    Err(_) => return self.err("bad integer"),
                };
                Ok(if v == 0 { Vec::new() } else { vec![(v, Vec::new())] })
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let name = self.word();
                if (name == "alt" || name == "cyc") && self.peek() == Some(b'(') {
                    return self.relabel(&name);
                }
                if !self.eat(b'[') {
                    self.pos = start;
                    return self.err("expected `[` after tensor name");
                }
                let mut idx = vec![self.index()?];
                while self.eat(b',') {
                    idx.push(self.index()?);
                }
                let slots = idx.len();
                while self.eat(b';') {
                    idx.push(self.index()?);
                }
                self.expect(b']')?;
                let (kind, sign) = resolve(&name, &idx[..slots])?;
                Ok(vec![(1, vec![Factor { kind, name, derivs: idx.len() - slots, idx, sign }])])
            }
            _ => self.err("expected a factor"),
        }
    }

    fn relabel(&mut self, op: &str) -> Result<Vec<RawTerm>, DslError> {
        self.expect(b'(')?;
        let mut list = vec![self.index()?];
        while self.eat(b',') {
            list.push(self.index()?);
        }
        self.expect(b')')?;
        self.expect(b'{')?;
        let body = self.sum()?;
        self.expect(b'}')?;
        let shape = |i: &Idx| matches!(i, Idx::Pair(..));
        if list.iter().any(|i| shape(i) != shape(&list[0])) {
            return Err(DslError::BadRelabel);
        }
        let letters: Vec<Vec<char>> = list.iter().map(|i| i.letters().collect()).collect();
        // Permutation k sends list[j] to list[(j + k) % len].
        let perm = |k: usize| -> HashMap<char, char> {
            let len = letters.len();
            let mut map = HashMap::new();
            for j in 0..len {
                for (x, y) in letters[j].iter().zip(&letters[(j + k) % len]) {
                    map.insert(*x, *y);
                }
            }
            map
        };
        let apply = |map: &HashMap<char, char>, sign: i64| -> Vec<RawTerm> {
            body.iter()
                .map(|(c, fs)| {
                    let fs = fs
                        .iter()
                        .map(|f| {
                            let idx: Vec<Idx> = f.idx.iter().map(|i| i.rename(map)).collect();
                            let (kind, s) = resolve(&f.name, &idx[..idx.len() - f.derivs]).expect("resolved before");
                            Factor { kind, sign: s, idx, ..f.clone() }
                        })
                        .collect();
                    (sign * c, fs)
                })
                .collect()
        };
        let mut out = Vec::new();
        match op {
            "alt" => {
                if list.len() != 2 {
                    return Err(DslError::BadRelabel);
                }
                out.extend(apply(&HashMap::new(), 1));
                out.extend(apply(&perm(1), -1));
            }
            _ => {
                for k in 0..list.len() {
                    out.extend(apply(&perm(k), 1));
                }
            }
        }
        Ok(out)
    }
}

fn resolve(name: &str, slots: &[Idx]) -> Result<(Kind, i64), DslError> {
    let unknown = || DslError::UnknownTensor { name: name.to_string(), slots: slots.len() };
    Ok(match (name, slots.len()) {
        ("T" | "P" | "R" | "S" | "C", 3) => (Kind::Torsion, 1),
        ("chi" | "R" | "P" | "S", 4) => {
            let sign = if matches!(slots[0], Idx::Pair(..)) { -1 } else { 1 };
            (Kind::Curvature, sign)
        }
        ("X", 1) => (Kind::Field, 1),
        ("p", 1) => (Kind::Liouville, 1),
        ("B1", 4) => (Kind::B1, 1),
        ("B2", 5) => (Kind::B2, 1),
        _ => return Err(unknown()),
    })
}

/// Parse and expand an identity.
pub fn parse_identity(id: &str, text: &str) -> Result<Identity, DslError> {
    let mut p = P { s: text.as_bytes(), pos: 0 };
    let mut raw = p.sum()?;
    if p.eat(b'=') {
        for (c, f) in p.sum()? {
            raw.push((-c, f));
        }
    }
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    let mut free: Option<Vec<char>> = None;
    let mut terms = Vec::new();
    for (coef, factors) in raw {
        let mut count: BTreeMap<char, usize> = BTreeMap::new();
        let mut order = Vec::new();
        for f in &factors {
            for i in &f.idx {
                for l in i.letters() {
                    let e = count.entry(l).or_insert(0);
                    if *e == 0 {
                        order.push(l);
                    }
                    *e += 1;
                }
            }
        }
        if let Some((&l, _)) = count.iter().find(|(_, &c)| c > 2) {
            return Err(DslError::TooManyOccurrences(l));
        }
        let this_free: Vec<char> = order.iter().copied().filter(|l| count[l] == 1).collect();
        let dummies: Vec<char> = order.iter().copied().filter(|l| count[l] == 2).collect();
        match &free {
            None => free = Some(this_free),
            Some(fr) => {
                let (mut a, mut b) = (fr.clone(), this_free.clone());
                a.sort_unstable();
                b.sort_unstable();
                if a != b {
                    return Err(DslError::FreeMismatch(fr.clone(), this_free));
                }
            }
        }
        terms.push(Term { coef, factors, dummies });
    }
    Ok(Identity { id: id.to_string(), source: text.to_string(), free: free.unwrap_or_default(), terms })
}

/// Numeric values for the tensors named in identities.
pub trait Tensors {
    fn m(&self) -> usize;
    fn n(&self) -> usize;
    fn value(&self, kind: Kind, idx: &[usize]) -> crate::symbolic::Expr;
}

pub fn letter_range(c: char, m: usize, n: usize) -> usize {
    if is_temporal(c) {
        m
    } else {
        n
    }
}

fn unified(i: Idx, val: &HashMap<char, usize>, m: usize, n: usize) -> usize {
    match i {
        Idx::One(c) if is_temporal(c) => val[&c],
        Idx::One(c) => m + val[&c],
        Idx::Pair(a, b) => m + n + val[&a] * n + val[&b],
    }
}

impl Identity {
    /// Every assignment of the free letters, in row-major order of `free`.
    pub fn assignments(&self, m: usize, n: usize) -> Vec<Vec<usize>> {
        let dims: Vec<usize> = self.free.iter().map(|&c| letter_range(c, m, n)).collect();
        let mut out = Vec::new();
        crate::tensor::for_each_index(&dims, |x| out.push(x.to_vec()));
        out
    }

    /// Per-term values (summed over dummies) at one free assignment.
    pub fn eval_terms(&self, t: &dyn Tensors, free_vals: &[usize]) -> Vec<crate::symbolic::Expr> {
        use crate::symbolic::{Expr, Rational};
        let (m, n) = (t.m(), t.n());
        let mut val: HashMap<char, usize> = self.free.iter().copied().zip(free_vals.iter().copied()).collect();
        let mut out = Vec::with_capacity(self.terms.len());
        for term in &self.terms {
            let dims: Vec<usize> = term.dummies.iter().map(|&c| letter_range(c, m, n)).collect();
            let mut parts = Vec::new();
            crate::tensor::for_each_index(&dims, |d| {
                for (c, v) in term.dummies.iter().zip(d) {
                    val.insert(*c, *v);
                }
                let mut prod = Expr::rational(Rational::from_int(term.coef));
                for f in &term.factors {
                    let idx: Vec<usize> = f.idx.iter().map(|&i| unified(i, &val, m, n)).collect();
                    let v = t.value(f.kind, &idx);
                    if v.is_zero() {
                        return;
                    }
                    prod = &prod * &v;
                    if f.sign < 0 {
                        prod = -prod;
                    }
                }
                parts.push(prod);
            });
            out.push(Expr::sum(parts));
        }
        out
    }
}

//! Plain-text (re-parseable) and LaTeX rendering of canonical expressions.

use std::fmt::{self, Write};

use super::expr::{Atom, Expr, Factor, Term};

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in terms.iter().enumerate() {
            let neg = t.coeff.is_negative();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            write_term(f, t, i == 0 && neg)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, t: &Term, leading_minus: bool) -> fmt::Result {
    let c = t.coeff.abs();
    let (num, den): (Vec<&Factor>, Vec<&Factor>) = t.mono.iter().partition(|x| x.exp > 0);
    let mut first = true;
    if !c.is_one() || num.is_empty() {
        write!(f, "{c}")?;
        first = false;
    } else if leading_minus && num[0].exp != 1 {
        // `-x^2` would read as `(-x)^2`.
        f.write_str("1")?;
        first = false;
    }
    for x in num {
        if !first {
            f.write_str("*")?;
        }
        first = false;
        write_factor(f, &x.atom, x.exp)?;
    }
    for x in den {
        f.write_str("/")?;
        write_factor(f, &x.atom, -x.exp)?;
    }
    Ok(())
}

fn write_factor(f: &mut fmt::Formatter<'_>, atom: &Atom, exp: i32) -> fmt::Result {
    match atom {
        Atom::Sym(s) => f.write_str(s.name())?,
        Atom::Func(k, e) => write!(f, "{}({e})", k.name())?,
        Atom::Sum(e) => write!(f, "({e})")?,
    }
    if exp != 1 {
        write!(f, "^{exp}")?;
    }
    Ok(())
}

/// LaTeX name for a coordinate: `t1 -> t^{1}`, `p2_1 -> p^{2}_{1}`.
pub fn latex_symbol(name: &str) -> String {
    if let Some(rest) = name.strip_prefix('p') {
        if let Some((a, i)) = rest.split_once('_') {
            if !a.is_empty() && a.bytes().all(|b| b.is_ascii_digit()) && !i.is_empty() && i.bytes().all(|b| b.is_ascii_digit()) {
                return format!("p^{{{a}}}_{{{i}}}");
            }
        }
    }
    let split = name.trim_end_matches(|c: char| c.is_ascii_digit());
    let head = match split {
        "alpha" | "beta" | "gamma" | "delta" | "theta" | "phi" | "psi" | "rho" | "sigma" | "tau" | "varphi"
        | "vartheta" | "chi" | "eta" | "lambda" | "mu" | "nu" | "xi" | "omega" => format!("\\{split}"),
        _ => split.to_string(),
    };
    if split.len() < name.len() && !split.is_empty() {
        format!("{head}^{{{}}}", &name[split.len()..])
    } else {
        head
    }
}

impl Expr {
    pub fn to_latex(&self) -> String {
        let terms = self.terms();
        if terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, t) in terms.iter().enumerate() {
            let neg = t.coeff.is_negative();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&latex_term(t));
        }
        out
    }
}

fn latex_term(t: &Term) -> String {
    let c = t.coeff.abs();
    let (num, den): (Vec<&Factor>, Vec<&Factor>) = t.mono.iter().partition(|x| x.exp > 0);
    let mut top = String::new();
    let mut bottom = String::new();
    if !c.is_integer() {
        let _ = write!(bottom, "{}", c.denom_string());
    }
    let cn = c.numer_string();
    if cn != "1" || num.is_empty() {
        top.push_str(&cn);
    }
    for x in &num {
        if !top.is_empty() {
            top.push(' ');
        }
        top.push_str(&latex_factor(&x.atom, x.exp));
    }
    for x in &den {
        if !bottom.is_empty() {
            bottom.push(' ');
        }
        bottom.push_str(&latex_factor(&x.atom, -x.exp));
    }
    if top.is_empty() {
        top.push('1');
    }
    if bottom.is_empty() {
        top
    } else {
        format!("\\frac{{{top}}}{{{bottom}}}")
    }
}

fn latex_factor(atom: &Atom, exp: i32) -> String {
    let base = match atom {
        Atom::Sym(s) => latex_symbol(s.name()),
        Atom::Func(k, e) => {
            let name = match k.name() {
                "sqrt" => return sqrt_latex(e, exp),
                n => n,
            };
            if exp != 1 {
                return format!("\\{name}^{{{exp}}}\\left({}\\right)", e.to_latex());
            }
            format!("\\{name}\\left({}\\right)", e.to_latex())
        }
        Atom::Sum(e) => format!("\\left({}\\right)", e.to_latex()),
    };
    if exp != 1 {
        format!("{{{base}}}^{{{exp}}}")
    } else {
        base
    }
}

fn sqrt_latex(e: &Expr, exp: i32) -> String {
    let s = format!("\\sqrt{{{}}}", e.to_latex());
    if exp != 1 {
        format!("{{{s}}}^{{{exp}}}")
    } else {
        s
    }
}

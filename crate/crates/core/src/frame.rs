//! The adapted frame `Y_A = (δ/δt^a, δ/δx^i, ∂/∂p^a_i)` with unified indices.
//!
//! A unified index runs over `0..m` (temporal), `m..m+n` (spatial) and
//! `m+n..m+n+mn` (vertical, `(a, i) -> m + n + a*n + i`).

use std::ops::Range;

use crate::chart::{JetChart, NonlinearConnection};
use crate::connections::NLinearConnection;
use crate::dtensor::IndexClass;
use crate::symbolic::Expr;

#[derive(Debug, Clone)]
pub struct Frame {
    chart: JetChart,
    nl: NonlinearConnection,
    d: usize,
    /// `Γ^F_{BC}` at `(F*d + B)*d + C`.
    gamma: Vec<Expr>,
    /// `R^F_{BC}` with `[Y_B, Y_C] = R^F_{BC} Y_F`, same layout.
    bracket: Vec<Expr>,
}

impl Frame {
    pub fn new(chart: &JetChart, conn: &NLinearConnection) -> Self {
        let d = chart.dim();
        let (m, n) = (chart.m(), chart.n());
        let mut gamma = vec![Expr::zero(); d * d * d];
        let mut frame = Frame { chart: chart.clone(), nl: conn.nl.clone(), d, gamma: Vec::new(), bracket: Vec::new() };
        for c in 0..d {
            for f in 0..d {
                for b in 0..d {
                    let (cf, cb) = (frame.class_of(f), frame.class_of(b));
                    if cf != cb {
                        continue;
                    }
                    let (lf, lb) = (frame.local(f), frame.local(b));
                    let g = match (cf, frame.class_of(c)) {
                        (IndexClass::Temporal, IndexClass::Temporal) => conn.a_t.get(&[lf, lb, c]).clone(),
                        (IndexClass::Spatial, IndexClass::Temporal) => conn.a_s.get(&[lf, lb, c]).clone(),
                        (IndexClass::Vertical, IndexClass::Temporal) => {
                            -conn.a_v.get(&[lf / n, lf % n, lb / n, lb % n, c])
                        }
                        (IndexClass::Temporal, IndexClass::Spatial) => conn.h_t.get(&[lf, lb, c - m]).clone(),
                        (IndexClass::Spatial, IndexClass::Spatial) => conn.h_s.get(&[lf, lb, c - m]).clone(),
                        (IndexClass::Vertical, IndexClass::Spatial) => {
                            -conn.h_v.get(&[lf / n, lf % n, lb / n, lb % n, c - m])
                        }
                        (cls, IndexClass::Vertical) => {
                            let lc = frame.local(c);
                            let (ca, ck) = (lc / n, lc % n);
                            match cls {
                                IndexClass::Temporal => conn.c_t.get(&[lf, lb, ca, ck]).clone(),
                                IndexClass::Spatial => conn.c_s.get(&[lf, lb, ca, ck]).clone(),
                                IndexClass::Vertical => -conn.c_v.get(&[lf / n, lf % n, lb / n, lb % n, ca, ck]),
                            }
                        }
                    };
                    gamma[(f * d + b) * d + c] = g;
                }
            }
        }
        frame.gamma = gamma;
        // Y_B = ∂_B + c_B^{(f,r)} ∂/∂p^f_r, so [Y_B, Y_C] only has vertical part.
        let coeff = |b: usize, v: usize| -> Expr {
            let (f, r) = (v / n, v % n);
            match frame.class_of(b) {
                IndexClass::Temporal => -conn.nl.n1.get(f, r, b),
                IndexClass::Spatial => -conn.nl.n2.get(f, r, b - m),
                IndexClass::Vertical => Expr::zero(),
            }
        };
        let mut bracket = vec![Expr::zero(); d * d * d];
        for b in 0..d {
            for c in 0..d {
                if b == c {
                    continue;
                }
                for v in 0..m * n {
                    let e = &frame.y(b, &coeff(c, v)) - &frame.y(c, &coeff(b, v));
                    bracket[((m + n + v) * d + b) * d + c] = e;
                }
            }
        }
        frame.bracket = bracket;
        frame
    }

    pub fn chart(&self) -> &JetChart {
        &self.chart
    }

    pub fn nonlinear(&self) -> &NonlinearConnection {
        &self.nl
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn class_of(&self, u: usize) -> IndexClass {
        let (m, n) = (self.chart.m(), self.chart.n());
        if u < m {
            IndexClass::Temporal
        } else if u < m + n {
            IndexClass::Spatial
        } else {
            IndexClass::Vertical
        }
    }

    /// Position of `u` inside its class block.
    pub fn local(&self, u: usize) -> usize {
        u - self.block(self.class_of(u)).start
    }

    pub fn block(&self, class: IndexClass) -> Range<usize> {
        let (m, n) = (self.chart.m(), self.chart.n());
        match class {
            IndexClass::Temporal => 0..m,
            IndexClass::Spatial => m..m + n,
            IndexClass::Vertical => m + n..m + n + m * n,
        }
    }

    pub fn unified(&self, class: IndexClass, local: usize) -> usize {
        self.block(class).start + local
    }

    pub fn gamma(&self, f: usize, b: usize, c: usize) -> &Expr {
        &self.gamma[(f * self.d + b) * self.d + c]
    }

    pub fn bracket(&self, f: usize, b: usize, c: usize) -> &Expr {
        &self.bracket[(f * self.d + b) * self.d + c]
    }

    /// `Y_c(e)`.
    pub fn y(&self, c: usize, e: &Expr) -> Expr {
        let m = self.chart.m();
        match self.class_of(c) {
            IndexClass::Temporal => self.nl.delta_dt(&self.chart, e, c),
            IndexClass::Spatial => self.nl.delta_dx(&self.chart, e, c - m),
            IndexClass::Vertical => {
                let v = self.local(c);
                e.diff(self.chart.p(v / self.chart.n(), v % self.chart.n()))
            }
        }
    }
}

/// One slot of a tensor whose local indices map to unified indices
/// `start..start+len`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct SlotRange {
    pub start: usize,
    pub len: usize,
    pub contra: bool,
}

/// Component `idx` of the covariant derivative along unified direction `e`,
/// reading the undifferentiated components through `get`.
pub(crate) fn deriv_entry(
    frame: &Frame,
    slots: &[SlotRange],
    get: &dyn Fn(&[usize]) -> Expr,
    idx: &[usize],
    e: usize,
) -> Expr {
    let mut parts = vec![frame.y(e, &get(idx))];
    let mut probe = idx.to_vec();
    for (s, slot) in slots.iter().enumerate() {
        let u = slot.start + idx[s];
        let block = frame.block(frame.class_of(u));
        for yu in block {
            let coef = if slot.contra { frame.gamma(u, yu, e) } else { frame.gamma(yu, u, e) };
            if coef.is_zero() {
                continue;
            }
            probe[s] = yu - slot.start;
            let t = get(&probe);
            if t.is_zero() {
                continue;
            }
            let prod = &t * coef;
            parts.push(if slot.contra { prod } else { -prod });
        }
        probe[s] = idx[s];
    }
    Expr::sum(parts)
}

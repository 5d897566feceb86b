//! Distinguished tensors with typed index slots and the three covariant
//! derivatives of an N-linear connection.

use crate::frame::{deriv_entry, Frame, SlotRange};
use crate::symbolic::Expr;
use crate::tensor::DenseArray;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndexClass {
    Temporal,
    Spatial,
    Vertical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variance {
    Contravariant,
    Covariant,
}

/// A vertical slot ranges over pairs `(a, i)` flattened to `a*n + i`.
/// Contravariant vertical components read `X^{(a)}_{(i)}`, covariant ones
/// `ω^{(i)}_{(a)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IndexSlot {
    pub class: IndexClass,
    pub variance: Variance,
}

impl IndexSlot {
    pub const fn new(class: IndexClass, variance: Variance) -> Self {
        IndexSlot { class, variance }
    }

    pub const fn up(class: IndexClass) -> Self {
        Self::new(class, Variance::Contravariant)
    }

    pub const fn down(class: IndexClass) -> Self {
        Self::new(class, Variance::Covariant)
    }

    pub fn range(&self, m: usize, n: usize) -> usize {
        match self.class {
            IndexClass::Temporal => m,
            IndexClass::Spatial => n,
            IndexClass::Vertical => m * n,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DTensor {
    slots: Vec<IndexSlot>,
    comps: DenseArray,
}

impl DTensor {
    /// Panics if the component array does not match the signature.
    pub fn new(m: usize, n: usize, slots: Vec<IndexSlot>, comps: DenseArray) -> Self {
        let dims: Vec<usize> = slots.iter().map(|s| s.range(m, n)).collect();
        assert_eq!(comps.dims(), dims.as_slice(), "component shape does not match signature");
        DTensor { slots, comps }
    }

    pub fn from_fn(m: usize, n: usize, slots: Vec<IndexSlot>, f: impl FnMut(&[usize]) -> Expr) -> Self {
        let dims: Vec<usize> = slots.iter().map(|s| s.range(m, n)).collect();
        DTensor { comps: DenseArray::from_fn(&dims, f), slots }
    }

    pub fn scalar(e: Expr) -> Self {
        DTensor { slots: Vec::new(), comps: DenseArray::from_fn(&[], |_| e.clone()) }
    }

    pub fn slots(&self) -> &[IndexSlot] {
        &self.slots
    }

    pub fn components(&self) -> &DenseArray {
        &self.comps
    }

    pub fn get(&self, idx: &[usize]) -> &Expr {
        self.comps.get(idx)
    }

    fn slot_ranges(&self, frame: &Frame) -> Vec<SlotRange> {
        self.slots
            .iter()
            .map(|s| {
                let b = frame.block(s.class);
                SlotRange { start: b.start, len: b.len(), contra: s.variance == Variance::Contravariant }
            })
            .collect()
    }

    /// Covariant derivative along `class`; the new covariant slot is appended.
    pub fn cov_deriv(&self, frame: &Frame, class: IndexClass) -> DTensor {
        let ranges = self.slot_ranges(frame);
        let dir = frame.block(class);
        let mut slots = self.slots.clone();
        slots.push(IndexSlot::down(class));
        let mut dims = self.comps.dims().to_vec();
        dims.push(dir.len());
        let get = |idx: &[usize]| self.comps.get(idx).clone();
        let comps = DenseArray::from_fn(&dims, |idx| {
            let (head, last) = idx.split_at(idx.len() - 1);
            deriv_entry(frame, &ranges, &get, head, dir.start + last[0])
        });
        DTensor { slots, comps }
    }
}

/// `T_{/g}`: derivative along `δ/δt^g` with the A-blocks.
pub fn cov_deriv_h_t(t: &DTensor, frame: &Frame) -> DTensor {
    t.cov_deriv(frame, IndexClass::Temporal)
}

/// `T_{|k}`: derivative along `δ/δx^k` with the H-blocks.
pub fn cov_deriv_h_m(t: &DTensor, frame: &Frame) -> DTensor {
    t.cov_deriv(frame, IndexClass::Spatial)
}

/// `T|^{(k)}_{(c)}`: derivative along `∂/∂p^c_k` with the C-blocks.
pub fn cov_deriv_v(t: &DTensor, frame: &Frame) -> DTensor {
    t.cov_deriv(frame, IndexClass::Vertical)
}

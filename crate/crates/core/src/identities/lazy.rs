//! Lazily evaluated tensors over unified frame indices, with memoized
//! repeated covariant derivatives.

use std::cell::RefCell;
use std::collections::HashMap;

use crate::frame::{deriv_entry, Frame, SlotRange};
use crate::symbolic::Expr;

type Base<'a> = Box<dyn Fn(&[usize]) -> Expr + 'a>;

/// A tensor whose slots all range over `0..D`. Derivative slots are appended
/// after the `contra.len()` base slots; an index of length `rank + k` asks
/// for the `k`-th iterated covariant derivative.
pub struct LazyTensor<'a> {
    frame: &'a Frame,
    contra: Vec<bool>,
    base: Base<'a>,
    cache: RefCell<HashMap<Vec<usize>, Expr>>,
}

impl<'a> LazyTensor<'a> {
    pub fn new(frame: &'a Frame, contra: Vec<bool>, base: impl Fn(&[usize]) -> Expr + 'a) -> Self {
        LazyTensor { frame, contra, base: Box::new(base), cache: RefCell::new(HashMap::new()) }
    }

    pub fn rank(&self) -> usize {
        self.contra.len()
    }

    pub fn get(&self, idx: &[usize]) -> Expr {
        assert!(idx.len() >= self.rank(), "too few indices");
        if let Some(e) = self.cache.borrow().get(idx) {
            return e.clone();
        }
        let e = if idx.len() == self.rank() {
            (self.base)(idx)
        } else {
            let d = self.frame.dim();
            let slots: Vec<SlotRange> = (0..idx.len() - 1)
                .map(|s| SlotRange { start: 0, len: d, contra: s < self.rank() && self.contra[s] })
                .collect();
            let (head, last) = idx.split_at(idx.len() - 1);
            deriv_entry(self.frame, &slots, &|j: &[usize]| self.get(j), head, last[0])
        };
        self.cache.borrow_mut().insert(idx.to_vec(), e.clone());
        e
    }
}

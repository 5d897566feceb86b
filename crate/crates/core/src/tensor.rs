//! Dense row-major arrays of expressions.

use crate::symbolic::Expr;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseArray {
    dims: Vec<usize>,
    data: Vec<Expr>,
}

impl DenseArray {
    pub fn zeros(dims: &[usize]) -> Self {
        DenseArray { dims: dims.to_vec(), data: vec![Expr::zero(); dims.iter().product()] }
    }

    /// Fill by calling `f` on every multi-index in row-major order.
    pub fn from_fn(dims: &[usize], mut f: impl FnMut(&[usize]) -> Expr) -> Self {
        let mut data = Vec::with_capacity(dims.iter().product());
        for_each_index(dims, |idx| data.push(f(idx)));
        DenseArray { dims: dims.to_vec(), data }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn rank(&self) -> usize {
        self.dims.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn offset(&self, idx: &[usize]) -> usize {
        assert_eq!(idx.len(), self.dims.len(), "wrong number of indices");
        let mut o = 0;
        for (i, (&x, &d)) in idx.iter().zip(&self.dims).enumerate() {
            assert!(x < d, "index {x} out of range {d} in slot {i}");
            o = o * d + x;
        }
        o
    }

    pub fn get(&self, idx: &[usize]) -> &Expr {
        &self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], e: Expr) {
        let o = self.offset(idx);
        self.data[o] = e;
    }

    pub fn data(&self) -> &[Expr] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Expr::is_zero)
    }

    /// `(index, entry)` pairs in row-major order.
    pub fn indexed(&self) -> Vec<(Vec<usize>, &Expr)> {
        let mut out = Vec::with_capacity(self.data.len());
        let mut k = 0;
        for_each_index(&self.dims, |idx| {
            out.push((idx.to_vec(), &self.data[k]));
            k += 1;
        });
        out
    }

    pub fn map(&self, f: impl Fn(&Expr) -> Expr) -> Self {
        DenseArray { dims: self.dims.clone(), data: self.data.iter().map(f).collect() }
    }
}

/// Visit every multi-index of the box `dims` in row-major order.
pub fn for_each_index(dims: &[usize], mut f: impl FnMut(&[usize])) {
    if dims.iter().any(|&d| d == 0) {
        return;
    }
    let mut idx = vec![0; dims.len()];
    loop {
        f(&idx);
        let mut k = dims.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < dims[k] {
                break;
            }
            idx[k] = 0;
        }
    }
}

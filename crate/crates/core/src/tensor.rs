//! Symmetric multilinear forms stored on sorted multi-indices.
//!
//! A [`SymTensor`] of order `k` on a `d`-dimensional space keeps one
//! coefficient per non-decreasing index tuple; symmetry is therefore
//! structural and cannot be violated by construction. Evaluation extends
//! the coefficients multilinearly.

use crate::rational::Rational;
use num::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("tensor key {0:?} does not have length {1}")]
    KeyLength(Vec<usize>, usize),
    #[error("tensor key {0:?} is not sorted ascending")]
    UnsortedKey(Vec<usize>),
    #[error("tensor index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("duplicate tensor key {0:?}")]
    DuplicateKey(Vec<usize>),
    #[error("tensor order must be at least 1")]
    ZeroOrder,
    #[error("tensor dimension must be at least 1")]
    ZeroDim,
}

/// Symmetric `order`-linear form on a `dim`-dimensional rational space.
/// Keys are sorted index tuples; absent keys mean coefficient zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymTensor {
    dim: usize,
    order: usize,
    coeffs: BTreeMap<Vec<usize>, Rational>,
}

impl SymTensor {
    /// Builds a tensor from `(sorted key, coefficient)` pairs. Zero
    /// coefficients are dropped, so equal tensors compare equal.
    pub fn new(
        dim: usize,
        order: usize,
        entries: impl IntoIterator<Item = (Vec<usize>, Rational)>,
    ) -> Result<Self, TensorError> {
        if order == 0 {
            return Err(TensorError::ZeroOrder);
        }
        if dim == 0 {
            return Err(TensorError::ZeroDim);
        }
        let mut coeffs = BTreeMap::new();
        for (key, value) in entries {
            if key.len() != order {
                return Err(TensorError::KeyLength(key, order));
            }
            if key.windows(2).any(|w| w[0] > w[1]) {
                return Err(TensorError::UnsortedKey(key));
            }
            if let Some(&index) = key.iter().find(|&&i| i >= dim) {
                return Err(TensorError::IndexOutOfRange { index, dim });
            }
            if coeffs.contains_key(&key) {
                return Err(TensorError::DuplicateKey(key));
            }
            if !value.is_zero() {
                coeffs.insert(key, value);
            }
        }
        Ok(SymTensor { dim, order, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, &Rational)> {
        self.coeffs.iter()
    }

    /// Coefficient on an arbitrary basis tuple (sorted internally).
    pub fn coeff(&self, indices: &[usize]) -> Rational {
        debug_assert_eq!(indices.len(), self.order);
        let mut key = indices.to_vec();
        key.sort_unstable();
        self.coeffs.get(&key).cloned().unwrap_or_else(Rational::zero)
    }

    /// Multilinear evaluation on arbitrary rational vectors.
    pub fn eval(&self, vectors: &[Vec<Rational>]) -> Rational {
        debug_assert_eq!(vectors.len(), self.order);
        debug_assert!(vectors.iter().all(|v| v.len() == self.dim));
        let mut acc = Rational::zero();
        // For each stored key, sum the products over the distinct
        // permutations of its multiset of indices.
        for (key, coeff) in &self.coeffs {
            let mut perm = key.clone();
            let mut sum = Rational::zero();
            loop {
                let mut product = Rational::from_integer(1.into());
                for (slot, &index) in perm.iter().enumerate() {
                    if vectors[slot][index].is_zero() {
                        product = Rational::zero();
                        break;
                    }
                    product *= &vectors[slot][index];
                }
                sum += product;
                if !next_permutation(&mut perm) {
                    break;
                }
            }
            acc += coeff * sum;
        }
        acc
    }

    /// Evaluates on basis vectors, except that the argument at `slot` is the
    /// given dense vector. `tuple[slot]` is ignored.
    pub fn eval_slot_dense(&self, tuple: &[usize], slot: usize, replacement: &[Rational]) -> Rational {
        debug_assert_eq!(tuple.len(), self.order);
        let mut acc = Rational::zero();
        let mut probe = tuple.to_vec();
        for (k, value) in replacement.iter().enumerate() {
            if value.is_zero() {
                continue;
            }
            probe[slot] = k;
            let c = self.coeff(&probe);
            if !c.is_zero() {
                acc += value * c;
            }
        }
        acc
    }

    /// Like [`SymTensor::eval_slot_dense`] with a sparse replacement.
    pub fn eval_slot_sparse(
        &self,
        tuple: &[usize],
        slot: usize,
        replacement: &BTreeMap<usize, Rational>,
    ) -> Rational {
        debug_assert_eq!(tuple.len(), self.order);
        let mut acc = Rational::zero();
        let mut probe = tuple.to_vec();
        for (&k, value) in replacement {
            probe[slot] = k;
            let c = self.coeff(&probe);
            if !c.is_zero() {
                acc += value * c;
            }
        }
        acc
    }

    /// Matrix of the map `u -> S(u, ., .., .)` from the space into symmetric
    /// forms of order `order - 1`, with columns indexed by the sorted
    /// multi-indices of that codomain.
    pub fn sharp_matrix(&self) -> crate::matrix::RatMatrix {
        let monomials = sorted_tuples(self.dim, self.order - 1);
        crate::matrix::RatMatrix::from_fn(self.dim, monomials.len(), |r, c| {
            let mut key = Vec::with_capacity(self.order);
            key.push(r);
            key.extend_from_slice(&monomials[c]);
            self.coeff(&key)
        })
    }

    /// True iff `u -> S(u, ., .., .)` has trivial kernel.
    pub fn is_nondegenerate(&self) -> bool {
        self.sharp_matrix().rank() == self.dim
    }
}

/// All non-decreasing tuples of the given length over `{0, .., dim-1}`, in
/// lexicographic order.
pub fn sorted_tuples(dim: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(len);
    fn rec(dim: usize, len: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == len {
            out.push(current.clone());
            return;
        }
        for i in start..dim {
            current.push(i);
            rec(dim, len, i, current, out);
            current.pop();
        }
    }
    rec(dim, len, 0, &mut current, &mut out);
    out
}

/// Advances `xs` to its lexicographic successor permutation; returns false
/// when `xs` was already the last one. Starting from a sorted slice this
/// visits each distinct multiset permutation exactly once.
pub fn next_permutation(xs: &mut [usize]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let mut i = xs.len() - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = xs.len() - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

//! Exhaustive enumeration of basis-index tuples.
//!
//! The identities this crate verifies are multilinear, so checking them on
//! every basis tuple decides them for all vectors. Tuple domains are flat
//! integer ranges: index `i` encodes the tuple given by the digits of `i`
//! in base `radix`, most significant digit first, which makes the flat
//! order coincide with lexicographic tuple order.
//!
//! Scans can run sequentially or data-parallel via rayon (feature
//! `parallel`, on by default). Both strategies return the same result:
//! failures are reduced to the minimum flat index, so the reported witness
//! is always the lexicographically first one.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How to execute a scan. `Strategy::default()` is `Parallel` when the
/// `parallel` feature is enabled, `Sequential` otherwise. Requesting
/// `Parallel` in a build without the feature silently degrades to a
/// sequential scan with identical results.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    Parallel,
}

impl Default for Strategy {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Strategy::Parallel
        } else {
            Strategy::Sequential
        }
    }
}

/// The set of all `slots`-tuples over `{0, .., radix-1}`, in lexicographic
/// order.
#[derive(Debug, Clone, Copy)]
pub struct TupleSpace {
    radix: usize,
    slots: usize,
    total: usize,
}

impl TupleSpace {
    pub fn new(radix: usize, slots: usize) -> Self {
        let total = radix
            .checked_pow(slots as u32)
            .expect("tuple space size overflows usize");
        TupleSpace {
            radix,
            slots,
            total,
        }
    }

    pub fn total(&self) -> usize {
        self.total
    }

    /// Decodes a flat index into its tuple, most significant slot first.
    pub fn decode(&self, mut index: usize) -> Vec<usize> {
        debug_assert!(index < self.total);
        let mut tuple = vec![0usize; self.slots];
        for slot in (0..self.slots).rev() {
            tuple[slot] = index % self.radix;
            index /= self.radix;
        }
        tuple
    }
}

/// Returns the smallest index in `0..total` for which `fails` is true.
pub fn find_first_failure<F>(total: usize, strategy: Strategy, fails: F) -> Option<usize>
where
    F: Fn(usize) -> bool + Sync + Send,
{
    match strategy {
        Strategy::Sequential => (0..total).find(|&i| fails(i)),
        Strategy::Parallel => find_first_failure_parallel(total, fails),
    }
}

#[cfg(feature = "parallel")]
fn find_first_failure_parallel<F>(total: usize, fails: F) -> Option<usize>
where
    F: Fn(usize) -> bool + Sync + Send,
{
    (0..total).into_par_iter().filter(|&i| fails(i)).min()
}

#[cfg(not(feature = "parallel"))]
fn find_first_failure_parallel<F>(total: usize, fails: F) -> Option<usize>
where
    F: Fn(usize) -> bool + Sync + Send,
{
    (0..total).find(|&i| fails(i))
}

/// Maps every index in `0..total`, preserving index order in the output.
pub fn map_indexed<T, F>(total: usize, strategy: Strategy, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match strategy {
        Strategy::Sequential => (0..total).map(f).collect(),
        Strategy::Parallel => map_indexed_parallel(total, f),
    }
}

#[cfg(feature = "parallel")]
fn map_indexed_parallel<T, F>(total: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..total).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_indexed_parallel<T, F>(total: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..total).map(f).collect()
}

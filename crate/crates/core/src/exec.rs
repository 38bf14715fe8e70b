//! Execution strategy for the crate's data-parallel loops.
//!
//! The heavy workloads here — star-product tables, rank computations over
//! monomial bases, per-batch series contributions — are embarrassingly
//! parallel maps over independent inputs followed by an order-preserving
//! collect. With the default `parallel` feature [`map`] fans out over a
//! rayon pool; without it, [`map`] is identical to [`map_seq`]. Both paths
//! produce results in input order and all arithmetic is exact, so the
//! outcome is bitwise identical either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Order-preserving map, parallel when the `parallel` feature is enabled.
#[cfg(feature = "parallel")]
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Order-preserving map, parallel when the `parallel` feature is enabled.
#[cfg(not(feature = "parallel"))]
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Sequential reference path, always available. Benchmarks compare this
/// against [`map`] on the same workloads.
pub fn map_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

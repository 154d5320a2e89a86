//! Indexed map helpers that run on rayon when the `parallel` feature is
//! enabled and fall back to a plain sequential loop otherwise.
//!
//! Every parallel loop in this crate is a pure function of its index (seeds
//! are derived per index), so the two paths produce identical results and
//! output order is always by index.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `0..n`, collecting results in index order.
#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

/// Maps `f` over `0..n`, collecting results in index order.
#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

/// Sequential variant kept available regardless of features; the bench suite
/// uses it as the baseline against the parallel path.
pub fn map_indexed_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

/// Maps `f` over the items of a slice, collecting results in item order.
#[cfg(feature = "parallel")]
pub fn map_slice<I, T, F>(items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Maps `f` over the items of a slice, collecting results in item order.
#[cfg(not(feature = "parallel"))]
pub fn map_slice<I, T, F>(items: &[I], f: F) -> Vec<T>
where
    F: Fn(&I) -> T,
{
    items.iter().map(f).collect()
}

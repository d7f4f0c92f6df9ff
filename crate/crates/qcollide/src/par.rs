//! Data-parallel map over independent work items.
//!
//! With the `parallel` feature the map runs on rayon; without it, the same
//! call is an ordinary sequential iterator. Output order always matches input
//! order, so results are bitwise identical either way.

#[cfg(feature = "parallel")]
pub(crate) fn map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    items.into_iter().map(f).collect()
}

/// Sequential map with the same signature, for benchmarking against the
/// parallel path and for verifying schedule independence.
pub(crate) fn map_sequential<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    items.into_iter().map(f).collect()
}

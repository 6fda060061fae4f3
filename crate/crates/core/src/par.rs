//! Data-parallel helpers. With the `parallel` feature these fan out over the
//! rayon pool; without it they are plain sequential iterators. Results are
//! identical either way: maps keep input order and searches return the first
//! hit in input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub fn map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.iter().map(f).collect()
}

/// First `Some` in input order.
#[cfg(feature = "parallel")]
pub fn find_first<T: Sync, R: Send>(
    items: &[T],
    f: impl Fn(&T) -> Option<R> + Sync + Send,
) -> Option<R> {
    items.par_iter().find_map_first(f)
}

#[cfg(not(feature = "parallel"))]
pub fn find_first<T: Sync, R: Send>(
    items: &[T],
    f: impl Fn(&T) -> Option<R> + Sync + Send,
) -> Option<R> {
    items.iter().find_map(f)
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

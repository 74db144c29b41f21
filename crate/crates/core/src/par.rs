//! Data-parallel fan-out with a sequential fallback.
//!
//! The checkers, the audit, and the lattice oracle all decompose into
//! independent subproblems whose results are merged in index order, so the
//! output never depends on the execution mode.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `0..count`, collecting results in index order.
#[cfg(feature = "parallel")]
pub(crate) fn map_indexed<U, F>(count: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indexed<U, F>(count: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..count).map(f).collect()
}

/// Sequential twin of [`map_indexed`], always available so the benches can
/// compare both paths within one build.
pub(crate) fn map_indexed_seq<U, F>(count: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..count).map(f).collect()
}

/// Reduces `0..count` with `eval` and an associative, commutative `merge`.
#[cfg(feature = "parallel")]
pub(crate) fn fold_indexed<U, E, M>(count: usize, eval: E, merge: M) -> Option<U>
where
    U: Send,
    E: Fn(usize) -> U + Sync + Send,
    M: Fn(U, U) -> U + Sync + Send,
{
    (0..count).into_par_iter().map(eval).reduce_with(merge)
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn fold_indexed<U, E, M>(count: usize, eval: E, merge: M) -> Option<U>
where
    E: Fn(usize) -> U,
    M: Fn(U, U) -> U,
{
    (0..count).map(eval).reduce(merge)
}

/// Sequential twin of [`fold_indexed`].
pub(crate) fn fold_indexed_seq<U, E, M>(count: usize, eval: E, merge: M) -> Option<U>
where
    E: Fn(usize) -> U,
    M: Fn(U, U) -> U,
{
    (0..count).map(eval).reduce(merge)
}

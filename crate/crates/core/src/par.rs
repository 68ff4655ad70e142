//! Order-preserving data-parallel helpers. With the `parallel` feature these
//! run on rayon; without it (or with `parallel = false`) they run sequentially.
//! Results are identical either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `items`, keeping input order.
pub fn map<T, R, F>(parallel: bool, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return items.par_iter().map(f).collect();
    }
    let _ = parallel;
    items.iter().map(f).collect()
}

/// Maps `f` over `0..n` in chunks, keeping index order.
pub fn map_range<R, F>(parallel: bool, n: u64, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = parallel;
    (0..n).map(f).collect()
}

/// Folds `0..n` into per-chunk accumulators and merges them in index order.
pub fn fold_range<A, F, M>(parallel: bool, n: u64, chunk: u64, init: A, fold: F, merge: M) -> A
where
    A: Clone + Send + Sync,
    F: Fn(A, u64) -> A + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    let chunk = chunk.max(1);
    let chunks = n.div_ceil(chunk);
    let run = |c: u64| (c * chunk..((c + 1) * chunk).min(n)).fold(init.clone(), &fold);
    let parts = map_range(parallel, chunks, run);
    parts.into_iter().fold(init.clone(), merge)
}

pub fn enabled() -> bool {
    cfg!(feature = "parallel")
}

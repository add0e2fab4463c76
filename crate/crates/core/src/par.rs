//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) the maps below fan out over rayon;
//! without it they run sequentially with identical results. Folds downstream
//! stay deterministic because callers collect in input order.

#[cfg(feature = "parallel")]
pub fn par_map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn par_map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}

/// Runs `f` on a pool with `threads` workers when parallel, directly
/// otherwise. Benchmarks use this to compare a single-thread run against the
/// default pool.
#[cfg(feature = "parallel")]
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("rayon pool");
    pool.install(f)
}

#[cfg(not(feature = "parallel"))]
pub fn with_threads<R>(_threads: usize, f: impl FnOnce() -> R) -> R {
    f()
}

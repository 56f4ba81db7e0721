//! Thread pool sizing and order-preserving parallel maps.
//!
//! Every parallel map writes result `i` from input `i` alone, so outputs do
//! not depend on the number of threads.

use rayon::prelude::*;
use rayon::ThreadPool;

/// Environment variable holding the worker count; unset or 0 means all cores.
pub const THREADS_ENV: &str = "THERMECHO_THREADS";

pub fn threads_from_env() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(0)
}

pub fn pool(threads: usize) -> ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
}

pub fn par_map<T, U, F>(pool: &ThreadPool, input: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    pool.install(|| input.par_iter().map(f).collect())
}

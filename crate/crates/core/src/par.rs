//! Trial-level data parallelism.
//!
//! All Monte-Carlo loops go through [`map_trials`], which returns results in
//! trial order regardless of how the work was scheduled. With the `parallel`
//! feature disabled, [`Execution::Parallel`] falls back to a sequential loop.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

pub fn map_trials<T, F>(trials: u64, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    match exec {
        Execution::Sequential => (0..trials).map(f).collect(),
        Execution::Parallel => parallel_map(trials, f),
    }
}

#[cfg(feature = "parallel")]
fn parallel_map<T, F>(trials: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..trials).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T, F>(trials: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    (0..trials).map(f).collect()
}

/// Runs `f` on a pool of `threads` workers (0 = library default).
#[cfg(feature = "parallel")]
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn with_threads<R: Send>(_threads: usize, f: impl FnOnce() -> R + Send) -> R {
    f()
}

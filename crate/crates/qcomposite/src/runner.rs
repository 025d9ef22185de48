//! Deterministic execution of independent work items, parallel by default.
//!
//! Everything here is order-insensitive by contract: trial results are
//! merged with associative, commutative operations and each item's
//! randomness is derived solely from its index, so the parallel and
//! sequential paths produce identical results. Building with
//! `--no-default-features` removes the rayon dependency and routes the
//! default entry points through the sequential implementations.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Folds `trials` independent trial results into one accumulator.
#[cfg(feature = "parallel")]
pub fn fold_trials<R, F, M>(trials: u64, zero: R, step: F, merge: M) -> R
where
    R: Send + Sync + Clone,
    F: Fn(u64) -> R + Send + Sync,
    M: Fn(R, R) -> R + Send + Sync,
{
    (0..trials)
        .into_par_iter()
        .map(&step)
        .reduce(|| zero.clone(), &merge)
}

#[cfg(not(feature = "parallel"))]
pub fn fold_trials<R, F, M>(trials: u64, zero: R, step: F, merge: M) -> R
where
    R: Send + Sync + Clone,
    F: Fn(u64) -> R + Send + Sync,
    M: Fn(R, R) -> R + Send + Sync,
{
    fold_trials_seq(trials, zero, step, merge)
}

/// Sequential reference path; kept public so benchmarks can compare it
/// against the parallel default on identical workloads.
pub fn fold_trials_seq<R, F, M>(trials: u64, zero: R, step: F, merge: M) -> R
where
    R: Send + Sync + Clone,
    F: Fn(u64) -> R + Send + Sync,
    M: Fn(R, R) -> R + Send + Sync,
{
    (0..trials).map(step).fold(zero, merge)
}

/// Maps `f` over `0..len` collecting into a `Vec`, in parallel when enabled.
#[cfg(feature = "parallel")]
pub fn map_collect<U, F>(len: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Send + Sync,
{
    (0..len).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_collect<U, F>(len: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Send + Sync,
{
    map_collect_seq(len, f)
}

/// Sequential counterpart of [`map_collect`].
pub fn map_collect_seq<U, F>(len: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Send + Sync,
{
    (0..len).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_fold_agree() {
        let step = |i: u64| i.wrapping_mul(0x9E3779B97F4A7C15) >> 32;
        let a = fold_trials(1000, 0u64, step, |x, y| x + y);
        let b = fold_trials_seq(1000, 0u64, step, |x, y| x + y);
        assert_eq!(a, b);
    }

    #[test]
    fn map_collect_matches_seq() {
        let f = |i: usize| i * i;
        assert_eq!(map_collect(100, f), map_collect_seq(100, f));
    }
}

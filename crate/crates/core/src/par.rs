//! Data-parallel helpers with a sequential fallback.
//!
//! Every helper returns results in index order. Callers reduce the returned
//! vectors sequentially, which keeps floating-point sums identical whether
//! the work ran on one thread or many.

use std::ops::Range;
use std::sync::atomic::{AtomicBool, Ordering};

static PARALLEL: AtomicBool = AtomicBool::new(cfg!(feature = "parallel"));

/// Fixed block length used by [`map_blocks`] callers that want
/// thread-count independent partitions.
pub const DEFAULT_BLOCK: usize = 64;

/// Enables or disables the parallel path at runtime. Has no effect when the
/// crate is built without the `parallel` feature.
pub fn set_parallel(enabled: bool) {
    PARALLEL.store(enabled && cfg!(feature = "parallel"), Ordering::Relaxed);
}

pub fn is_parallel() -> bool {
    PARALLEL.load(Ordering::Relaxed)
}

/// Caps the global worker pool. Returns `false` if the pool was already
/// initialised (the existing pool is kept) or the feature is disabled.
pub fn configure_threads(threads: usize) -> bool {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().is_ok()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        false
    }
}

pub fn current_threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        if is_parallel() {
            return rayon::current_num_threads();
        }
    }
    1
}

/// `(0..n).map(f).collect()`, possibly in parallel.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if is_parallel() {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(f).collect();
        }
    }
    (0..n).map(f).collect()
}

/// Splits `0..n` into consecutive blocks of length `block` (the last one may
/// be shorter) and maps each block. The partition depends only on `n` and
/// `block`.
pub fn map_blocks<T, F>(n: usize, block: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<usize>) -> T + Sync + Send,
{
    let block = block.max(1);
    let count = n.div_ceil(block);
    map_indexed(count, |b| {
        let start = b * block;
        f(start..(start + block).min(n))
    })
}

/// Sum of `f(i)` over `0..n`, reduced sequentially in index order.
pub fn sum_indexed<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    map_indexed(n, f).into_iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_cover_range_in_order() {
        let parts = map_blocks(10, 4, |r| r.collect::<Vec<_>>());
        assert_eq!(parts, vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7], vec![8, 9]]);
        assert!(map_blocks(0, 4, |r| r.len()).is_empty());
    }

    #[test]
    fn sequential_and_parallel_sums_agree() {
        let f = |i: usize| 1.0 / (1.0 + i as f64).powf(1.3);
        let before = is_parallel();
        set_parallel(false);
        let seq = sum_indexed(10_000, f);
        set_parallel(true);
        let par = sum_indexed(10_000, f);
        set_parallel(before);
        assert_eq!(seq.to_bits(), par.to_bits());
    }
}

//! Per-cell execution policy.
//!
//! Every per-cell kernel in the crate goes through [`Exec::map`]. Each output
//! element depends only on its own index, so sequential and parallel
//! execution produce bit-identical results. The rayon path is compiled only
//! with the `parallel` feature; without it [`Exec::Parallel`] runs
//! sequentially.

/// Below this many items the parallel path is not worth the fork-join cost.
pub const PAR_THRESHOLD: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// Whether this policy actually dispatches to the thread pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Evaluate `f(i)` for `i in 0..n`, collecting in index order.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel && n >= PAR_THRESHOLD {
            use rayon::prelude::*;
            return (0..n).into_par_iter().with_min_len(64).map(f).collect();
        }
        (0..n).map(f).collect()
    }

    /// Fallible variant of [`Exec::map`]; returns the lowest-index error.
    pub fn try_map<T, E, F>(self, n: usize, f: F) -> Result<Vec<T>, E>
    where
        T: Send,
        E: Send,
        F: Fn(usize) -> Result<T, E> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel && n >= PAR_THRESHOLD {
            use rayon::prelude::*;
            let out: Vec<Result<T, E>> =
                (0..n).into_par_iter().with_min_len(64).map(f).collect();
            return out.into_iter().collect();
        }
        (0..n).map(f).collect()
    }

    /// Map over independent jobs (whole runs, not cells); no size threshold.
    pub fn map_jobs<I, T, F>(self, items: Vec<I>, f: F) -> Vec<T>
    where
        I: Send,
        T: Send,
        F: Fn(I) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            use rayon::prelude::*;
            return items.into_par_iter().map(f).collect();
        }
        items.into_iter().map(f).collect()
    }
}

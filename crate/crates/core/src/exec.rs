//! Trial scheduling.
//!
//! Work is cut into fixed-size chunks of trial ids. Each chunk is evaluated
//! independently and the chunk results come back in chunk order, so a caller
//! that folds them left-to-right gets the same bits from any worker count.

use std::ops::Range;

/// Trials per chunk. Part of the reproducibility contract: changing it
/// changes floating-point summation order.
pub const TRIAL_CHUNK: usize = 64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Executor {
    Sequential,
    /// Global rayon pool. Falls back to sequential without the `parallel`
    /// feature.
    #[default]
    Parallel,
    /// Dedicated rayon pool with exactly this many threads.
    Workers(usize),
}

impl Executor {
    /// Splits `0..n` into [`TRIAL_CHUNK`]-sized ranges, evaluates `f` on each
    /// and returns the results in range order.
    pub fn map_chunks<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(Range<usize>) -> T + Sync + Send,
    {
        let ranges: Vec<Range<usize>> = (0..n)
            .step_by(TRIAL_CHUNK)
            .map(|start| start..(start + TRIAL_CHUNK).min(n))
            .collect();
        match self {
            Executor::Sequential => ranges.into_iter().map(f).collect(),
            Executor::Parallel => run_parallel(ranges, f, None),
            Executor::Workers(w) => run_parallel(ranges, f, Some((*w).max(1))),
        }
    }
}

#[cfg(feature = "parallel")]
fn run_parallel<T, F>(ranges: Vec<Range<usize>>, f: F, workers: Option<usize>) -> Vec<T>
where
    T: Send,
    F: Fn(Range<usize>) -> T + Sync + Send,
{
    use rayon::prelude::*;
    match workers {
        None => ranges.into_par_iter().map(f).collect(),
        Some(w) => match rayon::ThreadPoolBuilder::new().num_threads(w).build() {
            Ok(pool) => pool.install(|| ranges.into_par_iter().map(&f).collect()),
            Err(_) => ranges.into_iter().map(f).collect(),
        },
    }
}

#[cfg(not(feature = "parallel"))]
fn run_parallel<T, F>(ranges: Vec<Range<usize>>, f: F, _workers: Option<usize>) -> Vec<T>
where
    T: Send,
    F: Fn(Range<usize>) -> T + Sync + Send,
{
    ranges.into_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunks_come_back_in_order() {
        for exec in [Executor::Sequential, Executor::Parallel, Executor::Workers(3)] {
            let out = exec.map_chunks(200, |r| (r.start, r.end));
            assert_eq!(out.first(), Some(&(0, 64)));
            assert_eq!(out.last(), Some(&(192, 200)));
            assert!(out.windows(2).all(|w| w[0].1 == w[1].0));
        }
        assert!(Executor::Sequential.map_chunks(0, |r| r.len()).is_empty());
    }
}

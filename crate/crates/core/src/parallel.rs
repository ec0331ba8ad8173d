//! Sample-level data parallelism. With the `parallel` feature, samples are
//! spread over the rayon pool; without it, or with
//! [`Execution::Sequential`], they run in order on the calling thread. The
//! merged report is sorted by (seed, name), so both paths agree exactly.

use crate::error::Result;
use crate::random::sample_seed;
use crate::report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Parallel,
    Sequential,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// `f(i)` for `i in 0..count`, in index order.
pub fn map_indexed<T, F>(exec: Execution, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..count).into_par_iter().map(f).collect()
        }
        _ => (0..count).map(f).collect(),
    }
}

/// Runs `body(sample_seed)` for every sample and merges the reports, tagging
/// each check with its sample seed.
pub fn run_samples<F>(exec: Execution, seed: u64, samples: usize, body: F) -> Result<Report>
where
    F: Fn(u64) -> Result<Report> + Sync + Send,
{
    let parts = map_indexed(exec, samples, |i| {
        let s = sample_seed(seed, i as u64);
        body(s).map(|r| (s, r))
    });
    let mut out = Report::new();
    for part in parts {
        let (s, r) = part?;
        out.absorb(r, Some(s));
    }
    out.sort();
    Ok(out)
}

//! Chunked sum over an index range, data-parallel when the `parallel`
//! feature is on and the caller asks for it.

use std::ops::Range;

/// How counting loops are executed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    /// Uses the rayon pool when built with the `parallel` feature; falls back
    /// to sequential otherwise.
    #[default]
    Parallel,
}

const CHUNK: u64 = 1 << 14;

fn chunks(range: Range<u64>) -> Vec<Range<u64>> {
    let mut out = Vec::with_capacity(((range.end - range.start) / CHUNK + 1) as usize);
    let mut start = range.start;
    while start < range.end {
        let end = (start + CHUNK).min(range.end);
        out.push(start..end);
        start = end;
    }
    out
}

/// Sums `work(chunk)` over disjoint chunks covering `range`. The result does
/// not depend on the schedule since integer addition is associative.
pub fn chunked_sum<F>(range: Range<u64>, parallelism: Parallelism, work: F) -> u64
where
    F: Fn(Range<u64>) -> u64 + Sync + Send,
{
    let parts = chunks(range);
    match parallelism {
        #[cfg(feature = "parallel")]
        Parallelism::Parallel => {
            use rayon::prelude::*;
            parts.into_par_iter().map(work).sum()
        }
        _ => parts.into_iter().map(work).sum(),
    }
}

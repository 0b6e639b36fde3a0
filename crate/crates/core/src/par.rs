//! Data-parallel helpers for the brute-force sweeps.
//!
//! Every helper returns results in index order, so the output is identical
//! whichever [`Exec`] mode runs it. With the `parallel` feature disabled,
//! [`Exec::Parallel`] silently runs sequentially.

use serde::{Deserialize, Serialize};
use std::ops::Range;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// True when work will actually fan out across threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

/// Applies `f` to every index and concatenates the per-index outputs in order.
pub fn flat_map_range<T, F>(range: Range<i64>, exec: Exec, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(i64) -> Vec<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return range.into_par_iter().flat_map_iter(f).collect();
    }
    let _ = exec;
    range.flat_map(f).collect()
}

/// Sums `f` over the range.
pub fn sum_range<F>(range: Range<i64>, exec: Exec, f: F) -> u64
where
    F: Fn(i64) -> u64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return range.into_par_iter().map(f).sum();
    }
    let _ = exec;
    range.map(f).sum()
}

/// Maps a slice, preserving order.
pub fn map_slice<T, U, F>(items: &[T], exec: Exec, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Splits `[lo, hi]` into contiguous chunks, maps each, and concatenates in order.
pub fn chunked<T, F>(lo: i64, hi: i64, chunk: i64, exec: Exec, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(i64, i64) -> Vec<T> + Sync + Send,
{
    if hi < lo {
        return Vec::new();
    }
    let chunk = chunk.max(1);
    let n = (hi - lo) / chunk + 1;
    flat_map_range(0..n, exec, |k| {
        let a = lo + k * chunk;
        let b = (a + chunk - 1).min(hi);
        f(a, b)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let f = |i: i64| if i % 3 == 0 { vec![i, -i] } else { vec![] };
        assert_eq!(flat_map_range(-50..50, Exec::Sequential, f), flat_map_range(-50..50, Exec::Parallel, f));
        let g = |a: i64, b: i64| (a..=b).filter(|x| x % 7 == 0).collect::<Vec<_>>();
        assert_eq!(chunked(-100, 1000, 33, Exec::Parallel, g), (-100..=1000).filter(|x| x % 7 == 0).collect::<Vec<_>>());
        assert_eq!(sum_range(0..100, Exec::Parallel, |i| i as u64), 4950);
    }
}

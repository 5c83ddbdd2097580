//! Data-parallel execution facade.
//!
//! Replicates, design cells and mediator chains are independent given their
//! derived RNG streams, so they map cleanly onto rayon. The sequential path
//! is always compiled (it is the fallback when the `parallel` feature is
//! off, and the baseline the benchmark suite compares against); results are
//! collected in index order either way, so output is identical.

/// Map `f` over `0..n` sequentially.
pub fn map_indexed_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

/// Map `f` over `0..n` on the rayon pool.
#[cfg(feature = "parallel")]
pub fn map_indexed_par<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

/// Map `f` over `0..n`, in parallel when the feature is enabled.
#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    map_indexed_par(n, f)
}

/// Map `f` over `0..n`, in parallel when the feature is enabled.
#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    map_indexed_seq(n, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree() {
        let work = |i: usize| (i as f64).sqrt() + i as f64 * 3.0;
        let seq = map_indexed_seq(100, work);
        let any = map_indexed(100, work);
        assert_eq!(seq, any);
    }
}

//! Data-parallel mapping with a sequential fallback.
//!
//! The verification suites apply an independent check to each of many
//! sampled inputs. [`par_map`] fans that work over a rayon pool when the
//! crate is built with the default `parallel` feature and degrades to a
//! plain sequential map without it. [`seq_map`] is always sequential and
//! exists so benchmarks can compare the two strategies within one build.
//! Both preserve input order, so assembled reports are identical either
//! way.

/// Sequential ordered map (the fallback strategy, always available).
pub fn seq_map<T, U>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U>
where
    T: Sync,
    U: Send,
{
    items.iter().map(&f).collect()
}

/// Ordered map over a rayon thread pool.
#[cfg(feature = "parallel")]
pub fn par_map<T, U>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U>
where
    T: Sync,
    U: Send,
{
    use rayon::prelude::*;
    items.par_iter().map(&f).collect()
}

/// Ordered map, sequential because the `parallel` feature is disabled.
#[cfg(not(feature = "parallel"))]
pub fn par_map<T, U>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U>
where
    T: Sync,
    U: Send,
{
    seq_map(items, f)
}

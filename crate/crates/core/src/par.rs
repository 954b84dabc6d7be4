//! Sequential/parallel dispatch for the batch loops (pair scans, grid checks,
//! independent runs).
//!
//! With the `parallel` feature enabled, [`Execution::Parallel`] runs on rayon's
//! global pool. Without it every call runs sequentially, so callers are written
//! once. Results are always returned in input order.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
    Parallel,
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

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    pub(crate) fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    pub(crate) fn map_range<R, F>(self, range: Range<usize>, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return range.into_par_iter().map(f).collect();
        }
        range.map(f).collect()
    }

    /// First `Some` in input order, independent of how work was split.
    pub(crate) fn find_first<T, R, F>(self, items: &[T], f: F) -> Option<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> Option<R> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return items.par_iter().find_map_first(f);
        }
        items.iter().find_map(f)
    }

    pub(crate) fn find_first_in_range<R, F>(self, range: Range<usize>, f: F) -> Option<R>
    where
        R: Send,
        F: Fn(usize) -> Option<R> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return range.into_par_iter().find_map_first(f);
        }
        range.into_iter().find_map(f)
    }
}

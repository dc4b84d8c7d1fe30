//! Execution strategy for the data-parallel inner loops.
//!
//! Every parallel path has a sequential twin that produces identical output;
//! the `parallel` feature only decides which one [`Strategy::default`] picks.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Strategy {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

impl Strategy {
    /// All strategies compiled into this build.
    pub fn available() -> &'static [Strategy] {
        #[cfg(feature = "parallel")]
        {
            &[Strategy::Sequential, Strategy::Parallel]
        }
        #[cfg(not(feature = "parallel"))]
        {
            &[Strategy::Sequential]
        }
    }

    /// Order-preserving map.
    pub(crate) fn map<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        match self {
            Strategy::Sequential => items.iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Strategy::Parallel => items.par_iter().map(f).collect(),
        }
    }

    /// Order-preserving map over `0..len`.
    pub(crate) fn map_range<U, F>(self, len: usize, f: F) -> Vec<U>
    where
        U: Send,
        F: Fn(usize) -> U + Sync + Send,
    {
        match self {
            Strategy::Sequential => (0..len).map(f).collect(),
            #[cfg(feature = "parallel")]
            Strategy::Parallel => (0..len).into_par_iter().map(f).collect(),
        }
    }

    /// True iff `pred` holds for some index in `0..len`.
    pub(crate) fn any_range<F>(self, len: usize, pred: F) -> bool
    where
        F: Fn(usize) -> bool + Sync + Send,
    {
        match self {
            Strategy::Sequential => (0..len).any(pred),
            #[cfg(feature = "parallel")]
            Strategy::Parallel => (0..len).into_par_iter().any(pred),
        }
    }
}

//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (on by default) [`Execution::Parallel`] runs on
//! the rayon global pool. Without it both variants run sequentially, so
//! callers never need to branch on the feature themselves. Output order always
//! follows input order.

/// How to evaluate an independent batch of work items.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether this build can actually run work in parallel.
    pub fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }

    /// Maps `f` over `items`, preserving order.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            Execution::Sequential => items.iter().map(f).collect(),
            Execution::Parallel => par_map(items, f),
        }
    }

    /// Maps `f` over an integer range, preserving order.
    pub fn map_range<R, F>(self, lo: u64, hi_inclusive: u64, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(u64) -> R + Sync + Send,
    {
        if hi_inclusive < lo {
            return Vec::new();
        }
        let items: Vec<u64> = (lo..=hi_inclusive).collect();
        self.map(&items, |&x| f(x))
    }
}

#[cfg(feature = "parallel")]
fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_preserve_order() {
        let xs: Vec<u64> = (0..1000).collect();
        let seq = Execution::Sequential.map(&xs, |x| x * x);
        let par = Execution::Parallel.map(&xs, |x| x * x);
        assert_eq!(seq, par);
        assert_eq!(Execution::Parallel.map_range(3, 5, |x| x + 1), vec![4, 5, 6]);
        assert!(Execution::Sequential.map_range(5, 3, |x| x).is_empty());
    }
}

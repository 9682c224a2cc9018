//! Data-parallel execution with a sequential fallback.
//!
//! With the `parallel` feature disabled, [`Execution::Parallel`] runs on the
//! calling thread. Every parallel path in this crate produces output
//! identical to its sequential counterpart.

/// How the batch loops in this crate are scheduled.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Runs on the current rayon pool when the `parallel` feature is on.
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Maps `f(index, item)` over `items`, preserving order.
pub(crate) fn map_indexed<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(usize, &T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().enumerate().map(|(i, x)| f(i, x)).collect();
    }
    let _ = exec;
    items.iter().enumerate().map(|(i, x)| f(i, x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_agree() {
        let items: Vec<u64> = (0..1000).collect();
        let f = |i: usize, x: &u64| x * 3 + i as u64;
        assert_eq!(
            map_indexed(Execution::Sequential, &items, f),
            map_indexed(Execution::Parallel, &items, f)
        );
    }
}

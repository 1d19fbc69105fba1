//! Per-pixel map with an optional rayon backend.
//!
//! Results are always collected in index order, so output never depends on
//! the number of worker threads.

use crate::error::Result;

/// How per-pixel work is scheduled.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Uses the current rayon thread pool. Falls back to sequential when the
    /// crate is built without the `parallel` feature.
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

pub(crate) fn map_indexed<T, F>(len: usize, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..len).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..len).map(f).collect()
}

/// Like [`map_indexed`], reporting the error with the lowest index.
pub(crate) fn try_map_indexed<T, F>(len: usize, exec: Execution, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    map_indexed(len, exec, f).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn order_is_preserved() {
        let seq = map_indexed(1000, Execution::Sequential, |i| i * i);
        let par = map_indexed(1000, Execution::Parallel, |i| i * i);
        assert_eq!(seq, par);
    }

    #[test]
    fn first_error_wins() {
        let r: Result<Vec<usize>> = try_map_indexed(100, Execution::Parallel, |i| {
            if i % 7 == 3 {
                Err(Error::Argument(i.to_string()))
            } else {
                Ok(i)
            }
        });
        match r {
            Err(Error::Argument(s)) => assert_eq!(s, "3"),
            other => panic!("unexpected {other:?}"),
        }
    }
}

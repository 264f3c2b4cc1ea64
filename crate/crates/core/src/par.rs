//! Order-preserving batch map over scene indices.
//!
//! With the `parallel` feature the work runs on a rayon pool; without it
//! every strategy degrades to a plain loop. Results always come back in index
//! order, so downstream reductions are identical either way.

/// Environment variable that caps the worker count.
pub const THREADS_ENV: &str = "MASKPLAN_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Global rayon pool.
    #[default]
    Parallel,
    Threads(usize),
}

impl Execution {
    /// Reads `MASKPLAN_THREADS`; unset or unparsable means the default pool,
    /// `1` means sequential.
    pub fn from_env() -> Self {
        match std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
            Some(0) | None => Execution::Parallel,
            Some(1) => Execution::Sequential,
            Some(n) => Execution::Threads(n),
        }
    }

    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            match self {
                Execution::Sequential => {}
                Execution::Parallel => return (0..n).into_par_iter().map(f).collect(),
                Execution::Threads(t) => {
                    if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(t).build() {
                        return pool.install(|| (0..n).into_par_iter().map(f).collect());
                    }
                }
            }
        }
        (0..n).map(f).collect()
    }

    /// Like [`map`](Self::map), returning the error of the lowest failing
    /// index. Every index is evaluated.
    pub fn try_map<T, E, F>(self, n: usize, f: F) -> Result<Vec<T>, E>
    where
        T: Send,
        E: Send,
        F: Fn(usize) -> Result<T, E> + Sync + Send,
    {
        self.map(n, f).into_iter().collect()
    }
}

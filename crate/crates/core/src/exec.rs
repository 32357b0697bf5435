//! Bounded worker pool for independent per-node evaluations.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Runs order-preserving maps either inline or on a private thread pool.
///
/// Outputs depend only on the mapped function, never on the worker count.
pub struct Executor {
    pool: Option<rayon::ThreadPool>,
}

impl Executor {
    pub fn new(workers: usize) -> Result<Self> {
        if workers == 0 {
            return Err(Error::InvalidConfig(
                "worker count must be at least 1".into(),
            ));
        }
        if workers == 1 {
            return Ok(Self::serial());
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
        Ok(Self { pool: Some(pool) })
    }

    pub fn serial() -> Self {
        Self { pool: None }
    }

    pub fn workers(&self) -> usize {
        self.pool.as_ref().map_or(1, |p| p.current_num_threads())
    }

    pub fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match &self.pool {
            None => (0..n).map(f).collect(),
            Some(pool) => pool.install(|| (0..n).into_par_iter().with_min_len(32).map(f).collect()),
        }
    }
}

impl Default for Executor {
    fn default() -> Self {
        Self::serial()
    }
}

impl std::fmt::Debug for Executor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Executor")
            .field("workers", &self.workers())
            .finish()
    }
}

//! Parallel execution handle passed into the modules.
//!
//! Every parallel operation goes through [`Executor::map`], which preserves
//! input order, so results never depend on the thread count.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};

#[derive(Clone, Default)]
pub struct Executor {
    pool: Option<Arc<rayon::ThreadPool>>,
}

impl std::fmt::Debug for Executor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Executor").field("threads", &self.threads()).finish()
    }
}

impl Executor {
    /// Runs everything on the calling thread.
    pub fn sequential() -> Self {
        Executor { pool: None }
    }

    /// A dedicated pool; `threads == 0` picks rayon's default size.
    pub fn with_threads(threads: usize) -> Result<Self> {
        if threads == 1 {
            return Ok(Executor::sequential());
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
        Ok(Executor { pool: Some(Arc::new(pool)) })
    }

    pub fn threads(&self) -> usize {
        self.pool.as_ref().map_or(1, |p| p.current_num_threads())
    }

    /// Order-preserving parallel map.
    pub fn map<T, R, F>(&self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        match &self.pool {
            None => items.into_iter().map(f).collect(),
            Some(pool) => pool.install(|| items.into_par_iter().map(f).collect()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_is_order_preserving() {
        let xs: Vec<u64> = (0..1000).collect();
        let seq = Executor::sequential().map(xs.clone(), |x| x * x);
        let par = Executor::with_threads(4).unwrap().map(xs, |x| x * x);
        assert_eq!(seq, par);
    }
}

//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) and more than one job, work runs on
//! a dedicated rayon pool of exactly that many threads. Results are always
//! returned in index order, so output never depends on the worker count.

/// Worker count for data-parallel loops. `Jobs::SERIAL` never spawns threads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Jobs(usize);

impl Jobs {
    pub const SERIAL: Jobs = Jobs(1);

    pub fn new(n: usize) -> Self {
        Jobs(n.max(1))
    }

    /// One job per available core.
    pub fn all_cores() -> Self {
        Jobs::new(std::thread::available_parallelism().map_or(1, |n| n.get()))
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub fn is_serial(self) -> bool {
        self.0 == 1 || !cfg!(feature = "parallel")
    }
}

impl Default for Jobs {
    fn default() -> Self {
        Jobs::SERIAL
    }
}

/// Evaluates `f(0..len)` and returns the results in index order.
pub fn map_indexed<T, F>(len: usize, jobs: Jobs, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if !jobs.is_serial() && len > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.get())
            .build()
            .expect("thread pool");
        return pool.install(|| (0..len).into_par_iter().map(&f).collect());
    }
    let _ = jobs;
    (0..len).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_independent_of_jobs() {
        let serial = map_indexed(1000, Jobs::SERIAL, |i| i * i);
        let parallel = map_indexed(1000, Jobs::new(4), |i| i * i);
        assert_eq!(serial, parallel);
        assert_eq!(Jobs::new(0), Jobs::SERIAL);
    }
}

//! Thread pool shared by the numeric kernels.
//!
//! `TORSIONLAB_THREADS` caps internal parallelism (0 or unset = auto). All
//! parallel reductions in the crate use fixed, thread-count-independent
//! orderings, so the setting affects speed only, never results.

use std::sync::OnceLock;

static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();

pub fn pool() -> &'static rayon::ThreadPool {
    POOL.get_or_init(|| {
        let threads = std::env::var("TORSIONLAB_THREADS")
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
            .unwrap_or(0);
        let mut builder = rayon::ThreadPoolBuilder::new();
        if threads > 0 {
            builder = builder.num_threads(threads);
        }
        builder.build().expect("failed to build thread pool")
    })
}

//! Dataset handling, synthetic masks, the round-trip comparison experiment
//! and report output.

pub mod config;
pub mod dataset;
pub mod experiment;
pub mod io;
pub mod report;
pub mod synth;

pub use config::{DataSource, ExperimentConfig, OutputFormat};
pub use dataset::{load_dataset, split_dataset, DatasetEntry, Split, SplitFractions};
pub use experiment::{roundtrip, roundtrip_experiment, run_comparison, Strategy};
pub use report::{emit_report, ComparisonReport};
pub use synth::{synth_mask, Ellipse, NestedEllipses, ShapeBounds};

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "MASKRESIZE_THREADS";

/// Thread cap from `MASKRESIZE_THREADS`, if set to a positive integer.
pub fn threads_from_env() -> crate::Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(crate::Error::invalid(format!(
                "{THREADS_ENV} must be a positive integer, got `{v}`"
            ))),
        },
    }
}

/// Runs `f` on a pool of at most `threads` workers. Without the `parallel`
/// feature everything already runs on the calling thread.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    #[cfg(feature = "parallel")]
    if let Some(n) = threads {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            return pool.install(f);
        }
    }
    let _ = threads;
    f()
}

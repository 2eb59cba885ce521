use std::path::PathBuf;
use std::time::Duration;

/// Runtime settings for the job service.
#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub port: u16,
    /// Root directory holding one workspace per job.
    pub workdir: PathBuf,
    pub job_ttl: Duration,
    pub max_upload_bytes: usize,
    /// Concurrent mask generations.
    pub workers: usize,
    /// Built frontend bundle; `None` serves a JSON notice instead.
    pub static_dir: Option<PathBuf>,
}

pub const DEFAULT_PORT: u16 = 8000;
pub const DEFAULT_TTL_HOURS: f64 = 24.0;
pub const DEFAULT_MAX_UPLOAD_MB: usize = 512;

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            port: DEFAULT_PORT,
            workdir: std::env::temp_dir().join("segstudio-jobs"),
            job_ttl: ttl_from_hours(DEFAULT_TTL_HOURS),
            max_upload_bytes: DEFAULT_MAX_UPLOAD_MB << 20,
            workers: default_workers(),
            static_dir: None,
        }
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Fractional hours; negative or non-finite values clamp to zero.
pub fn ttl_from_hours(hours: f64) -> Duration {
    Duration::try_from_secs_f64(hours * 3600.0).unwrap_or(Duration::ZERO)
}

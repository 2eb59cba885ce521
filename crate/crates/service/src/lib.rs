//! HTTP job service and `seg` command line for the segstudio pipeline.
//!
//! The service accepts contour uploads, rasterizes them in the background
//! with pollable progress and serves the resulting NRRD mask; the CLI runs
//! the same pipeline on local files and produces byte-identical output.

pub mod api;
pub mod cli;
pub mod config;
pub mod jobs;

use std::time::Duration;

pub use api::{router, AppState};
pub use config::ServiceConfig;
pub use jobs::{Job, JobState, JobStatus, JobStore};

/// Serve on an already bound listener until ctrl-c.
pub async fn serve(
    config: ServiceConfig,
    listener: tokio::net::TcpListener,
) -> std::io::Result<()> {
    let state = AppState::new(config)?;
    let sweep_every = state
        .config
        .job_ttl
        .clamp(Duration::from_secs(1), Duration::from_secs(60));
    let store = state.store.clone();
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(sweep_every);
        loop {
            tick.tick().await;
            let removed = store.sweep_expired();
            if removed > 0 {
                tracing::info!(removed, "expired jobs removed");
            }
        }
    });
    tracing::info!(addr = %listener.local_addr()?, workdir = %state.config.workdir.display(), "listening");
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

//! HTTP service and CLI support for line CAPTCHAs.
//!
//! A challenge is issued once, graded once, and forgotten after its TTL.

pub mod clock;
pub mod config;
mod error;
pub mod routes;
pub mod service;
pub mod store;

use std::sync::Arc;
use std::time::Duration;

pub use clock::{Clock, MockClock, SystemClock};
pub use config::ServiceConfig;
pub use error::{ApiError, ConfigError};
pub use routes::{router, ChallengeRequest, ChallengeResponse, VerifyRequest};
pub use service::{IssuedChallenge, Service};
pub use store::{Lookup, MemoryStore, Session, SessionStore, StoreError};

/// Periodically drops expired sessions.
pub fn spawn_sweeper(svc: Arc<Service>) -> tokio::task::JoinHandle<()> {
    let period = Duration::from_secs(svc.config().sweep_interval_seconds);
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(period);
        tick.set_missed_tick_behavior(tokio::time::MissedTickBehavior::Delay);
        loop {
            tick.tick().await;
            svc.sweep_expired();
        }
    })
}

/// Binds and serves until ctrl-c.
pub async fn serve(config: ServiceConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(&config.bind_address).await?;
    tracing::info!(
        addr = %listener.local_addr()?,
        ttl_seconds = config.ttl_seconds,
        dev = config.dev_seed_allowed,
        "listening"
    );
    let svc = Arc::new(Service::new(config));
    let sweeper = spawn_sweeper(svc.clone());
    let result = axum::serve(listener, router(svc))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await;
    sweeper.abort();
    result
}

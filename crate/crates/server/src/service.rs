use std::sync::Arc;

use base64::engine::general_purpose::URL_SAFE_NO_PAD;
use base64::Engine;
use linecaptcha::{generate_challenge, grade, ChallengeKind, GroundTruth, InstructionHint, Trace, Verdict};
use rand::rngs::OsRng;
use rand::TryRngCore;

use crate::clock::{Clock, SystemClock};
use crate::config::ServiceConfig;
use crate::error::ApiError;
use crate::store::{Lookup, MemoryStore, Session, SessionStore, StoreError};

/// A challenge as handed to a client, image already encoded.
#[derive(Clone, Debug, PartialEq)]
pub struct IssuedChallenge {
    pub id: String,
    pub png: Vec<u8>,
    pub width: u32,
    pub height: u32,
    pub instruction: InstructionHint,
    pub expires_at: u64,
}

/// 128 bits from the OS, URL-safe base64 without padding.
pub fn fresh_id() -> Result<String, ApiError> {
    let mut bytes = [0u8; 16];
    OsRng
        .try_fill_bytes(&mut bytes)
        .map_err(|e| ApiError::Internal(format!("entropy: {e}")))?;
    Ok(URL_SAFE_NO_PAD.encode(bytes))
}

fn fresh_seed() -> Result<u64, ApiError> {
    OsRng.try_next_u64().map_err(|e| ApiError::Internal(format!("entropy: {e}")))
}

/// Issue and verify logic, independent of the HTTP layer.
pub struct Service {
    config: ServiceConfig,
    store: Arc<dyn SessionStore>,
    clock: Arc<dyn Clock>,
}

impl Service {
    pub fn new(config: ServiceConfig) -> Self {
        let store = Arc::new(MemoryStore::new(config.max_pending_sessions));
        Self::with_parts(config, store, Arc::new(SystemClock))
    }

    pub fn with_parts(config: ServiceConfig, store: Arc<dyn SessionStore>, clock: Arc<dyn Clock>) -> Self {
        Self { config, store, clock }
    }

    pub fn config(&self) -> &ServiceConfig {
        &self.config
    }

    pub fn store(&self) -> &dyn SessionStore {
        self.store.as_ref()
    }

    pub fn now_ms(&self) -> u64 {
        self.clock.now_ms()
    }

    fn ensure_room(&self) -> Result<(), ApiError> {
        if self.store.len() >= self.store.capacity() {
            self.store.sweep(self.now_ms());
            if self.store.len() >= self.store.capacity() {
                return Err(ApiError::Overloaded);
            }
        }
        Ok(())
    }

    pub fn create_challenge(&self, kind: ChallengeKind, seed: Option<u64>) -> Result<IssuedChallenge, ApiError> {
        if seed.is_some() && !self.config.dev_seed_allowed {
            return Err(ApiError::SeedForbidden);
        }
        self.ensure_room()?;
        let seed = match seed {
            Some(s) => s,
            None => fresh_seed()?,
        };
        let spec = self.config.spec_for(kind, seed);
        let (challenge, mut truth) =
            generate_challenge(&spec).map_err(|e| ApiError::Internal(e.to_string()))?;
        let png = challenge.image.to_png().map_err(|e| ApiError::Internal(e.to_string()))?;

        let id = fresh_id()?;
        let now = self.now_ms();
        truth.challenge_id = id.clone();
        truth.created_at = now;
        let session = Session::new(id.clone(), truth, now, self.config.ttl_ms());
        let expires_at = session.expires_at;
        self.store.put(session, now).map_err(|e| match e {
            StoreError::Full => ApiError::Overloaded,
            StoreError::Duplicate => ApiError::Internal("id collision".into()),
        })?;
        tracing::info!(%id, kind = kind.as_str(), "challenge issued");
        Ok(IssuedChallenge {
            id,
            png,
            width: challenge.image.width(),
            height: challenge.image.height(),
            instruction: challenge.instruction,
            expires_at,
        })
    }

    fn live(lookup: Lookup) -> Result<Session, ApiError> {
        match lookup {
            Lookup::Live(s) => Ok(s),
            Lookup::Unknown => Err(ApiError::NotFound),
            Lookup::Expired => Err(ApiError::Expired),
            Lookup::Consumed => Err(ApiError::Consumed),
        }
    }

    /// Consumes the session, then grades. A second call for the same id fails with `Consumed`.
    pub fn verify(&self, id: &str, trace: &Trace) -> Result<Verdict, ApiError> {
        let session = Self::live(self.store.take(id, self.now_ms()))?;
        let verdict = grade(trace, &session.truth, &self.config.policy);
        tracing::info!(%id, pass = verdict.pass, reason = ?verdict.reason, "challenge graded");
        Ok(verdict)
    }

    /// Re-renders the PNG of a pending challenge from its seed.
    pub fn image_png(&self, id: &str) -> Result<Vec<u8>, ApiError> {
        let session = Self::live(self.store.peek(id, self.now_ms()))?;
        let spec = self.config.spec_for(session.truth.kind, session.truth.seed);
        let (challenge, _) = generate_challenge(&spec).map_err(|e| ApiError::Internal(e.to_string()))?;
        challenge.image.to_png().map_err(|e| ApiError::Internal(e.to_string()))
    }

    /// Ground truth of a pending challenge. Only reachable in dev mode.
    pub fn dev_truth(&self, id: &str) -> Result<GroundTruth, ApiError> {
        if !self.config.dev_seed_allowed {
            return Err(ApiError::NotFound);
        }
        Ok(Self::live(self.store.peek(id, self.now_ms()))?.truth)
    }

    pub fn sweep_expired(&self) -> usize {
        let removed = self.store.sweep(self.now_ms());
        if removed > 0 {
            tracing::debug!(removed, "expired sessions swept");
        }
        removed
    }
}

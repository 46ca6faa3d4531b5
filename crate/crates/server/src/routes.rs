use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::header;
use axum::response::IntoResponse;
use axum::routing::{get, post};
use axum::{Json, Router};
use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use linecaptcha::{ChallengeKind, GroundTruth, InstructionHint, Trace, Verdict};
use serde::{Deserialize, Serialize};

use crate::error::ApiError;
use crate::service::Service;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChallengeRequest {
    pub kind: ChallengeKind,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChallengeResponse {
    pub id: String,
    pub image_b64: String,
    pub width: u32,
    pub height: u32,
    pub instruction: InstructionHint,
    pub expires_at: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyRequest {
    pub id: String,
    pub trace: Trace,
}

fn parse<T: serde::de::DeserializeOwned>(body: &[u8]) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::BadRequest(e.to_string()))
}

async fn blocking<T, F>(f: F) -> Result<T, ApiError>
where
    F: FnOnce() -> Result<T, ApiError> + Send + 'static,
    T: Send + 'static,
{
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))?
}

async fn health() -> Json<serde_json::Value> {
    Json(serde_json::json!({ "status": "ok" }))
}

async fn create_challenge(
    State(svc): State<Arc<Service>>,
    body: Bytes,
) -> Result<Json<ChallengeResponse>, ApiError> {
    let req: ChallengeRequest = parse(&body)?;
    let issued = blocking(move || svc.create_challenge(req.kind, req.seed)).await?;
    Ok(Json(ChallengeResponse {
        id: issued.id,
        image_b64: STANDARD.encode(&issued.png),
        width: issued.width,
        height: issued.height,
        instruction: issued.instruction,
        expires_at: issued.expires_at,
    }))
}

async fn challenge_image(
    State(svc): State<Arc<Service>>,
    Path(id): Path<String>,
) -> Result<impl IntoResponse, ApiError> {
    let png = blocking(move || svc.image_png(&id)).await?;
    Ok(([(header::CONTENT_TYPE, "image/png"), (header::CACHE_CONTROL, "no-store")], png))
}

async fn verify(State(svc): State<Arc<Service>>, body: Bytes) -> Result<Json<Verdict>, ApiError> {
    let req: VerifyRequest = parse(&body)?;
    let verdict = blocking(move || svc.verify(&req.id, &req.trace)).await?;
    Ok(Json(verdict))
}

async fn dev_truth(
    State(svc): State<Arc<Service>>,
    Path(id): Path<String>,
) -> Result<Json<GroundTruth>, ApiError> {
    Ok(Json(svc.dev_truth(&id)?))
}

/// The `/v1` API. The ground-truth route exists only in dev mode.
pub fn router(svc: Arc<Service>) -> Router {
    let mut r = Router::new()
        .route("/v1/health", get(health))
        .route("/v1/challenge", post(create_challenge))
        .route("/v1/challenge/{id}/image", get(challenge_image))
        .route("/v1/verify", post(verify));
    if svc.config().dev_seed_allowed {
        r = r.route("/v1/dev/challenge/{id}/truth", get(dev_truth));
    }
    r.with_state(svc)
}

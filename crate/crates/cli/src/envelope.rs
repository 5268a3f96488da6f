use serde::Serialize;
use sha2::{Digest, Sha256};

use adklab::domain_model::{DomainModel, SCHEMA_VERSION};

#[derive(Serialize)]
pub struct ModelInfo {
    pub name: String,
    /// SHA-256 of the canonical model JSON.
    pub sha256: String,
}

impl ModelInfo {
    pub fn of(model: &DomainModel) -> Self {
        ModelInfo {
            name: model.name.clone(),
            sha256: hex::encode(Sha256::digest(model.to_json().as_bytes())),
        }
    }
}

#[derive(Serialize)]
pub struct ReportEnvelope<P: Serialize> {
    pub schema: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub model: ModelInfo,
    pub command: String,
    /// Results hold for the given valuation data, not for an actual domain.
    pub scope: &'static str,
    pub timestamp: String,
    pub payload: P,
}

impl<P: Serialize> ReportEnvelope<P> {
    pub fn new(model: &DomainModel, command: String, payload: P) -> Self {
        ReportEnvelope {
            schema: SCHEMA_VERSION,
            tool: "adklab",
            version: env!("CARGO_PKG_VERSION"),
            model: ModelInfo::of(model),
            command,
            scope: "model-level result",
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            payload,
        }
    }
}

/// Error object printed on standard output for failing runs.
#[derive(Serialize)]
pub struct ErrorReport {
    pub error: String,
    pub kind: &'static str,
    pub message: String,
}

//! Backend-neutral chat-completion types, the [`Gateway`] trait every prompt
//! goes through, cache keys, and the offline [`MockBackend`].
//!
//! The HTTP client, retry loop and on-disk cache are std-only and live in the
//! `founderseg` crate; they implement or wrap [`Gateway`].

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use core::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::segmentation::PromptKind;

/// Token placed in synthetic profiles and mock summaries so the mock can tell
/// which founder a prompt is about, e.g. `founder-id=syn-0007`.
pub const MOCK_FOUNDER_MARKER: &str = "founder-id=";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LlmRequest {
    pub model_id: String,
    /// Sent as the single user message.
    pub prompt: String,
    pub temperature: f64,
    pub max_output_tokens: u32,
}

impl LlmRequest {
    pub fn new(
        model_id: impl Into<String>,
        prompt: impl Into<String>,
        temperature: f64,
        max_output_tokens: u32,
    ) -> Result<Self, GatewayError> {
        let prompt = prompt.into();
        if prompt.is_empty() {
            return Err(GatewayError::InvalidRequest("empty prompt".into()));
        }
        if !(temperature.is_finite() && temperature >= 0.0) {
            return Err(GatewayError::InvalidRequest(alloc::format!(
                "temperature {temperature} is not a finite non-negative number"
            )));
        }
        Ok(Self {
            model_id: model_id.into(),
            prompt,
            temperature,
            max_output_tokens,
        })
    }

    pub fn cache_key(&self) -> String {
        cache_key(&self.model_id, &self.prompt, self.temperature)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Live,
    Cache,
    Mock,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LlmResponse {
    /// Raw completion text, never post-processed.
    pub text: String,
    pub backend: BackendKind,
    pub latency_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub response_text: String,
    /// Seconds since the Unix epoch.
    pub created_at: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GatewayError {
    #[error("authentication failed (HTTP {status})")]
    Auth { status: u16 },
    #[error("rate limited; gave up after {attempts} attempts")]
    RateLimited { attempts: u32 },
    #[error("request timed out")]
    Timeout,
    #[error("server error HTTP {status}")]
    Server { status: u16 },
    #[error("HTTP {status}: {body}")]
    Http { status: u16, body: String },
    #[error("transport error: {0}")]
    Transport(String),
    #[error("malformed provider response: {0}")]
    Malformed(String),
    #[error("no canned completion for prompt {fingerprint}")]
    MockMiss { fingerprint: String },
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("gateway configuration: {0}")]
    Config(String),
}

impl GatewayError {
    /// Timeouts, 429 and 5xx are worth another attempt; nothing else is.
    pub fn is_retryable(&self) -> bool {
        matches!(
            self,
            GatewayError::RateLimited { .. } | GatewayError::Timeout | GatewayError::Server { .. }
        )
    }
}

/// Anything that turns a request into a completion.
pub trait Gateway {
    fn complete(&self, req: &LlmRequest) -> Result<LlmResponse, GatewayError>;
}

impl<G: Gateway + ?Sized> Gateway for &G {
    fn complete(&self, req: &LlmRequest) -> Result<LlmResponse, GatewayError> {
        (**self).complete(req)
    }
}

impl<G: Gateway + ?Sized> Gateway for alloc::boxed::Box<G> {
    fn complete(&self, req: &LlmRequest) -> Result<LlmResponse, GatewayError> {
        (**self).complete(req)
    }
}

impl<G: Gateway + ?Sized> Gateway for alloc::sync::Arc<G> {
    fn complete(&self, req: &LlmRequest) -> Result<LlmResponse, GatewayError> {
        (**self).complete(req)
    }
}

fn sha256_hex(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    hex::encode(h.finalize())
}

/// SHA-256 over the length-prefixed model id, prompt and the bit pattern of
/// the temperature.
pub fn cache_key(model_id: &str, prompt: &str, temperature: f64) -> String {
    // -0.0 and 0.0 are the same request.
    let t = if temperature == 0.0 { 0.0f64 } else { temperature };
    sha256_hex(&[model_id.as_bytes(), prompt.as_bytes(), &t.to_bits().to_le_bytes()])
}

/// SHA-256 of the prompt bytes alone, hex encoded.
pub fn prompt_fingerprint(prompt: &str) -> String {
    content_hash(prompt.as_bytes())
}

/// Hex SHA-256 of arbitrary bytes.
pub fn content_hash(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    hex::encode(h.finalize())
}

/// The founder id following [`MOCK_FOUNDER_MARKER`], if the prompt has one.
pub fn embedded_founder_id(prompt: &str) -> Option<&str> {
    let start = prompt.find(MOCK_FOUNDER_MARKER)? + MOCK_FOUNDER_MARKER.len();
    let rest = &prompt[start..];
    let end = rest
        .find(|c: char| !(c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | ':' | '.')))
        .unwrap_or(rest.len());
    let id = rest[..end].trim_end_matches('.');
    (!id.is_empty()).then_some(id)
}

/// Canned completions for offline runs.
///
/// Lookup order: exact prompt fingerprint, then `(prompt kind, founder id)`
/// where the kind comes from [`PromptKind::detect`] and the id from
/// [`embedded_founder_id`], then a per-kind default. Anything else is a
/// [`GatewayError::MockMiss`].
#[derive(Debug, Default)]
pub struct MockBackend {
    by_fingerprint: BTreeMap<String, String>,
    by_founder: BTreeMap<(PromptKind, String), String>,
    by_kind: BTreeMap<PromptKind, String>,
    calls: AtomicUsize,
}

impl MockBackend {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_prompt(mut self, prompt: &str, completion: impl Into<String>) -> Self {
        self.insert_prompt(prompt, completion);
        self
    }

    pub fn with_founder(mut self, kind: PromptKind, founder_id: &str, completion: impl Into<String>) -> Self {
        self.insert_founder(kind, founder_id, completion);
        self
    }

    pub fn insert_prompt(&mut self, prompt: &str, completion: impl Into<String>) {
        self.by_fingerprint.insert(prompt_fingerprint(prompt), completion.into());
    }

    pub fn insert_fingerprint(&mut self, fingerprint: impl Into<String>, completion: impl Into<String>) {
        self.by_fingerprint.insert(fingerprint.into(), completion.into());
    }

    pub fn insert_founder(&mut self, kind: PromptKind, founder_id: &str, completion: impl Into<String>) {
        self.by_founder.insert((kind, founder_id.to_string()), completion.into());
    }

    pub fn with_kind_default(mut self, kind: PromptKind, completion: impl Into<String>) -> Self {
        self.insert_kind_default(kind, completion);
        self
    }

    pub fn insert_kind_default(&mut self, kind: PromptKind, completion: impl Into<String>) {
        self.by_kind.insert(kind, completion.into());
    }

    /// Number of `complete` calls served or missed so far.
    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }

    pub fn len(&self) -> usize {
        self.by_fingerprint.len() + self.by_founder.len() + self.by_kind.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn lookup(&self, prompt: &str) -> Option<&String> {
        let fp = prompt_fingerprint(prompt);
        if let Some(c) = self.by_fingerprint.get(&fp) {
            return Some(c);
        }
        let kind = PromptKind::detect(prompt)?;
        embedded_founder_id(prompt)
            .and_then(|id| self.by_founder.get(&(kind, id.to_string())))
            .or_else(|| self.by_kind.get(&kind))
    }
}

impl Gateway for MockBackend {
    fn complete(&self, req: &LlmRequest) -> Result<LlmResponse, GatewayError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        match self.lookup(&req.prompt) {
            Some(text) => Ok(LlmResponse {
                text: text.clone(),
                backend: BackendKind::Mock,
                latency_ms: 0,
            }),
            None => Err(GatewayError::MockMiss {
                fingerprint: prompt_fingerprint(&req.prompt),
            }),
        }
    }
}

/// A gateway driven by a closure; handy for scripted tests.
pub struct FnGateway<F>(pub F);

impl<F> Gateway for FnGateway<F>
where
    F: Fn(&LlmRequest) -> Result<String, GatewayError>,
{
    fn complete(&self, req: &LlmRequest) -> Result<LlmResponse, GatewayError> {
        (self.0)(req).map(|text| LlmResponse {
            text,
            backend: BackendKind::Mock,
            latency_ms: 0,
        })
    }
}

use std::time::{Duration, Instant};

use founderseg_core::llm_gateway::{BackendKind, Gateway, GatewayError, LlmRequest, LlmResponse};
use serde_json::{json, Value};

pub const API_KEY_ENV: &str = "FS_LLM_API_KEY";
pub const ENDPOINT_ENV: &str = "FS_LLM_ENDPOINT";
pub const DEFAULT_ENDPOINT: &str = "https://api.openai.com/v1/chat/completions";

/// Chat-completions client: one user message per request, the answer read
/// from `choices[0].message.content`.
pub struct HttpBackend {
    agent: ureq::Agent,
    endpoint: String,
    api_key: String,
}

impl std::fmt::Debug for HttpBackend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HttpBackend").field("endpoint", &self.endpoint).finish_non_exhaustive()
    }
}

impl HttpBackend {
    pub fn new(endpoint: impl Into<String>, api_key: impl Into<String>, timeout: Duration) -> Self {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(timeout))
            .http_status_as_error(false)
            .build()
            .into();
        Self {
            agent,
            endpoint: endpoint.into(),
            api_key: api_key.into(),
        }
    }

    /// Credential from `FS_LLM_API_KEY`; endpoint from `FS_LLM_ENDPOINT`,
    /// then `endpoint`, then the default.
    pub fn from_env(endpoint: Option<&str>, timeout: Duration) -> Result<Self, GatewayError> {
        let key = std::env::var(API_KEY_ENV)
            .ok()
            .filter(|k| !k.trim().is_empty())
            .ok_or_else(|| GatewayError::Config(format!("{API_KEY_ENV} is not set")))?;
        let url = std::env::var(ENDPOINT_ENV)
            .ok()
            .filter(|u| !u.trim().is_empty())
            .or_else(|| endpoint.map(str::to_string))
            .unwrap_or_else(|| DEFAULT_ENDPOINT.to_string());
        Ok(Self::new(url, key, timeout))
    }
}

fn classify(status: u16, body: String) -> GatewayError {
    match status {
        401 | 403 => GatewayError::Auth { status },
        408 => GatewayError::Timeout,
        429 => GatewayError::RateLimited { attempts: 1 },
        500..=599 => GatewayError::Server { status },
        _ => GatewayError::Http { status, body },
    }
}

fn transport(e: ureq::Error) -> GatewayError {
    match e {
        ureq::Error::Timeout(_) => GatewayError::Timeout,
        other => GatewayError::Transport(other.to_string()),
    }
}

impl Gateway for HttpBackend {
    fn complete(&self, req: &LlmRequest) -> Result<LlmResponse, GatewayError> {
        let body = json!({
            "model": req.model_id,
            "messages": [{"role": "user", "content": req.prompt}],
            "temperature": req.temperature,
            "max_tokens": req.max_output_tokens,
        });
        let start = Instant::now();
        let mut resp = self
            .agent
            .post(&self.endpoint)
            .header("Authorization", format!("Bearer {}", self.api_key))
            .send_json(&body)
            .map_err(transport)?;
        let status = resp.status().as_u16();
        let text = resp.body_mut().read_to_string().map_err(transport)?;
        if !(200..300).contains(&status) {
            return Err(classify(status, text));
        }
        let v: Value = serde_json::from_str(&text).map_err(|e| GatewayError::Malformed(e.to_string()))?;
        let content = v
            .pointer("/choices/0/message/content")
            .and_then(Value::as_str)
            .ok_or_else(|| GatewayError::Malformed("no choices[0].message.content".into()))?;
        Ok(LlmResponse {
            text: content.to_string(),
            backend: BackendKind::Live,
            latency_ms: start.elapsed().as_millis() as u64,
        })
    }
}

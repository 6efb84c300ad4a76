use std::time::Duration;

use founderseg_core::llm_gateway::{Gateway, GatewayError, LlmRequest, LlmResponse};
use serde::{Deserialize, Serialize};

/// Exponential backoff on retryable errors only (timeouts, 429, 5xx).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    pub base_delay_ms: u64,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self {
            max_attempts: 5,
            base_delay_ms: 1000,
        }
    }
}

impl RetryPolicy {
    /// Wait before retry number `retry` (1-based): base, 2 base, 4 base...
    pub fn delay(&self, retry: u32) -> Duration {
        let factor = 1u64 << retry.saturating_sub(1).min(20);
        Duration::from_millis(self.base_delay_ms.saturating_mul(factor))
    }
}

pub struct RetryingGateway<G> {
    inner: G,
    policy: RetryPolicy,
    sleep: fn(Duration),
}

impl<G> RetryingGateway<G> {
    pub fn new(inner: G, policy: RetryPolicy) -> Self {
        Self {
            inner,
            policy,
            sleep: std::thread::sleep,
        }
    }

    /// Replaces the sleep function, for tests.
    pub fn with_sleep(mut self, sleep: fn(Duration)) -> Self {
        self.sleep = sleep;
        self
    }
}

impl<G: Gateway> Gateway for RetryingGateway<G> {
    fn complete(&self, req: &LlmRequest) -> Result<LlmResponse, GatewayError> {
        let attempts = self.policy.max_attempts.max(1);
        let mut attempt = 1;
        loop {
            match self.inner.complete(req) {
                Ok(r) => return Ok(r),
                Err(e) if e.is_retryable() && attempt < attempts => {
                    log::warn!("attempt {attempt}/{attempts} failed: {e}; retrying");
                    (self.sleep)(self.policy.delay(attempt));
                    attempt += 1;
                }
                Err(GatewayError::RateLimited { .. }) => return Err(GatewayError::RateLimited { attempts: attempt }),
                Err(e) => return Err(e),
            }
        }
    }
}

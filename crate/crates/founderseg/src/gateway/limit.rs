use std::sync::{Condvar, Mutex};

use founderseg_core::llm_gateway::{Gateway, GatewayError, LlmRequest, LlmResponse};

/// Counting semaphore.
#[derive(Debug)]
pub struct InFlightLimit {
    max: usize,
    used: Mutex<usize>,
    freed: Condvar,
}

pub struct Permit<'a>(&'a InFlightLimit);

impl Drop for Permit<'_> {
    fn drop(&mut self) {
        *self.0.used.lock().unwrap_or_else(|p| p.into_inner()) -= 1;
        self.0.freed.notify_one();
    }
}

impl InFlightLimit {
    pub fn new(max: usize) -> Self {
        Self {
            max: max.max(1),
            used: Mutex::new(0),
            freed: Condvar::new(),
        }
    }

    pub fn acquire(&self) -> Permit<'_> {
        let mut used = self.used.lock().unwrap_or_else(|p| p.into_inner());
        while *used >= self.max {
            used = self.freed.wait(used).unwrap_or_else(|p| p.into_inner());
        }
        *used += 1;
        Permit(self)
    }

    pub fn max(&self) -> usize {
        self.max
    }
}

/// At most `limit.max()` calls to `inner` run at once.
pub struct LimitedGateway<G> {
    inner: G,
    limit: InFlightLimit,
}

impl<G> LimitedGateway<G> {
    pub fn new(inner: G, max_in_flight: usize) -> Self {
        Self {
            inner,
            limit: InFlightLimit::new(max_in_flight),
        }
    }
}

impl<G: Gateway> Gateway for LimitedGateway<G> {
    fn complete(&self, req: &LlmRequest) -> Result<LlmResponse, GatewayError> {
        let _permit = self.limit.acquire();
        self.inner.complete(req)
    }
}

//! Gateway implementations that need the operating system: HTTP, retry
//! with sleeping, an in-flight bound and the on-disk cache.

mod cache;
mod http;
mod limit;
mod mock_fixtures;
mod retry;

pub use cache::{CacheStore, CachedGateway};
pub use http::{HttpBackend, API_KEY_ENV, DEFAULT_ENDPOINT, ENDPOINT_ENV};
pub use limit::{InFlightLimit, LimitedGateway};
pub use mock_fixtures::{load_mock_fixtures, write_mock_fixtures, MockFixture};
pub use retry::{RetryPolicy, RetryingGateway};

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{SystemTime, UNIX_EPOCH};

use founderseg_core::llm_gateway::{BackendKind, CacheEntry, Gateway, GatewayError, LlmRequest, LlmResponse};

/// Completions keyed by request hash, persisted one JSON object per line.
///
/// Writes are serialized by a mutex. If the file cannot be opened or
/// written the store keeps working in memory and logs a warning.
#[derive(Debug)]
pub struct CacheStore {
    path: Option<PathBuf>,
    inner: Mutex<Inner>,
}

#[derive(Debug, Default)]
struct Inner {
    entries: HashMap<String, String>,
    file: Option<File>,
}

impl CacheStore {
    pub fn in_memory() -> Self {
        Self {
            path: None,
            inner: Mutex::new(Inner::default()),
        }
    }

    /// Loads existing entries (the first line for a key wins; unreadable
    /// lines are skipped) and opens the file for appending.
    pub fn open(path: &Path) -> Self {
        let mut inner = Inner::default();
        if let Ok(f) = File::open(path) {
            for (i, line) in BufReader::new(f).lines().enumerate() {
                let Ok(line) = line else { break };
                if line.trim().is_empty() {
                    continue;
                }
                match serde_json::from_str::<CacheEntry>(&line) {
                    Ok(e) => {
                        inner.entries.entry(e.key).or_insert(e.response_text);
                    }
                    Err(e) => log::warn!("{}:{}: skipping cache line: {e}", path.display(), i + 1),
                }
            }
        }
        let opened = path
            .parent()
            .map_or(Ok(()), std::fs::create_dir_all)
            .and_then(|_| OpenOptions::new().create(true).append(true).open(path));
        match opened {
            Ok(f) => inner.file = Some(f),
            Err(e) => log::warn!("cache {} not writable ({e}); continuing without persistence", path.display()),
        }
        Self {
            path: Some(path.to_path_buf()),
            inner: Mutex::new(inner),
        }
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, Inner> {
        self.inner.lock().unwrap_or_else(|p| p.into_inner())
    }

    pub fn get(&self, key: &str) -> Option<String> {
        self.lock().entries.get(key).cloned()
    }

    /// Stores an entry unless the key is already present. Returns whether
    /// it was new.
    pub fn put(&self, entry: CacheEntry) -> bool {
        let mut inner = self.lock();
        if inner.entries.contains_key(&entry.key) {
            return false;
        }
        if let Some(f) = inner.file.as_mut() {
            let line = serde_json::to_string(&entry).expect("cache entry serializes");
            if let Err(e) = writeln!(f, "{line}").and_then(|_| f.flush()) {
                log::warn!("cache write failed ({e}); entry kept in memory only");
            }
        }
        inner.entries.insert(entry.key, entry.response_text);
        true
    }

    pub fn len(&self) -> usize {
        self.lock().entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Serves repeated requests from a [`CacheStore`].
pub struct CachedGateway<'a, G> {
    inner: G,
    store: &'a CacheStore,
}

impl<'a, G> CachedGateway<'a, G> {
    pub fn new(inner: G, store: &'a CacheStore) -> Self {
        Self { inner, store }
    }
}

fn now_secs() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

impl<G: Gateway> Gateway for CachedGateway<'_, G> {
    fn complete(&self, req: &LlmRequest) -> Result<LlmResponse, GatewayError> {
        let key = req.cache_key();
        if let Some(text) = self.store.get(&key) {
            return Ok(LlmResponse {
                text,
                backend: BackendKind::Cache,
                latency_ms: 0,
            });
        }
        let resp = self.inner.complete(req)?;
        self.store.put(CacheEntry {
            key,
            response_text: resp.text.clone(),
            created_at: now_secs(),
        });
        Ok(resp)
    }
}

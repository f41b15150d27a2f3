//! Sources of exact-match hit counts.

use chrono::{DateTime, TimeZone, Utc};
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::cache::{HitCache, HitRecord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProviderError {
    /// A single query failed; worth retrying.
    #[error("query failed: {0}")]
    Failed(String),
    /// The provider cannot serve any query (bad credentials, no network).
    #[error("provider unavailable: {0}")]
    Unavailable(String),
    #[error("quota exceeded")]
    QuotaExceeded,
}

/// Something that can count exact-match (quoted) occurrences of a form.
pub trait HitProvider: Send + Sync {
    /// Identifier stored in the `source` column of the cache.
    fn id(&self) -> &str;

    fn query(&self, form: &str) -> Result<HitRecord, ProviderError>;
}

/// Serves records from an existing cache file; never touches the network.
pub struct CacheProvider {
    cache: HitCache,
}

impl CacheProvider {
    pub fn new(cache: HitCache) -> Self {
        CacheProvider { cache }
    }
}

impl HitProvider for CacheProvider {
    fn id(&self) -> &str {
        "cache"
    }

    fn query(&self, form: &str) -> Result<HitRecord, ProviderError> {
        self.cache
            .get(form)
            .cloned()
            .ok_or_else(|| ProviderError::Failed(format!("{form} is not cached")))
    }
}

/// Deterministic pseudo hit counts with a long-tailed distribution, for
/// building offline fixtures. Hits are `floor(10^(8u)) - 1` where `u` is
/// derived from a SHA-256 of the form, so roughly one form in eight lands at
/// or below 10 hits.
pub struct SyntheticProvider {
    fetched_at: DateTime<Utc>,
}

impl SyntheticProvider {
    pub fn new() -> Self {
        SyntheticProvider {
            fetched_at: Utc.with_ymd_and_hms(2024, 1, 1, 0, 0, 0).unwrap(),
        }
    }

    pub fn hits_for(form: &str) -> u64 {
        let digest = Sha256::digest(form.as_bytes());
        let mut head = [0u8; 8];
        head.copy_from_slice(&digest[..8]);
        let u = u64::from_be_bytes(head) as f64 / u64::MAX as f64;
        (10f64.powf(8.0 * u).floor() as u64).saturating_sub(1)
    }
}

impl Default for SyntheticProvider {
    fn default() -> Self {
        Self::new()
    }
}

impl HitProvider for SyntheticProvider {
    fn id(&self) -> &str {
        "synthetic"
    }

    fn query(&self, form: &str) -> Result<HitRecord, ProviderError> {
        Ok(HitRecord {
            surface_form: form.to_string(),
            hits: Self::hits_for(form),
            source: self.id().to_string(),
            fetched_at: self.fetched_at,
        })
    }
}

#[cfg(feature = "live")]
pub use live::{SerpApiConfig, SerpApiProvider};

#[cfg(feature = "live")]
mod live {
    use std::time::Duration;

    use chrono::Utc;

    use super::{HitProvider, HitRecord, ProviderError};

    #[derive(Debug, Clone)]
    pub struct SerpApiConfig {
        pub endpoint: String,
        /// Name of the environment variable holding the API key.
        pub api_key_env: String,
        pub timeout: Duration,
    }

    impl Default for SerpApiConfig {
        fn default() -> Self {
            SerpApiConfig {
                endpoint: "https://serpapi.com/search.json".into(),
                api_key_env: "SERPAPI_API_KEY".into(),
                timeout: Duration::from_secs(30),
            }
        }
    }

    /// Google result counts through SerpApi, one quoted query per form.
    pub struct SerpApiProvider {
        config: SerpApiConfig,
        api_key: String,
        client: reqwest::blocking::Client,
    }

    impl SerpApiProvider {
        pub fn new(config: SerpApiConfig) -> Result<Self, ProviderError> {
            let api_key = std::env::var(&config.api_key_env)
                .map_err(|_| ProviderError::Unavailable(format!("{} is not set", config.api_key_env)))?;
            let client = reqwest::blocking::Client::builder()
                .timeout(config.timeout)
                .build()
                .map_err(|e| ProviderError::Unavailable(e.to_string()))?;
            Ok(SerpApiProvider {
                config,
                api_key,
                client,
            })
        }
    }

    impl HitProvider for SerpApiProvider {
        fn id(&self) -> &str {
            "serpapi"
        }

        fn query(&self, form: &str) -> Result<HitRecord, ProviderError> {
            let quoted = format!("\"{form}\"");
            let resp = self
                .client
                .get(&self.config.endpoint)
                .query(&[
                    ("engine", "google"),
                    ("q", quoted.as_str()),
                    ("api_key", self.api_key.as_str()),
                ])
                .send()
                .map_err(|e| ProviderError::Failed(e.to_string()))?;
            match resp.status().as_u16() {
                429 => return Err(ProviderError::QuotaExceeded),
                401 | 403 => return Err(ProviderError::Unavailable(format!("HTTP {}", resp.status()))),
                s if !(200..300).contains(&s) => return Err(ProviderError::Failed(format!("HTTP {s}"))),
                _ => {}
            }
            let body: serde_json::Value = resp.json().map_err(|e| ProviderError::Failed(e.to_string()))?;
            let info = &body["search_information"];
            let hits = match info["total_results"].as_u64() {
                Some(n) => n,
                // SerpApi omits the count when Google returns nothing at all
                None if info["organic_results_state"].as_str() == Some("Fully empty") => 0,
                None => return Err(ProviderError::Failed("response has no result count".into())),
            };
            Ok(HitRecord {
                surface_form: form.to_string(),
                hits,
                source: self.id().to_string(),
                fetched_at: Utc::now(),
            })
        }
    }
}

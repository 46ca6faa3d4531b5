use std::collections::HashMap;
use std::path::Path;

use linecaptcha::{ChallengeKind, ChallengeSpec, GradingPolicy};
use serde::{Deserialize, Serialize};

use crate::error::ConfigError;

pub const ENV_PREFIX: &str = "LINECAPTCHA_";

/// Service settings, loaded from TOML with `LINECAPTCHA_*` environment overrides.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServiceConfig {
    pub bind_address: String,
    pub ttl_seconds: u64,
    pub max_pending_sessions: usize,
    /// Accept caller-chosen seeds and expose ground truth on `/v1/dev`.
    pub dev_seed_allowed: bool,
    pub sweep_interval_seconds: u64,
    /// Per-kind overrides of the generation parameters. `kind` and `seed` are ignored.
    pub specs: HashMap<ChallengeKind, ChallengeSpec>,
    pub policy: GradingPolicy,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            bind_address: "127.0.0.1:8080".into(),
            ttl_seconds: 120,
            max_pending_sessions: 10_000,
            dev_seed_allowed: false,
            sweep_interval_seconds: 10,
            specs: HashMap::new(),
            policy: GradingPolicy::default(),
        }
    }
}

impl ServiceConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads `path` (if given), then applies environment overrides.
    pub fn load(path: Option<&Path>) -> Result<Self, ConfigError> {
        let mut cfg = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| ConfigError::Io(format!("{}: {e}", p.display())))?;
                Self::from_toml(&text)?
            }
            None => Self::default(),
        };
        cfg.apply_env(std::env::vars())?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply_env<I: IntoIterator<Item = (String, String)>>(&mut self, vars: I) -> Result<(), ConfigError> {
        for (key, value) in vars {
            let Some(name) = key.strip_prefix(ENV_PREFIX) else { continue };
            let bad = |_| ConfigError::Env { key: key.clone(), value: value.clone() };
            match name {
                "BIND_ADDRESS" => self.bind_address = value.clone(),
                "TTL_SECONDS" => self.ttl_seconds = value.parse().map_err(bad)?,
                "MAX_PENDING_SESSIONS" => self.max_pending_sessions = value.parse().map_err(bad)?,
                "SWEEP_INTERVAL_SECONDS" => self.sweep_interval_seconds = value.parse().map_err(bad)?,
                "DEV_SEED_ALLOWED" => {
                    self.dev_seed_allowed = match value.to_ascii_lowercase().as_str() {
                        "1" | "true" | "yes" | "on" => true,
                        "0" | "false" | "no" | "off" => false,
                        _ => return Err(ConfigError::Env { key, value }),
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.ttl_seconds == 0 {
            return Err(ConfigError::Invalid("ttl_seconds must be positive".into()));
        }
        if self.max_pending_sessions == 0 {
            return Err(ConfigError::Invalid("max_pending_sessions must be positive".into()));
        }
        if self.sweep_interval_seconds == 0 {
            return Err(ConfigError::Invalid("sweep_interval_seconds must be positive".into()));
        }
        for kind in ChallengeKind::ALL {
            self.spec_for(kind, 0)
                .validate()
                .map_err(|e| ConfigError::Invalid(format!("spec for {kind}: {e}")))?;
        }
        self.policy
            .validate()
            .map_err(|e| ConfigError::Invalid(format!("policy: {e}")))
    }

    pub fn ttl_ms(&self) -> u64 {
        self.ttl_seconds.saturating_mul(1000)
    }

    pub fn spec_for(&self, kind: ChallengeKind, seed: u64) -> ChallengeSpec {
        let mut spec = self.specs.get(&kind).cloned().unwrap_or_default();
        spec.kind = kind;
        spec.seed = seed;
        spec
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = ServiceConfig::default();
        assert_eq!(c.ttl_seconds, 120);
        assert_eq!(c.max_pending_sessions, 10_000);
        assert!(!c.dev_seed_allowed);
        c.validate().unwrap();
    }

    #[test]
    fn toml_with_spec_override() {
        let c = ServiceConfig::from_toml(
            r#"
ttl_seconds = 30
dev_seed_allowed = true

[specs.segmented]
distractor_count = [10, 20]

[policy]
epsilon = 12.0
"#,
        )
        .unwrap();
        assert_eq!(c.ttl_seconds, 30);
        assert!(c.dev_seed_allowed);
        let s = c.spec_for(ChallengeKind::SegmentedLine, 9);
        assert_eq!(s.distractor_count.min, 10);
        assert_eq!(s.kind, ChallengeKind::SegmentedLine);
        assert_eq!(s.seed, 9);
        assert_eq!(c.policy.epsilon, 12.0);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(ServiceConfig::from_toml("ttl_seconds = 0").is_err());
        assert!(ServiceConfig::from_toml("max_pending_sessions = 0").is_err());
        assert!(ServiceConfig::from_toml("bogus = 1").is_err());
        assert!(ServiceConfig::from_toml("[specs.blurred]\nwidth = 10").is_err());
    }

    #[test]
    fn env_overrides() {
        let mut c = ServiceConfig::default();
        let vars = [
            ("LINECAPTCHA_TTL_SECONDS", "5"),
            ("LINECAPTCHA_DEV_SEED_ALLOWED", "true"),
            ("LINECAPTCHA_BIND_ADDRESS", "0.0.0.0:9000"),
            ("UNRELATED", "x"),
        ];
        c.apply_env(vars.iter().map(|(k, v)| (k.to_string(), v.to_string()))).unwrap();
        assert_eq!(c.ttl_seconds, 5);
        assert!(c.dev_seed_allowed);
        assert_eq!(c.bind_address, "0.0.0.0:9000");
        let bad = [("LINECAPTCHA_TTL_SECONDS".to_string(), "soon".to_string())];
        assert!(c.apply_env(bad).is_err());
    }
}

//! Service configuration: TOML file, then `REFLECTOR_*` environment
//! variables, then command-line flags, each layer overriding the previous.

use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use reflector::gate::{GateConfig, GateMode};
use reflector::reasoner::PromptDb;
use reflector::{DataSource, EngineConfig, SeedPolicy};
use serde::{Deserialize, Serialize};

pub const DEFAULT_MAX_TEXT_CHARS: usize = 50_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServiceConfig {
    pub listen: SocketAddr,
    pub max_text_chars: usize,
    /// Append-only history file.
    pub store_path: PathBuf,
    /// Concurrent analyses; defaults to the number of CPUs.
    pub workers: Option<usize>,
    /// Directory whose files replace bundled lexicons of the same name.
    pub data_dir: Option<PathBuf>,
    pub forbidden_path: Option<PathBuf>,
    pub prompts_path: Option<PathBuf>,
    pub engine: EngineConfig,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            listen: SocketAddr::from(([127, 0, 0, 1], 8080)),
            max_text_chars: DEFAULT_MAX_TEXT_CHARS,
            store_path: PathBuf::from("reflections.jsonl"),
            workers: None,
            data_dir: None,
            forbidden_path: None,
            prompts_path: None,
            engine: EngineConfig::default(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Toml { path: PathBuf, source: toml::de::Error },
    #[error("{key}: invalid value {value:?}: {message}")]
    Invalid { key: String, value: String, message: String },
}

/// Values that may replace file settings. `None` leaves a setting alone.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigOverrides {
    pub listen: Option<SocketAddr>,
    pub max_text_chars: Option<usize>,
    pub store_path: Option<PathBuf>,
    pub workers: Option<usize>,
    pub data_dir: Option<PathBuf>,
    pub forbidden_path: Option<PathBuf>,
    pub prompts_path: Option<PathBuf>,
    pub gate_mode: Option<GateMode>,
    pub seed_policy: Option<SeedPolicy>,
}

pub const ENV_PREFIX: &str = "REFLECTOR_";

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e: T::Err| ConfigError::Invalid {
        key: key.to_string(),
        value: value.to_string(),
        message: e.to_string(),
    })
}

pub fn parse_gate_mode(value: &str) -> Result<GateMode, String> {
    match value {
        "disjunctive" => Ok(GateMode::Disjunctive),
        "conjunctive" => Ok(GateMode::Conjunctive),
        _ => Err("expected disjunctive or conjunctive".into()),
    }
}

/// `text_hash`, `random`, or a fixed integer seed.
pub fn parse_seed_policy(value: &str) -> Result<SeedPolicy, String> {
    match value {
        "text_hash" => Ok(SeedPolicy::TextHash),
        "random" => Ok(SeedPolicy::Random),
        n => n
            .parse()
            .map(SeedPolicy::Fixed)
            .map_err(|_| "expected text_hash, random or an integer".into()),
    }
}

impl ConfigOverrides {
    /// Reads `REFLECTOR_*` variables. Unknown names are ignored.
    pub fn from_env(vars: impl IntoIterator<Item = (String, String)>) -> Result<Self, ConfigError> {
        let mut out = ConfigOverrides::default();
        for (key, value) in vars {
            let Some(name) = key.strip_prefix(ENV_PREFIX) else { continue };
            match name {
                "LISTEN" => out.listen = Some(parse(&key, &value)?),
                "MAX_TEXT_CHARS" => out.max_text_chars = Some(parse(&key, &value)?),
                "STORE_PATH" => out.store_path = Some(value.into()),
                "WORKERS" => out.workers = Some(parse(&key, &value)?),
                "DATA_DIR" => out.data_dir = Some(value.into()),
                "FORBIDDEN_PATH" => out.forbidden_path = Some(value.into()),
                "PROMPTS_PATH" => out.prompts_path = Some(value.into()),
                "GATE_MODE" => {
                    out.gate_mode = Some(parse_gate_mode(&value).map_err(|message| {
                        ConfigError::Invalid { key: key.clone(), value: value.clone(), message }
                    })?)
                }
                "SEED" => {
                    out.seed_policy = Some(parse_seed_policy(&value).map_err(|message| {
                        ConfigError::Invalid { key: key.clone(), value: value.clone(), message }
                    })?)
                }
                _ => {}
            }
        }
        Ok(out)
    }

    pub fn apply(&self, config: &mut ServiceConfig) {
        fn set<T: Clone>(slot: &mut T, value: &Option<T>) {
            if let Some(v) = value {
                *slot = v.clone();
            }
        }
        set(&mut config.listen, &self.listen);
        set(&mut config.max_text_chars, &self.max_text_chars);
        set(&mut config.store_path, &self.store_path);
        if self.workers.is_some() {
            config.workers = self.workers;
        }
        if self.data_dir.is_some() {
            config.data_dir = self.data_dir.clone();
        }
        if self.forbidden_path.is_some() {
            config.forbidden_path = self.forbidden_path.clone();
        }
        if self.prompts_path.is_some() {
            config.prompts_path = self.prompts_path.clone();
        }
        set(&mut config.engine.gate.mode, &self.gate_mode);
        set(&mut config.engine.seed_policy, &self.seed_policy);
    }
}

impl ServiceConfig {
    pub fn from_toml(text: &str, path: &Path) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|source| ConfigError::Toml { path: path.to_path_buf(), source })
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        Self::from_toml(&text, path)
    }

    /// File (if any), then environment, then explicit overrides.
    pub fn resolve(
        file: Option<&Path>,
        env: impl IntoIterator<Item = (String, String)>,
        flags: &ConfigOverrides,
    ) -> Result<Self, ConfigError> {
        let mut config = match file {
            Some(path) => Self::from_file(path)?,
            None => ServiceConfig::default(),
        };
        ConfigOverrides::from_env(env)?.apply(&mut config);
        flags.apply(&mut config);
        Ok(config)
    }

    pub fn data_source(&self) -> DataSource {
        match &self.data_dir {
            Some(dir) => DataSource::with_dir(dir),
            None => DataSource::bundled(),
        }
    }

    pub fn worker_count(&self) -> usize {
        self.workers
            .filter(|n| *n > 0)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }

    /// The engine configuration with the forbidden list read from
    /// `forbidden_path` when set.
    pub fn engine_config(&self) -> Result<EngineConfig, ConfigError> {
        let mut engine = self.engine.clone();
        if let Some(path) = &self.forbidden_path {
            let text = std::fs::read_to_string(path)
                .map_err(|source| ConfigError::Io { path: path.clone(), source })?;
            engine.gate.forbidden = GateConfig::parse_forbidden(&text);
        }
        Ok(engine)
    }

    pub fn prompt_db(&self) -> Result<Option<PromptDb>, ConfigError> {
        let Some(path) = &self.prompts_path else { return Ok(None) };
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.clone(), source })?;
        PromptDb::from_json(&text).map(Some).map_err(|e| ConfigError::Invalid {
            key: "prompts_path".into(),
            value: path.display().to_string(),
            message: e.to_string(),
        })
    }
}

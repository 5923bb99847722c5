//! Real-time analysis service: a WebSocket and HTTP front end over the
//! feedback engine, with an append-only history store.

pub mod app;
pub mod config;
pub mod protocol;
pub mod store;

use std::sync::Arc;

use reflector::Engine;

pub use app::{router, AppState};
pub use config::{ConfigError, ConfigOverrides, ServiceConfig};
pub use store::{JsonlStore, ReflectionStore, StoreError};

#[derive(Debug, thiserror::Error)]
pub enum ServiceError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Engine(#[from] reflector::engine::EngineError),
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("cannot bind {addr}: {source}")]
    Bind { addr: std::net::SocketAddr, source: std::io::Error },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Loads the engine (lexicons, backends, prompts) exactly once.
pub fn load_engine(config: &ServiceConfig) -> Result<Engine, ServiceError> {
    let mut engine = Engine::load(&config.data_source(), config.engine_config()?)?;
    if let Some(prompts) = config.prompt_db()? {
        engine = engine.with_prompts(prompts);
    }
    Ok(engine)
}

pub fn build_state(config: &ServiceConfig) -> Result<AppState, ServiceError> {
    let engine = Arc::new(load_engine(config)?);
    let store: Arc<dyn ReflectionStore> = Arc::new(JsonlStore::open(&config.store_path)?);
    Ok(AppState::from_config(config, engine, store))
}

/// Binds the configured address and serves until the process stops.
pub async fn serve(config: ServiceConfig) -> Result<(), ServiceError> {
    let state = build_state(&config)?;
    let listener = tokio::net::TcpListener::bind(config.listen)
        .await
        .map_err(|source| ServiceError::Bind { addr: config.listen, source })?;
    tracing::info!(addr = %listener.local_addr()?, workers = config.worker_count(), "listening");
    axum::serve(listener, router(state)).await?;
    Ok(())
}

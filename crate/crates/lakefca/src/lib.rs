//! Ingestion, export, sessions, HTTP API and CLI around `lakefca-core`.

pub use lakefca_core as core;

pub mod cli;
pub mod error;
pub mod export;
pub mod ingest;
pub mod server;
pub mod session;

pub use error::{Error, IngestError, IngestWarning};

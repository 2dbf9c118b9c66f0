//! Reading schema sources and reading/writing formal contexts.

mod catalog;
mod crosstable;
mod cxt;
mod sources;

use std::path::Path;

use lakefca_core::FormalContext;

pub use catalog::{catalog_to_context, Catalog, SchemaRecord, SourceKind};
pub use crosstable::{parse_csv_crosstable, write_csv_crosstable};
pub use cxt::{parse_cxt, write_cxt};
pub use sources::{parse_es_mapping, parse_influx_schema, IngestOptions};

use crate::error::IngestError;

/// On-disk encodings of a context.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContextFormat {
    Cxt,
    Csv,
    /// Catalog JSON; attributes come out sorted.
    Catalog,
}

impl ContextFormat {
    /// By extension; anything unrecognised is read as CXT.
    pub fn from_path(path: &Path) -> Self {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .as_deref()
        {
            Some("csv") => ContextFormat::Csv,
            Some("json") => ContextFormat::Catalog,
            _ => ContextFormat::Cxt,
        }
    }

    pub fn parse(self, text: &str) -> Result<FormalContext, IngestError> {
        match self {
            ContextFormat::Cxt => parse_cxt(text),
            ContextFormat::Csv => parse_csv_crosstable(text),
            ContextFormat::Catalog => catalog_to_context(&Catalog::from_json(text)?),
        }
    }

    pub fn write(self, ctx: &FormalContext) -> Result<String, IngestError> {
        match self {
            ContextFormat::Cxt => write_cxt(ctx),
            ContextFormat::Csv => write_csv_crosstable(ctx),
            ContextFormat::Catalog => Ok(Catalog::from_context(ctx).to_json()),
        }
    }
}

pub fn load_context(path: &Path) -> Result<FormalContext, IngestError> {
    let text = std::fs::read_to_string(path)?;
    ContextFormat::from_path(path).parse(&text)
}

use std::collections::{BTreeSet, HashSet};

use lakefca_core::FormalContext;
use serde::{Deserialize, Serialize};

use crate::error::IngestError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceKind {
    Elasticsearch,
    Influxdb,
    Generic,
}

/// One data structure and the field names it uses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemaRecord {
    pub structure_name: String,
    pub source_kind: SourceKind,
    pub fields: BTreeSet<String>,
    /// Display grouping only (e.g. `["Copilote", "Lucene"]`).
    #[serde(default)]
    pub group_path: Vec<String>,
}

impl SchemaRecord {
    pub fn new<I, S>(structure_name: impl Into<String>, source_kind: SourceKind, fields: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        SchemaRecord {
            structure_name: structure_name.into(),
            source_kind,
            fields: fields.into_iter().map(Into::into).collect(),
            group_path: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    pub records: Vec<SchemaRecord>,
}

impl Catalog {
    pub fn push(&mut self, record: SchemaRecord) -> Result<(), IngestError> {
        if self.records.iter().any(|r| r.structure_name == record.structure_name) {
            return Err(IngestError::DuplicateName(record.structure_name));
        }
        self.records.push(record);
        Ok(())
    }

    pub fn extend(&mut self, other: Catalog) -> Result<(), IngestError> {
        other.records.into_iter().try_for_each(|r| self.push(r))
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// One generic record per object of `ctx`.
    pub fn from_context(ctx: &FormalContext) -> Self {
        let records = ctx
            .objects()
            .iter()
            .zip(ctx.rows())
            .map(|(name, row)| {
                SchemaRecord::new(
                    name.clone(),
                    SourceKind::Generic,
                    row.iter().map(|m| ctx.attributes()[m].clone()),
                )
            })
            .collect();
        Catalog { records }
    }

    pub fn from_json(text: &str) -> Result<Self, IngestError> {
        let catalog: Catalog = serde_json::from_str(text)?;
        let mut seen = HashSet::new();
        for r in &catalog.records {
            if !seen.insert(r.structure_name.as_str()) {
                return Err(IngestError::DuplicateName(r.structure_name.clone()));
            }
        }
        Ok(catalog)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("catalog serializes")
    }
}

/// Objects in catalog order; attributes are the sorted union of all fields.
pub fn catalog_to_context(catalog: &Catalog) -> Result<FormalContext, IngestError> {
    let attributes: BTreeSet<&str> = catalog
        .records
        .iter()
        .flat_map(|r| r.fields.iter().map(String::as_str))
        .collect();
    let pairs = catalog
        .records
        .iter()
        .flat_map(|r| r.fields.iter().map(move |f| (r.structure_name.as_str(), f.as_str())));
    let objects = catalog.records.iter().map(|r| r.structure_name.clone());
    Ok(FormalContext::build(
        objects,
        attributes.iter().map(|s| s.to_string()),
        pairs,
    )?)
}

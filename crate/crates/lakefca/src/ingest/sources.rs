//! Schema extraction from Elasticsearch mappings and InfluxDB schema dumps.

use std::collections::BTreeSet;

use serde::Deserialize;
use serde_json::{Map, Value};

use super::catalog::{Catalog, SchemaRecord, SourceKind};
use crate::error::{IngestError, IngestWarning};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IngestOptions {
    /// Treat empty mappings and measurements as errors instead of warnings.
    pub strict: bool,
}

fn properties_of(v: &Value) -> Option<&Map<String, Value>> {
    v.get("properties").and_then(Value::as_object)
}

/// Finds the `properties` tree in the shapes Elasticsearch hands out: a bare
/// mapping, `{"mappings": …}`, a legacy typed mapping, or a `GET _mapping`
/// response keyed by index name.
fn locate_properties(doc: &Value) -> Option<&Map<String, Value>> {
    if let Some(p) = properties_of(doc) {
        return Some(p);
    }
    if let Some(mappings) = doc.get("mappings") {
        if let Some(p) = properties_of(mappings) {
            return Some(p);
        }
        let typed = mappings.as_object()?;
        if typed.len() == 1 {
            return typed.values().next().and_then(properties_of);
        }
        return None;
    }
    let obj = doc.as_object()?;
    if obj.len() == 1 {
        let inner = obj.values().next()?;
        if inner.get("mappings").is_some() {
            return locate_properties(inner);
        }
    }
    None
}

fn flatten(
    props: &Map<String, Value>,
    prefix: &str,
    structure: &str,
    out: &mut BTreeSet<String>,
    warnings: &mut Vec<IngestWarning>,
) {
    for (key, def) in props {
        if key.contains('.') {
            warnings.push(IngestWarning::DottedKey {
                structure: structure.into(),
                key: key.clone(),
            });
        }
        let path = if prefix.is_empty() {
            key.clone()
        } else {
            format!("{prefix}.{key}")
        };
        match properties_of(def) {
            Some(children) if !children.is_empty() => flatten(children, &path, structure, out, warnings),
            _ => {
                out.insert(path);
            }
        }
    }
}

/// Field names of one index: the keys of its mapping, nested objects
/// flattened with `.`.
pub fn parse_es_mapping(
    json: &str,
    index_name: &str,
    options: &IngestOptions,
) -> Result<(SchemaRecord, Vec<IngestWarning>), IngestError> {
    let doc: Value = serde_json::from_str(json)?;
    let props = locate_properties(&doc).ok_or(IngestError::NotAMapping)?;
    let mut fields = BTreeSet::new();
    let mut warnings = Vec::new();
    flatten(props, "", index_name, &mut fields, &mut warnings);
    if fields.is_empty() {
        if options.strict {
            return Err(IngestError::EmptyProperties(index_name.into()));
        }
        warnings.push(IngestWarning::EmptyProperties {
            structure: index_name.into(),
        });
    }
    let record = SchemaRecord {
        structure_name: index_name.into(),
        source_kind: SourceKind::Elasticsearch,
        fields,
        group_path: Vec::new(),
    };
    Ok((record, warnings))
}

#[derive(Deserialize)]
struct InfluxSchema {
    measurements: Vec<Measurement>,
}

#[derive(Deserialize)]
struct Measurement {
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    tags: Vec<String>,
    #[serde(default)]
    fields: Vec<String>,
    #[serde(default)]
    group_path: Vec<String>,
}

/// One record per measurement; tag keys and field keys both become fields.
pub fn parse_influx_schema(json: &str, options: &IngestOptions) -> Result<(Catalog, Vec<IngestWarning>), IngestError> {
    let schema: InfluxSchema = serde_json::from_str(json)?;
    let mut catalog = Catalog::default();
    let mut warnings = Vec::new();
    for (i, m) in schema.measurements.into_iter().enumerate() {
        let name = m.name.filter(|n| !n.is_empty()).ok_or(IngestError::MissingName(i))?;
        let fields: BTreeSet<String> = m.tags.into_iter().chain(m.fields).collect();
        if fields.is_empty() {
            if options.strict {
                return Err(IngestError::EmptyFields(name));
            }
            warnings.push(IngestWarning::EmptyFields {
                structure: name.clone(),
            });
        }
        let record = SchemaRecord {
            structure_name: name,
            source_kind: SourceKind::Influxdb,
            fields,
            group_path: m.group_path,
        };
        catalog.push(record).map_err(|e| match e {
            IngestError::DuplicateName(n) => IngestError::DuplicateMeasurement(n),
            other => other,
        })?;
    }
    Ok((catalog, warnings))
}

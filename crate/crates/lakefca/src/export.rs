//! JSON, DOT and CSV renderings of contexts, lattices and reports.
//!
//! All output is a pure function of its inputs: concept indices follow the
//! lattice's canonical order and every list is emitted in index order.

use std::fmt::Write as _;
use std::str::FromStr;

use lakefca_core::{
    ConceptLattice, ContextStats, CoverageReport, FormalContext, LabelAssignment, LayerChange, OpOutcome, Preview,
    TransformError, TransformReport, TransformWarning,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeFormat {
    Dot,
    Json,
}

impl FromStr for LatticeFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "dot" => Ok(LatticeFormat::Dot),
            "json" => Ok(LatticeFormat::Json),
            other => Err(Error::UnsupportedFormat(other.into())),
        }
    }
}

/// Which names a DOT node shows.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LabelMode {
    /// Only the attributes and objects introduced at the node.
    #[default]
    Reduced,
    /// The node's whole intent and extent.
    Full,
}

impl FromStr for LabelMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "reduced" => Ok(LabelMode::Reduced),
            "full" => Ok(LabelMode::Full),
            other => Err(Error::Usage(format!("unknown label mode {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConceptEntry {
    pub extent: Vec<usize>,
    pub intent: Vec<usize>,
    pub layer: usize,
    pub introduced_attributes: Vec<usize>,
    pub introduced_objects: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeDocument {
    pub objects: Vec<String>,
    pub attributes: Vec<String>,
    pub concepts: Vec<ConceptEntry>,
    pub covers: Vec<[usize; 2]>,
    pub height: usize,
}

impl LatticeDocument {
    pub fn new(ctx: &FormalContext, lattice: &ConceptLattice, labels: &LabelAssignment) -> Self {
        let concepts = lattice
            .concepts()
            .iter()
            .enumerate()
            .map(|(i, c)| ConceptEntry {
                extent: c.extent.to_vec(),
                intent: c.intent.to_vec(),
                layer: lattice.layer(i),
                introduced_attributes: labels.introduced_attributes(i),
                introduced_objects: labels.introduced_objects(i),
            })
            .collect();
        LatticeDocument {
            objects: ctx.objects().to_vec(),
            attributes: ctx.attributes().to_vec(),
            concepts,
            covers: lattice.covers().iter().map(|&(p, c)| [p, c]).collect(),
            height: lattice.height(),
        }
    }
}

pub fn export_lattice(
    ctx: &FormalContext,
    lattice: &ConceptLattice,
    labels: &LabelAssignment,
    format: LatticeFormat,
    mode: LabelMode,
) -> String {
    match format {
        LatticeFormat::Json => to_json(&LatticeDocument::new(ctx, lattice, labels)),
        LatticeFormat::Dot => lattice_dot(ctx, lattice, labels, mode),
    }
}

pub(crate) fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("in-memory documents serialize");
    s.push('\n');
    s
}

fn escape_record(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        if matches!(c, '{' | '}' | '|' | '<' | '>' | '"' | '\\') {
            out.push('\\');
        }
        out.push(c);
    }
    out
}

fn name_list<'a>(names: &'a [String], idx: impl IntoIterator<Item = usize> + 'a) -> String {
    idx.into_iter()
        .map(|i| escape_record(&names[i]))
        .collect::<Vec<_>>()
        .join(", ")
}

fn lattice_dot(ctx: &FormalContext, lattice: &ConceptLattice, labels: &LabelAssignment, mode: LabelMode) -> String {
    let mut out = String::from("digraph lattice {\n  node [shape=record];\n");
    for (i, c) in lattice.concepts().iter().enumerate() {
        let (attrs, objs) = match mode {
            LabelMode::Reduced => (
                name_list(ctx.attributes(), labels.introduced_attributes(i)),
                name_list(ctx.objects(), labels.introduced_objects(i)),
            ),
            LabelMode::Full => (
                name_list(ctx.attributes(), c.intent.iter()),
                name_list(ctx.objects(), c.extent.iter()),
            ),
        };
        writeln!(out, "  c{i} [label=\"{{{attrs} | {objs}}}\"];").unwrap();
    }
    for group in lattice.layer_groups() {
        if group.len() > 1 {
            let ids: Vec<String> = group.iter().map(|i| format!("c{i};")).collect();
            writeln!(out, "  {{ rank=same; {} }}", ids.join(" ")).unwrap();
        }
    }
    for &(p, c) in lattice.covers() {
        writeln!(out, "  c{p} -> c{c};").unwrap();
    }
    out.push_str("}\n");
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextDocument {
    pub objects: Vec<String>,
    pub attributes: Vec<String>,
    /// Attribute indices per object.
    pub incidence: Vec<Vec<usize>>,
}

impl ContextDocument {
    pub fn new(ctx: &FormalContext) -> Self {
        ContextDocument {
            objects: ctx.objects().to_vec(),
            attributes: ctx.attributes().to_vec(),
            incidence: ctx.rows().iter().map(|r| r.to_vec()).collect(),
        }
    }

    pub fn into_context(self) -> Result<FormalContext, lakefca_core::ContextError> {
        FormalContext::from_row_indices(self.objects, self.attributes, self.incidence)
    }
}

pub fn context_json(ctx: &FormalContext) -> String {
    to_json(&ContextDocument::new(ctx))
}

/// `k,attribute_added,coverage` for k = 1..|M|.
pub fn coverage_csv(ctx: &FormalContext, report: &CoverageReport) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(["k", "attribute_added", "coverage"]).unwrap();
    for (i, (f, p)) in report.ranking.iter().zip(&report.points).enumerate() {
        w.write_record([
            (i + 1).to_string(),
            ctx.attributes()[f.attribute].clone(),
            p.to_string(),
        ])
        .unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

pub fn coverage_value(ctx: &FormalContext, report: &CoverageReport) -> Value {
    let ranking: Vec<Value> = report
        .ranking
        .iter()
        .map(|f| json!({"attribute": ctx.attributes()[f.attribute], "count": f.count}))
        .collect();
    let points: Vec<Value> = report
        .ranking
        .iter()
        .zip(&report.points)
        .enumerate()
        .map(|(i, (f, p))| json!({"k": i + 1, "attribute_added": ctx.attributes()[f.attribute], "coverage": p}))
        .collect();
    json!({
        "object_count": report.object_count,
        "covered_at_zero": report.covered_at_zero,
        "ranking": ranking,
        "points": points,
    })
}

pub fn coverage_json(ctx: &FormalContext, report: &CoverageReport) -> String {
    to_json(&coverage_value(ctx, report))
}

pub fn stats_json(stats: &ContextStats) -> String {
    to_json(stats)
}

fn error_kind(e: &TransformError) -> &'static str {
    match e {
        TransformError::InvalidOp { .. } => "invalid_op",
        TransformError::UnknownName { .. } => "unknown_name",
        TransformError::TargetExists { .. } => "target_exists",
        TransformError::EmptyResult { .. } => "empty_result",
        TransformError::Context(_) => "context",
    }
}

fn warning_value(op: usize, w: &TransformWarning) -> Value {
    let mut v = match w {
        TransformWarning::CollapsedIncidences { target, count } => {
            json!({"kind": "collapsed_incidences", "target": target, "count": count})
        }
        TransformWarning::TargetAlreadyPresent { kind, name } => {
            json!({"kind": "target_already_present", "name_kind": kind.to_string(), "name": name})
        }
        TransformWarning::PrunedAttributes { names } => json!({"kind": "pruned_attributes", "names": names}),
    };
    v["op"] = json!(op);
    v["message"] = json!(w.to_string());
    v
}

pub fn report_value(report: &TransformReport) -> Value {
    let outcomes: Vec<Value> = report
        .outcomes
        .iter()
        .enumerate()
        .map(|(i, o)| match o {
            OpOutcome::Applied => json!({"index": i, "status": "applied"}),
            OpOutcome::NotApplied => json!({"index": i, "status": "not_applied"}),
            OpOutcome::Rejected(e) => {
                json!({"index": i, "status": "rejected", "error": error_kind(e), "reason": e.to_string()})
            }
        })
        .collect();
    let warnings: Vec<Value> = report.warnings.iter().map(|(i, w)| warning_value(*i, w)).collect();
    json!({
        "outcomes": outcomes,
        "warnings": warnings,
        "stats_before": report.stats_before,
        "stats_after": report.stats_after,
        "aborted_at": report.aborted_at,
    })
}

pub fn report_json(report: &TransformReport) -> String {
    to_json(&report_value(report))
}

fn layer_change_value(c: &LayerChange) -> Value {
    json!({"attribute": c.attribute, "previous_name": c.previous_name, "before": c.before, "after": c.after})
}

pub fn preview_value(p: &Preview) -> Value {
    json!({
        "report": report_value(&p.report),
        "concept_delta": p.concept_delta,
        "height_delta": p.height_delta,
        "attribute_delta": p.attribute_delta,
        "layer_changes": p.layer_changes.iter().map(layer_change_value).collect::<Vec<_>>(),
    })
}

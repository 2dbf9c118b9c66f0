//! Unification operations on a context: merging and renaming field names
//! and structures, and restructuring a structure's fields.
//!
//! Every operation returns a new context. Scripts are applied strictly in
//! order, so replaying a prefix of a script from the original context is how
//! a session undoes its last step.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::bitset::BitSet;
use crate::context::{ContextError, FormalContext, NameKind};
use crate::lattice::{ConceptLattice, LatticeError, DEFAULT_CONCEPT_CAP};
use crate::metrics::ContextStats;

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)
)]
pub enum TransformOp {
    /// Replace several attributes by one whose extent is their union.
    MergeAttributes {
        sources: Vec<String>,
        target: String,
        #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "String::is_empty"))]
        note: String,
    },
    RenameAttribute {
        source: String,
        target: String,
        #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "String::is_empty"))]
        note: String,
    },
    RenameObject {
        source: String,
        target: String,
        #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "String::is_empty"))]
        note: String,
    },
    /// Replace several objects by one whose row is their union.
    MergeObjects {
        sources: Vec<String>,
        target: String,
        #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "String::is_empty"))]
        note: String,
    },
    /// Clear `remove` and set `add` in one object's row, creating columns
    /// for added names that do not exist yet.
    ReplaceFields {
        object: String,
        #[cfg_attr(feature = "serde", serde(default))]
        remove: Vec<String>,
        #[cfg_attr(feature = "serde", serde(default))]
        add: Vec<String>,
        #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "String::is_empty"))]
        note: String,
    },
}

fn strings<I, S>(it: I) -> Vec<String>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    it.into_iter().map(Into::into).collect()
}

impl TransformOp {
    pub fn merge_attributes<I, S>(sources: I, target: impl Into<String>) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        TransformOp::MergeAttributes {
            sources: strings(sources),
            target: target.into(),
            note: String::new(),
        }
    }

    pub fn rename_attribute(source: impl Into<String>, target: impl Into<String>) -> Self {
        TransformOp::RenameAttribute {
            source: source.into(),
            target: target.into(),
            note: String::new(),
        }
    }

    pub fn rename_object(source: impl Into<String>, target: impl Into<String>) -> Self {
        TransformOp::RenameObject {
            source: source.into(),
            target: target.into(),
            note: String::new(),
        }
    }

    pub fn merge_objects<I, S>(sources: I, target: impl Into<String>) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        TransformOp::MergeObjects {
            sources: strings(sources),
            target: target.into(),
            note: String::new(),
        }
    }

    pub fn replace_fields<R, A, S, T>(object: impl Into<String>, remove: R, add: A) -> Self
    where
        R: IntoIterator<Item = S>,
        S: Into<String>,
        A: IntoIterator<Item = T>,
        T: Into<String>,
    {
        TransformOp::ReplaceFields {
            object: object.into(),
            remove: strings(remove),
            add: strings(add),
            note: String::new(),
        }
    }

    pub fn with_note(mut self, text: impl Into<String>) -> Self {
        match &mut self {
            TransformOp::MergeAttributes { note, .. }
            | TransformOp::RenameAttribute { note, .. }
            | TransformOp::RenameObject { note, .. }
            | TransformOp::MergeObjects { note, .. }
            | TransformOp::ReplaceFields { note, .. } => *note = text.into(),
        }
        self
    }

    pub fn note(&self) -> &str {
        match self {
            TransformOp::MergeAttributes { note, .. }
            | TransformOp::RenameAttribute { note, .. }
            | TransformOp::RenameObject { note, .. }
            | TransformOp::MergeObjects { note, .. }
            | TransformOp::ReplaceFields { note, .. } => note,
        }
    }

    /// Checks the shape of the op independently of any context.
    pub fn validate(&self) -> Result<(), TransformError> {
        let invalid = |reason: &str| Err(TransformError::InvalidOp { reason: reason.into() });
        match self {
            TransformOp::MergeAttributes { sources, target, .. }
            | TransformOp::MergeObjects { sources, target, .. } => {
                if sources.is_empty() {
                    return invalid("sources must not be empty");
                }
                if target.is_empty() || sources.iter().any(String::is_empty) {
                    return invalid("names must not be empty");
                }
                if sources.iter().collect::<BTreeSet<_>>().len() != sources.len() {
                    return invalid("sources must be pairwise distinct");
                }
            }
            TransformOp::RenameAttribute { source, target, .. } | TransformOp::RenameObject { source, target, .. } => {
                if source.is_empty() || target.is_empty() {
                    return invalid("names must not be empty");
                }
            }
            TransformOp::ReplaceFields {
                object, remove, add, ..
            } => {
                if object.is_empty() || remove.iter().chain(add).any(String::is_empty) {
                    return invalid("names must not be empty");
                }
                if remove.iter().collect::<BTreeSet<_>>().len() != remove.len()
                    || add.iter().collect::<BTreeSet<_>>().len() != add.len()
                {
                    return invalid("remove and add lists must be pairwise distinct");
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScriptMetadata {
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub author: Option<String>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub created_at: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TransformScript {
    pub ops: Vec<TransformOp>,
    #[cfg_attr(feature = "serde", serde(default))]
    pub metadata: ScriptMetadata,
}

impl TransformScript {
    pub fn new(ops: Vec<TransformOp>) -> Self {
        TransformScript {
            ops,
            metadata: ScriptMetadata::default(),
        }
    }

    /// This script followed by `other`; metadata is kept from `self`.
    pub fn concat(&self, other: &TransformScript) -> TransformScript {
        let mut ops = self.ops.clone();
        ops.extend(other.ops.iter().cloned());
        TransformScript {
            ops,
            metadata: self.metadata.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TransformError {
    #[error("malformed op: {reason}")]
    InvalidOp { reason: String },
    #[error("unknown {kind} name {name:?}")]
    UnknownName { kind: NameKind, name: String },
    #[error("{kind} {name:?} already exists; merge instead of renaming")]
    TargetExists { kind: NameKind, name: String },
    #[error("op would leave the context without any {kind}")]
    EmptyResult { kind: NameKind },
    #[error(transparent)]
    Context(#[from] ContextError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TransformWarning {
    /// `count` rows (attribute merge) or columns (object merge) held two or
    /// more of the merged sources.
    CollapsedIncidences { target: String, count: usize },
    /// The merge target already existed outside the listed sources and was
    /// merged in as well.
    TargetAlreadyPresent { kind: NameKind, name: String },
    /// Columns emptied by a field replacement and removed.
    PrunedAttributes { names: Vec<String> },
}

impl core::fmt::Display for TransformWarning {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            TransformWarning::CollapsedIncidences { target, count } => {
                write!(f, "{count} incidence(s) collapsed into {target:?}")
            }
            TransformWarning::TargetAlreadyPresent { kind, name } => {
                write!(f, "{kind} {name:?} already existed and was merged in")
            }
            TransformWarning::PrunedAttributes { names } => {
                write!(f, "pruned empty attributes {names:?}")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TransformOptions {
    /// Drop attributes left with an empty extent by `ReplaceFields`.
    pub prune_empty: bool,
    /// Keep going after a rejected op instead of aborting the script.
    pub skip_on_error: bool,
    pub concept_cap: usize,
}

impl Default for TransformOptions {
    fn default() -> Self {
        TransformOptions {
            prune_empty: true,
            skip_on_error: false,
            concept_cap: DEFAULT_CONCEPT_CAP,
        }
    }
}

fn lookup(
    names: &[String],
    kind: NameKind,
    ctx_index: impl Fn(&str) -> Option<usize>,
) -> Result<Vec<usize>, TransformError> {
    names
        .iter()
        .map(|n| ctx_index(n).ok_or_else(|| TransformError::UnknownName { kind, name: n.clone() }))
        .collect()
}

/// Applies one op, returning the new context and any warnings.
pub fn apply_op(
    ctx: &FormalContext,
    op: &TransformOp,
    options: &TransformOptions,
) -> Result<(FormalContext, Vec<TransformWarning>), TransformError> {
    op.validate()?;
    match op {
        TransformOp::MergeAttributes { sources, target, .. } => merge_attributes(ctx, sources, target),
        TransformOp::MergeObjects { sources, target, .. } => merge_objects(ctx, sources, target),
        TransformOp::RenameAttribute { source, target, .. } => {
            let i = lookup(core::slice::from_ref(source), NameKind::Attribute, |n| {
                ctx.attribute_index(n)
            })?[0];
            if source == target {
                return Ok((ctx.clone(), Vec::new()));
            }
            if ctx.attribute_index(target).is_some() {
                return Err(TransformError::TargetExists {
                    kind: NameKind::Attribute,
                    name: target.clone(),
                });
            }
            let mut attributes = ctx.attributes().to_vec();
            attributes[i] = target.clone();
            let out = FormalContext::from_rows(ctx.objects().to_vec(), attributes, ctx.rows().to_vec())?;
            Ok((out, Vec::new()))
        }
        TransformOp::RenameObject { source, target, .. } => {
            let i = lookup(core::slice::from_ref(source), NameKind::Object, |n| ctx.object_index(n))?[0];
            if source == target {
                return Ok((ctx.clone(), Vec::new()));
            }
            if ctx.object_index(target).is_some() {
                return Err(TransformError::TargetExists {
                    kind: NameKind::Object,
                    name: target.clone(),
                });
            }
            let mut objects = ctx.objects().to_vec();
            objects[i] = target.clone();
            let out = FormalContext::from_rows(objects, ctx.attributes().to_vec(), ctx.rows().to_vec())?;
            Ok((out, Vec::new()))
        }
        TransformOp::ReplaceFields {
            object, remove, add, ..
        } => replace_fields(ctx, object, remove, add, options.prune_empty),
    }
}

/// Resolves merge sources, folding in a pre-existing target.
fn merge_members(
    sources: &[String],
    target: &str,
    kind: NameKind,
    index: impl Fn(&str) -> Option<usize>,
    universe: usize,
    warnings: &mut Vec<TransformWarning>,
) -> Result<BitSet, TransformError> {
    let mut members = BitSet::empty(universe);
    for i in lookup(sources, kind, &index)? {
        members.insert(i);
    }
    if let Some(t) = index(target) {
        if !members.contains(t) {
            members.insert(t);
            warnings.push(TransformWarning::TargetAlreadyPresent {
                kind,
                name: target.into(),
            });
        }
    }
    Ok(members)
}

fn merge_attributes(
    ctx: &FormalContext,
    sources: &[String],
    target: &str,
) -> Result<(FormalContext, Vec<TransformWarning>), TransformError> {
    let mut warnings = Vec::new();
    let members = merge_members(
        sources,
        target,
        NameKind::Attribute,
        |n| ctx.attribute_index(n),
        ctx.attribute_count(),
        &mut warnings,
    )?;
    let first = members.iter().next().expect("sources are non-empty");

    // old column -> new column
    let mut remap = Vec::with_capacity(ctx.attribute_count());
    let mut attributes = Vec::new();
    let mut target_col = 0;
    for (m, name) in ctx.attributes().iter().enumerate() {
        if members.contains(m) {
            // first is the lowest member, so target_col is set before use
            if m == first {
                target_col = attributes.len();
                attributes.push(String::from(target));
            }
            remap.push(target_col);
        } else {
            remap.push(attributes.len());
            attributes.push(name.clone());
        }
    }

    let mut collapsed = 0;
    let rows = ctx
        .rows()
        .iter()
        .map(|row| {
            let mut out = BitSet::empty(attributes.len());
            let mut hits = 0;
            for m in row.iter() {
                if members.contains(m) {
                    hits += 1;
                    out.insert(target_col);
                } else {
                    out.insert(remap[m]);
                }
            }
            if hits >= 2 {
                collapsed += 1;
            }
            out
        })
        .collect();
    if collapsed > 0 {
        warnings.push(TransformWarning::CollapsedIncidences {
            target: target.into(),
            count: collapsed,
        });
    }
    let out = FormalContext::from_rows(ctx.objects().to_vec(), attributes, rows)?;
    Ok((out, warnings))
}

fn merge_objects(
    ctx: &FormalContext,
    sources: &[String],
    target: &str,
) -> Result<(FormalContext, Vec<TransformWarning>), TransformError> {
    let mut warnings = Vec::new();
    let members = merge_members(
        sources,
        target,
        NameKind::Object,
        |n| ctx.object_index(n),
        ctx.object_count(),
        &mut warnings,
    )?;
    let first = members.iter().next().expect("sources are non-empty");

    let mut merged = BitSet::empty(ctx.attribute_count());
    let mut seen = BitSet::empty(ctx.attribute_count());
    let mut shared = BitSet::empty(ctx.attribute_count());
    for g in members.iter() {
        let mut overlap = seen.intersection(ctx.row(g));
        overlap.difference_with(&shared);
        shared.union_with(&overlap);
        seen.union_with(ctx.row(g));
        merged.union_with(ctx.row(g));
    }

    let mut objects = Vec::new();
    let mut rows = Vec::new();
    for (g, name) in ctx.objects().iter().enumerate() {
        if g == first {
            objects.push(String::from(target));
            rows.push(merged.clone());
        } else if !members.contains(g) {
            objects.push(name.clone());
            rows.push(ctx.row(g).clone());
        }
    }
    if !shared.is_empty() {
        warnings.push(TransformWarning::CollapsedIncidences {
            target: target.into(),
            count: shared.len(),
        });
    }
    let out = FormalContext::from_rows(objects, ctx.attributes().to_vec(), rows)?;
    Ok((out, warnings))
}

fn replace_fields(
    ctx: &FormalContext,
    object: &str,
    remove: &[String],
    add: &[String],
    prune: bool,
) -> Result<(FormalContext, Vec<TransformWarning>), TransformError> {
    let g = ctx.object_index(object).ok_or_else(|| TransformError::UnknownName {
        kind: NameKind::Object,
        name: object.into(),
    })?;
    let removed = lookup(remove, NameKind::Attribute, |n| ctx.attribute_index(n))?;

    let mut attributes = ctx.attributes().to_vec();
    for name in add {
        if ctx.attribute_index(name).is_none() {
            attributes.push(name.clone());
        }
    }
    let width = attributes.len();
    let mut rows: Vec<BitSet> = ctx
        .rows()
        .iter()
        .map(|r| BitSet::try_from_indices(width, r.iter()).expect("widening keeps indices valid"))
        .collect();
    for &m in &removed {
        rows[g].remove(m);
    }
    for name in add {
        let m = attributes.iter().position(|a| a == name).expect("added above");
        rows[g].insert(m);
    }

    let mut warnings = Vec::new();
    let emptied: Vec<usize> = if prune {
        removed
            .iter()
            .copied()
            .filter(|&m| !ctx.column(m).is_empty() && rows.iter().all(|r| !r.contains(m)))
            .collect()
    } else {
        Vec::new()
    };
    if emptied.is_empty() {
        let out = FormalContext::from_rows(ctx.objects().to_vec(), attributes, rows)?;
        return Ok((out, warnings));
    }
    if emptied.len() == width {
        return Err(TransformError::EmptyResult {
            kind: NameKind::Attribute,
        });
    }

    let keep: Vec<usize> = (0..width).filter(|m| !emptied.contains(m)).collect();
    let pruned_attributes = keep.iter().map(|&m| attributes[m].clone()).collect::<Vec<_>>();
    let pruned_rows = rows
        .iter()
        .map(|r| {
            BitSet::try_from_indices(
                keep.len(),
                keep.iter().enumerate().filter(|&(_, &m)| r.contains(m)).map(|(i, _)| i),
            )
            .expect("compacted indices stay in range")
        })
        .collect();
    let mut names: Vec<String> = emptied.iter().map(|&m| attributes[m].clone()).collect();
    names.sort();
    warnings.push(TransformWarning::PrunedAttributes { names });
    let out = FormalContext::from_rows(ctx.objects().to_vec(), pruned_attributes, pruned_rows)?;
    Ok((out, warnings))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OpOutcome {
    Applied,
    Rejected(TransformError),
    /// Not attempted because an earlier op aborted the script.
    NotApplied,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformReport {
    pub outcomes: Vec<OpOutcome>,
    /// `(op index, warning)`
    pub warnings: Vec<(usize, TransformWarning)>,
    pub stats_before: ContextStats,
    pub stats_after: ContextStats,
    /// Index of the op that stopped the script, when it stopped early.
    pub aborted_at: Option<usize>,
}

impl TransformReport {
    pub fn all_applied(&self) -> bool {
        self.outcomes.iter().all(|o| *o == OpOutcome::Applied)
    }

    /// First rejection with its op index.
    pub fn first_rejection(&self) -> Option<(usize, &TransformError)> {
        self.outcomes.iter().enumerate().find_map(|(i, o)| match o {
            OpOutcome::Rejected(e) => Some((i, e)),
            _ => None,
        })
    }
}

/// Applies the ops of `script` in order. Rejected ops are recorded in the
/// report; the only hard error is the concept cap while computing stats.
pub fn apply_script(
    ctx: &FormalContext,
    script: &TransformScript,
    options: &TransformOptions,
) -> Result<(FormalContext, TransformReport), LatticeError> {
    let before = ContextStats::of(ctx, &ConceptLattice::compute(ctx, options.concept_cap)?);
    let (current, outcomes, warnings, aborted_at) = replay(ctx, &script.ops, options);
    let after = if current == *ctx {
        before
    } else {
        ContextStats::of(&current, &ConceptLattice::compute(&current, options.concept_cap)?)
    };
    Ok((
        current,
        TransformReport {
            outcomes,
            warnings,
            stats_before: before,
            stats_after: after,
            aborted_at,
        },
    ))
}

type Replay = (
    FormalContext,
    Vec<OpOutcome>,
    Vec<(usize, TransformWarning)>,
    Option<usize>,
);

/// Applies ops without computing any lattice.
pub fn replay(ctx: &FormalContext, ops: &[TransformOp], options: &TransformOptions) -> Replay {
    let mut current = ctx.clone();
    let mut outcomes = Vec::with_capacity(ops.len());
    let mut warnings = Vec::new();
    let mut aborted_at = None;
    for (i, op) in ops.iter().enumerate() {
        if aborted_at.is_some() {
            outcomes.push(OpOutcome::NotApplied);
            continue;
        }
        match apply_op(&current, op, options) {
            Ok((next, w)) => {
                current = next;
                warnings.extend(w.into_iter().map(|w| (i, w)));
                outcomes.push(OpOutcome::Applied);
            }
            Err(e) => {
                outcomes.push(OpOutcome::Rejected(e));
                if !options.skip_on_error {
                    aborted_at = Some(i);
                }
            }
        }
    }
    (current, outcomes, warnings, aborted_at)
}

/// How an attribute's introducer layer moved between two contexts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerChange {
    pub attribute: String,
    /// Name in the earlier context when the attribute was renamed.
    pub previous_name: Option<String>,
    pub before: usize,
    pub after: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ContextDiff {
    pub attributes_added: Vec<String>,
    pub attributes_removed: Vec<String>,
    /// `(old, new)` pairs matched by identical extents.
    pub attributes_renamed: Vec<(String, String)>,
    pub objects_added: Vec<String>,
    pub objects_removed: Vec<String>,
    pub layer_changes: Vec<LayerChange>,
}

impl ContextDiff {
    pub fn is_empty(&self) -> bool {
        *self == ContextDiff::default()
    }
}

fn extent_names(ctx: &FormalContext, m: usize) -> BTreeSet<&str> {
    ctx.column(m).iter().map(|g| ctx.objects()[g].as_str()).collect()
}

fn attribute_layers(ctx: &FormalContext, cap: usize) -> Result<Vec<usize>, LatticeError> {
    let lattice = ConceptLattice::compute(ctx, cap)?;
    let labels = crate::lattice::labels(ctx, &lattice);
    Ok(labels.attribute_introducer.iter().map(|&c| lattice.layer(c)).collect())
}

/// Name-level differences plus introducer-layer moves between two contexts.
pub fn diff_contexts(before: &FormalContext, after: &FormalContext, cap: usize) -> Result<ContextDiff, LatticeError> {
    let mut diff = ContextDiff::default();
    let old_attrs: BTreeSet<&str> = before.attributes().iter().map(String::as_str).collect();
    let new_attrs: BTreeSet<&str> = after.attributes().iter().map(String::as_str).collect();
    let removed: Vec<&str> = old_attrs.difference(&new_attrs).copied().collect();
    let added: Vec<&str> = new_attrs.difference(&old_attrs).copied().collect();

    let old_objs: BTreeSet<&str> = before.objects().iter().map(String::as_str).collect();
    let new_objs: BTreeSet<&str> = after.objects().iter().map(String::as_str).collect();
    diff.objects_removed = old_objs.difference(&new_objs).map(|s| String::from(*s)).collect();
    diff.objects_added = new_objs.difference(&old_objs).map(|s| String::from(*s)).collect();

    // a rename is a removed/added pair whose extents match each other and nothing else
    let old_ext: Vec<BTreeSet<&str>> = removed
        .iter()
        .map(|n| extent_names(before, before.attribute_index(n).unwrap()))
        .collect();
    let new_ext: Vec<BTreeSet<&str>> = added
        .iter()
        .map(|n| extent_names(after, after.attribute_index(n).unwrap()))
        .collect();
    let mut renamed_old = BTreeSet::new();
    let mut renamed_new = BTreeSet::new();
    for (i, oe) in old_ext.iter().enumerate() {
        let matches: Vec<usize> = (0..new_ext.len()).filter(|&j| new_ext[j] == *oe).collect();
        if let [j] = matches[..] {
            if old_ext.iter().filter(|e| **e == new_ext[j]).count() == 1 {
                renamed_old.insert(i);
                renamed_new.insert(j);
                diff.attributes_renamed.push((removed[i].into(), added[j].into()));
            }
        }
    }
    diff.attributes_removed = removed
        .iter()
        .enumerate()
        .filter(|(i, _)| !renamed_old.contains(i))
        .map(|(_, s)| String::from(*s))
        .collect();
    diff.attributes_added = added
        .iter()
        .enumerate()
        .filter(|(j, _)| !renamed_new.contains(j))
        .map(|(_, s)| String::from(*s))
        .collect();

    let before_layers = attribute_layers(before, cap)?;
    let after_layers = attribute_layers(after, cap)?;
    let mut push = |old: &str, new: &str| {
        let b = before_layers[before.attribute_index(old).unwrap()];
        let a = after_layers[after.attribute_index(new).unwrap()];
        if a != b {
            diff.layer_changes.push(LayerChange {
                attribute: new.into(),
                previous_name: (old != new).then(|| old.into()),
                before: b,
                after: a,
            });
        }
    };
    for name in old_attrs.intersection(&new_attrs) {
        push(name, name);
    }
    for (old, new) in diff.attributes_renamed.clone() {
        push(&old, &new);
    }
    diff.layer_changes.sort_by(|a, b| a.attribute.cmp(&b.attribute));
    Ok(diff)
}

/// What applying one op would do, without keeping the result.
#[derive(Clone, Debug, PartialEq)]
pub struct Preview {
    pub report: TransformReport,
    pub concept_delta: isize,
    pub height_delta: isize,
    pub attribute_delta: isize,
    pub layer_changes: Vec<LayerChange>,
}

pub fn preview(ctx: &FormalContext, op: &TransformOp, options: &TransformOptions) -> Result<Preview, LatticeError> {
    let script = TransformScript::new(alloc::vec![op.clone()]);
    let (after, report) = apply_script(ctx, &script, options)?;
    let delta = |a: usize, b: usize| a as isize - b as isize;
    let layer_changes = if report.all_applied() {
        diff_contexts(ctx, &after, options.concept_cap)?.layer_changes
    } else {
        Vec::new()
    };
    Ok(Preview {
        concept_delta: delta(report.stats_after.concept_count, report.stats_before.concept_count),
        height_delta: delta(report.stats_after.lattice_height, report.stats_before.lattice_height),
        attribute_delta: delta(report.stats_after.attribute_count, report.stats_before.attribute_count),
        layer_changes,
        report,
    })
}

#![no_std]
#![forbid(unsafe_code)]

//! Formal concept analysis kernel for consolidating data-lake schemas.
//!
//! Data structures (measurements, indexes, tables) are the objects of a
//! [`FormalContext`] and their field names its attributes. From there the
//! crate enumerates the concept lattice, labels it, applies unification
//! operations (merging and renaming fields and structures) and measures the
//! effect on coverage and lattice shape.
//!
//! Everything here is pure and allocation-only; parsers, exports and the
//! service live in the `lakefca` crate.

extern crate alloc;

pub mod bitset;
pub mod context;
pub mod fixtures;
pub mod lattice;
pub mod metrics;
pub mod transform;

pub use bitset::BitSet;
pub use context::{AttributeSet, ContextError, FormalContext, NameKind, ObjectSet};
pub use lattice::{
    build_lattice, enumerate_concepts, enumerate_concepts_capped, labels, lattice_height, ConceptLattice,
    FormalConcept, LabelAssignment, LatticeError, DEFAULT_CONCEPT_CAP,
};
pub use metrics::{
    attribute_frequencies, compare_stats, context_stats, coverage_curve, AttributeFrequency, ContextStats,
    CoverageReport, StatsDelta,
};
pub use transform::{
    apply_op, apply_script, diff_contexts, preview, replay, ContextDiff, LayerChange, OpOutcome, Preview,
    ScriptMetadata, TransformError, TransformOp, TransformOptions, TransformReport, TransformScript, TransformWarning,
};

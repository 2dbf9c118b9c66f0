//! Concept enumeration (Close-by-One), the Hasse diagram, layering and
//! reduced labels.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::bitset::BitSet;
use crate::context::{AttributeSet, FormalContext, ObjectSet};

/// Concept count above which enumeration gives up.
pub const DEFAULT_CONCEPT_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("concept count exceeds the cap of {cap}")]
    ResourceLimitExceeded { cap: usize },
    #[error("concepts do not form the concept family of the context: {reason}")]
    InconsistentInput { reason: String },
}

/// A closed pair: `extent = ext(intent)` and `intent = int(extent)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormalConcept {
    pub extent: ObjectSet,
    pub intent: AttributeSet,
}

impl FormalConcept {
    /// Decreasing extent size, then lexicographic intent.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        other
            .extent
            .len()
            .cmp(&self.extent.len())
            .then_with(|| self.intent.bits().cmp_lex(other.intent.bits()))
    }
}

/// Enumerates every concept of `ctx` in canonical order.
pub fn enumerate_concepts(ctx: &FormalContext) -> Result<Vec<FormalConcept>, LatticeError> {
    enumerate_concepts_capped(ctx, DEFAULT_CONCEPT_CAP)
}

pub fn enumerate_concepts_capped(ctx: &FormalContext, cap: usize) -> Result<Vec<FormalConcept>, LatticeError> {
    let mut out = Vec::new();
    let extent = BitSet::full(ctx.object_count());
    let intent = ctx.intent_bits(&extent);
    close_by_one(ctx, extent, intent, 0, cap, &mut out)?;
    out.sort_by(FormalConcept::canonical_cmp);
    Ok(out)
}

fn close_by_one(
    ctx: &FormalContext,
    extent: BitSet,
    intent: BitSet,
    from: usize,
    cap: usize,
    out: &mut Vec<FormalConcept>,
) -> Result<(), LatticeError> {
    for j in from..ctx.attribute_count() {
        if intent.contains(j) {
            continue;
        }
        let next_extent = extent.intersection(ctx.column(j));
        let next_intent = ctx.intent_bits(&next_extent);
        // canonicity: closing must not add any attribute before j
        if next_intent.agrees_below(&intent, j) {
            close_by_one(ctx, next_extent, next_intent, j + 1, cap, out)?;
        }
    }
    if out.len() >= cap {
        return Err(LatticeError::ResourceLimitExceeded { cap });
    }
    out.push(FormalConcept {
        extent: ObjectSet::from_bits(extent),
        intent: AttributeSet::from_bits(intent),
    });
    Ok(())
}

/// The concept lattice as a Hasse diagram with longest-path layers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConceptLattice {
    concepts: Vec<FormalConcept>,
    covers: Vec<(usize, usize)>,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
    layers: Vec<usize>,
    top: usize,
    bottom: usize,
    by_extent: BTreeMap<BitSet, usize>,
}

impl ConceptLattice {
    /// Enumerates and builds in one step.
    pub fn compute(ctx: &FormalContext, cap: usize) -> Result<Self, LatticeError> {
        let concepts = enumerate_concepts_capped(ctx, cap)?;
        Ok(Self::assemble(ctx, concepts))
    }

    pub fn concepts(&self) -> &[FormalConcept] {
        &self.concepts
    }

    pub fn concept(&self, i: usize) -> &FormalConcept {
        &self.concepts[i]
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    /// Never true: every context has at least a top concept.
    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    /// `(parent, child)` pairs, parent having the strictly larger extent.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn parents(&self, i: usize) -> &[usize] {
        &self.parents[i]
    }

    pub fn children(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn layer(&self, i: usize) -> usize {
        self.layers[i]
    }

    pub fn layers(&self) -> &[usize] {
        &self.layers
    }

    /// Number of concepts on a longest top-to-bottom chain.
    pub fn height(&self) -> usize {
        self.layers.iter().copied().max().unwrap_or(0) + 1
    }

    pub fn index_of_extent(&self, extent: &ObjectSet) -> Option<usize> {
        self.by_extent.get(extent.bits()).copied()
    }

    /// Concept indices grouped by layer, each group in canonical order.
    pub fn layer_groups(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.height()];
        for (i, &l) in self.layers.iter().enumerate() {
            groups[l].push(i);
        }
        groups
    }

    fn assemble(ctx: &FormalContext, mut concepts: Vec<FormalConcept>) -> Self {
        concepts.sort_by(FormalConcept::canonical_cmp);
        let by_extent: BTreeMap<BitSet, usize> = concepts
            .iter()
            .enumerate()
            .map(|(i, c)| (c.extent.bits().clone(), i))
            .collect();

        let n = concepts.len();
        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        let mut covers = Vec::new();
        for (child, concept) in concepts.iter().enumerate() {
            for extent in upper_neighbours(ctx, concept) {
                let parent = by_extent[&extent];
                parents[child].push(parent);
                children[parent].push(child);
                covers.push((parent, child));
            }
        }
        for p in parents.iter_mut().chain(children.iter_mut()) {
            p.sort_unstable();
        }
        covers.sort_unstable();

        // canonical order is a linear extension: parents come first
        let mut layers = vec![0usize; n];
        for i in 0..n {
            layers[i] = parents[i].iter().map(|&p| layers[p] + 1).max().unwrap_or(0);
        }

        ConceptLattice {
            concepts,
            covers,
            parents,
            children,
            layers,
            top: 0,
            bottom: n.saturating_sub(1),
            by_extent,
        }
    }
}

/// Extents of the upper covers of `concept`, by the neighbour test that
/// discards generators whose closure swallows a still-minimal object.
fn upper_neighbours(ctx: &FormalContext, concept: &FormalConcept) -> Vec<BitSet> {
    let extent = concept.extent.bits();
    let mut candidates = BitSet::full(ctx.object_count());
    candidates.difference_with(extent);
    let mut minimal = candidates.clone();
    let mut found = BTreeSet::new();
    for g in candidates.iter() {
        let intent = concept.intent.bits().intersection(ctx.row(g));
        let closed = ctx.extent_bits(&intent);
        let mut gained = closed.clone();
        gained.difference_with(extent);
        gained.remove(g);
        if gained.is_disjoint(&minimal) {
            found.insert(closed);
        } else {
            minimal.remove(g);
        }
    }
    found.into_iter().collect()
}

/// Builds the lattice from a concept family, rejecting anything that is not
/// exactly the set of concepts of `ctx`.
pub fn build_lattice(ctx: &FormalContext, concepts: Vec<FormalConcept>) -> Result<ConceptLattice, LatticeError> {
    let inconsistent = |reason: String| Err(LatticeError::InconsistentInput { reason });
    let mut extents = BTreeSet::new();
    for c in &concepts {
        if c.extent.universe() != ctx.object_count() || c.intent.universe() != ctx.attribute_count() {
            return inconsistent("concept sized for a different context".into());
        }
        if ctx.extent_bits(c.intent.bits()) != *c.extent.bits() || ctx.intent_bits(c.extent.bits()) != *c.intent.bits()
        {
            return inconsistent(alloc::format!("({:?}, {:?}) is not closed", c.extent, c.intent));
        }
        if !extents.insert(c.extent.bits().clone()) {
            return inconsistent(alloc::format!("extent {:?} listed twice", c.extent));
        }
    }
    // Every extent is an intersection of attribute extents, so a family that
    // holds the top, every attribute concept and all pairwise meets is complete.
    if !extents.contains(&BitSet::full(ctx.object_count())) {
        return inconsistent("missing top concept".into());
    }
    for m in 0..ctx.attribute_count() {
        if !extents.contains(ctx.column(m)) {
            return inconsistent(alloc::format!("missing attribute concept of {:?}", ctx.attributes()[m]));
        }
    }
    let all: Vec<&BitSet> = extents.iter().collect();
    for (i, a) in all.iter().enumerate() {
        for b in &all[i + 1..] {
            if !extents.contains(&a.intersection(b)) {
                return inconsistent("family not closed under meets".into());
            }
        }
    }
    Ok(ConceptLattice::assemble(ctx, concepts))
}

pub fn lattice_height(lattice: &ConceptLattice) -> usize {
    lattice.height()
}

/// Reduced labelling: where each attribute and object first appears.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelAssignment {
    /// Per attribute, the index of its attribute concept.
    pub attribute_introducer: Vec<usize>,
    /// Per object, the index of its object concept.
    pub object_introducer: Vec<usize>,
}

impl LabelAssignment {
    /// Attributes introduced at concept `c`, ascending.
    pub fn introduced_attributes(&self, c: usize) -> Vec<usize> {
        positions_of(&self.attribute_introducer, c)
    }

    /// Objects introduced at concept `c`, ascending.
    pub fn introduced_objects(&self, c: usize) -> Vec<usize> {
        positions_of(&self.object_introducer, c)
    }
}

fn positions_of(introducers: &[usize], c: usize) -> Vec<usize> {
    introducers
        .iter()
        .enumerate()
        .filter(|&(_, &i)| i == c)
        .map(|(x, _)| x)
        .collect()
}

pub fn labels(ctx: &FormalContext, lattice: &ConceptLattice) -> LabelAssignment {
    let attribute_introducer = (0..ctx.attribute_count())
        .map(|m| lattice.by_extent[ctx.column(m)])
        .collect();
    let object_introducer = (0..ctx.object_count())
        .map(|g| {
            let extent = ctx.extent_bits(ctx.row(g));
            lattice.by_extent[&extent]
        })
        .collect();
    LabelAssignment {
        attribute_introducer,
        object_introducer,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{toy, toy_unification};
    use crate::transform::apply_script;

    fn intent_names(ctx: &FormalContext, c: &FormalConcept) -> Vec<String> {
        ctx.attribute_names(&c.intent).map(String::from).collect()
    }

    fn extent_names(ctx: &FormalContext, c: &FormalConcept) -> Vec<String> {
        ctx.object_names(&c.extent).map(String::from).collect()
    }

    fn toy_unified() -> FormalContext {
        apply_script(&toy(), &toy_unification(), &Default::default()).unwrap().0
    }

    #[test]
    fn toy_has_seven_concepts() {
        let ctx = toy();
        let concepts = enumerate_concepts(&ctx).unwrap();
        assert_eq!(concepts.len(), 7);
        assert_eq!(extent_names(&ctx, &concepts[0]).len(), 3);
        assert!(concepts[0].intent.is_empty());
        assert_eq!(concepts[6].intent, ctx.all_attributes());
        assert!(concepts[6].extent.is_empty());
    }

    #[test]
    fn unified_toy_has_four_concepts_rooted_at_name_time() {
        let ctx = toy_unified();
        let concepts = enumerate_concepts(&ctx).unwrap();
        assert_eq!(concepts.len(), 4);
        let mut root = intent_names(&ctx, &concepts[0]);
        root.sort();
        assert_eq!(root, ["name", "time"]);
    }

    #[test]
    fn empty_context_has_single_concept() {
        let concepts = enumerate_concepts(&FormalContext::empty()).unwrap();
        assert_eq!(concepts.len(), 1);
        assert!(concepts[0].extent.is_empty() && concepts[0].intent.is_empty());
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            enumerate_concepts_capped(&toy(), 6),
            Err(LatticeError::ResourceLimitExceeded { cap: 6 })
        );
        assert!(enumerate_concepts_capped(&toy(), 7).is_ok());
    }

    #[test]
    fn toy_covers_and_layers() {
        let ctx = toy();
        let lat = build_lattice(&ctx, enumerate_concepts(&ctx).unwrap()).unwrap();
        assert_eq!(lat.covers().len(), 9);
        assert_eq!(lat.height(), 4);
        assert_eq!(lat.layer(lat.top()), 0);
        assert_eq!(lat.layer(lat.bottom()), 3);
        let find = |names: &[&str]| {
            let e = ctx.objects_named(names.iter().copied()).unwrap();
            lat.index_of_extent(&e).unwrap()
        };
        let sd = find(&["Storage", "DBTablespace"]);
        let dc = find(&["DBTablespace", "ServiceCall"]);
        assert_eq!(intent_names(&ctx, lat.concept(sd)), ["time", "used", "max"]);
        assert_eq!(intent_names(&ctx, lat.concept(dc)), ["name"]);
        assert_eq!((lat.layer(sd), lat.layer(dc)), (1, 1));
        for obj in ["Storage", "DBTablespace", "ServiceCall"] {
            assert_eq!(lat.layer(find(&[obj])), 2);
        }
        let d = find(&["DBTablespace"]);
        assert_eq!(lat.parents(d), {
            let mut p = vec![sd, dc];
            p.sort();
            p
        });
        assert_eq!(lat.children(lat.top()).len(), 2);
        assert_eq!(lat.parents(lat.bottom()).len(), 3);
    }

    #[test]
    fn single_concept_lattice() {
        let ctx = FormalContext::build(["g"], ["a"], [("g", "a")]).unwrap();
        let lat = ConceptLattice::compute(&ctx, DEFAULT_CONCEPT_CAP).unwrap();
        assert_eq!(lat.len(), 1);
        assert!(lat.covers().is_empty());
        assert_eq!(lat.top(), lat.bottom());
        assert_eq!(lattice_height(&lat), 1);
    }

    #[test]
    fn unified_toy_height_three() {
        let lat = ConceptLattice::compute(&toy_unified(), DEFAULT_CONCEPT_CAP).unwrap();
        assert_eq!(lat.height(), 3);
    }

    #[test]
    fn build_rejects_incomplete_family() {
        let ctx = toy();
        let mut concepts = enumerate_concepts(&ctx).unwrap();
        concepts.remove(1);
        assert!(matches!(
            build_lattice(&ctx, concepts),
            Err(LatticeError::InconsistentInput { .. })
        ));
    }

    #[test]
    fn build_rejects_non_concepts_and_duplicates() {
        let ctx = toy();
        let mut concepts = enumerate_concepts(&ctx).unwrap();
        concepts.push(concepts[2].clone());
        assert!(build_lattice(&ctx, concepts).is_err());

        let mut concepts = enumerate_concepts(&ctx).unwrap();
        concepts[1].intent = AttributeSet::empty(8);
        assert!(build_lattice(&ctx, concepts).is_err());
    }

    #[test]
    fn toy_labels() {
        let ctx = toy();
        let lat = ConceptLattice::compute(&ctx, DEFAULT_CONCEPT_CAP).unwrap();
        let labels = labels(&ctx, &lat);
        let name_at = labels.attribute_introducer[ctx.attribute_index("name").unwrap()];
        assert_eq!(
            extent_names(&ctx, lat.concept(name_at)),
            ["DBTablespace", "ServiceCall"]
        );
        assert_eq!(intent_names(&ctx, lat.concept(name_at)), ["name"]);

        let storage_at = labels.object_introducer[0];
        assert_eq!(extent_names(&ctx, lat.concept(storage_at)), ["Storage"]);
        assert_eq!(
            intent_names(&ctx, lat.concept(storage_at)),
            ["time", "used", "max", "path"]
        );
        assert!(labels.introduced_attributes(lat.top()).is_empty());
        assert!(labels.introduced_objects(lat.bottom()).is_empty());
    }

    #[test]
    fn unified_toy_time_introduced_at_top() {
        let ctx = toy_unified();
        let lat = ConceptLattice::compute(&ctx, DEFAULT_CONCEPT_CAP).unwrap();
        let labels = labels(&ctx, &lat);
        let time = ctx.attribute_index("time").unwrap();
        assert_eq!(labels.attribute_introducer[time], lat.top());
    }
}

//! Close-by-One and the cover computation against powerset enumeration.

mod common;

use std::collections::BTreeSet;

use common::{arb_context, brute_force_concepts, brute_force_covers, brute_force_layers, Set};
use lakefca_core::{build_lattice, enumerate_concepts, labels, ConceptLattice, DEFAULT_CONCEPT_CAP};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn enumeration_matches_powerset(ctx in arb_context(8, 10)) {
        let concepts = enumerate_concepts(&ctx).unwrap();
        let ours: BTreeSet<(Set, Set)> = concepts
            .iter()
            .map(|c| (c.extent.iter().collect(), c.intent.iter().collect()))
            .collect();
        prop_assert_eq!(ours.len(), concepts.len(), "duplicates emitted");
        prop_assert_eq!(&ours, &brute_force_concepts(&ctx));

        let bound = 1usize << ctx.object_count().min(ctx.attribute_count());
        prop_assert!(!concepts.is_empty() && concepts.len() <= bound);
        for w in concepts.windows(2) {
            prop_assert!(w[0].canonical_cmp(&w[1]).is_lt());
        }
    }

    #[test]
    fn covers_and_layers_match_reduction(ctx in arb_context(7, 9)) {
        let lat = build_lattice(&ctx, enumerate_concepts(&ctx).unwrap()).unwrap();
        let family: Vec<(Set, Set)> = brute_force_concepts(&ctx).into_iter().collect();
        let extent = |i: usize| -> Set { lat.concept(i).extent.iter().collect() };

        let ours: BTreeSet<(Set, Set)> = lat.covers().iter().map(|&(p, c)| (extent(p), extent(c))).collect();
        prop_assert_eq!(ours, brute_force_covers(&family));

        for (a, layer) in brute_force_layers(&family) {
            let i = (0..lat.len()).find(|&i| extent(i) == a).unwrap();
            prop_assert_eq!(lat.layer(i), layer);
        }

        prop_assert_eq!(lat.concept(lat.top()).extent.len(), ctx.object_count());
        for c in lat.concepts() {
            prop_assert!(c.intent.is_subset(&lat.concept(lat.bottom()).intent));
        }
        for &(p, c) in lat.covers() {
            prop_assert!(lat.layer(c) > lat.layer(p));
        }
    }

    #[test]
    fn introducers_are_unique_and_reconstruct_rows(ctx in arb_context(8, 10)) {
        let lat = ConceptLattice::compute(&ctx, DEFAULT_CONCEPT_CAP).unwrap();
        let lab = labels(&ctx, &lat);
        prop_assert_eq!(lab.attribute_introducer.len(), ctx.attribute_count());
        prop_assert_eq!(lab.object_introducer.len(), ctx.object_count());

        for m in 0..ctx.attribute_count() {
            let c = lat.concept(lab.attribute_introducer[m]);
            prop_assert_eq!(c.extent.bits(), ctx.column(m));
            // maximal: no parent carries m
            for &p in lat.parents(lab.attribute_introducer[m]) {
                prop_assert!(!lat.concept(p).intent.contains(m));
            }
        }
        for g in 0..ctx.object_count() {
            let gamma = lab.object_introducer[g];
            prop_assert_eq!(lat.concept(gamma).intent.bits(), ctx.row(g));
            // attributes introduced at or above gamma(g) give back the row
            let above: Vec<usize> = (0..lat.len())
                .filter(|&i| lat.concept(gamma).extent.is_subset(&lat.concept(i).extent))
                .collect();
            let rebuilt: Set = above.iter().flat_map(|&i| lab.introduced_attributes(i)).collect();
            prop_assert_eq!(rebuilt, ctx.row(g).iter().collect::<Set>());
        }
    }

    #[test]
    fn canonical_order_is_deterministic(ctx in arb_context(8, 10)) {
        let a = ConceptLattice::compute(&ctx, DEFAULT_CONCEPT_CAP).unwrap();
        let b = ConceptLattice::compute(&ctx.clone(), DEFAULT_CONCEPT_CAP).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn toy_matches_oracle_counts() {
    let ctx = lakefca_core::fixtures::toy();
    let family: Vec<(Set, Set)> = brute_force_concepts(&ctx).into_iter().collect();
    assert_eq!(family.len(), 7);
    assert_eq!(brute_force_covers(&family).len(), 9);
    let max_layer = brute_force_layers(&family).iter().map(|(_, l)| *l).max().unwrap();
    assert_eq!(max_layer + 1, 4);
}

//! Brute-force reference implementations, kept deliberately naive and
//! independent of the crate's enumeration and cover code.

#![allow(dead_code)]

use std::collections::BTreeSet;

use lakefca_core::FormalContext;
use proptest::prelude::*;

pub type Set = BTreeSet<usize>;

pub fn random_context(objects: usize, attributes: usize, cells: &[bool]) -> FormalContext {
    let rows = (0..objects)
        .map(|g| (0..attributes).filter(|&m| cells[g * attributes + m]).collect())
        .collect();
    FormalContext::from_row_indices(
        (0..objects).map(|g| format!("g{g}")).collect(),
        (0..attributes).map(|m| format!("m{m}")).collect(),
        rows,
    )
    .unwrap()
}

/// Contexts up to `max_g` x `max_m` with per-cell density drawn from `densities`.
pub fn arb_context(max_g: usize, max_m: usize) -> impl Strategy<Value = FormalContext> {
    (0..=max_g, 0..=max_m, prop::sample::select(vec![0.2, 0.5, 0.8])).prop_flat_map(|(g, m, p)| {
        prop::collection::vec(prop::bool::weighted(p), g * m).prop_map(move |cells| random_context(g, m, &cells))
    })
}

fn rows(ctx: &FormalContext) -> Vec<Set> {
    (0..ctx.object_count()).map(|g| ctx.row(g).iter().collect()).collect()
}

pub fn naive_extent(ctx: &FormalContext, attrs: &Set) -> Set {
    rows(ctx)
        .iter()
        .enumerate()
        .filter(|(_, r)| attrs.is_subset(r))
        .map(|(g, _)| g)
        .collect()
}

pub fn naive_intent(ctx: &FormalContext, objs: &Set) -> Set {
    let rows = rows(ctx);
    (0..ctx.attribute_count())
        .filter(|m| objs.iter().all(|&g| rows[g].contains(m)))
        .collect()
}

/// Every concept as (extent, intent), found by closing all attribute subsets.
pub fn brute_force_concepts(ctx: &FormalContext) -> BTreeSet<(Set, Set)> {
    let m = ctx.attribute_count();
    assert!(m <= 16, "powerset oracle is for small contexts");
    (0u32..1 << m)
        .map(|mask| {
            let b: Set = (0..m).filter(|i| mask & (1 << i) != 0).collect();
            let a = naive_extent(ctx, &b);
            let closed = naive_intent(ctx, &a);
            (a, closed)
        })
        .collect()
}

/// Transitive reduction of strict extent inclusion, as (parent, child) extents.
pub fn brute_force_covers(concepts: &[(Set, Set)]) -> BTreeSet<(Set, Set)> {
    let lt = |a: &Set, b: &Set| a.is_subset(b) && a != b;
    let mut covers = BTreeSet::new();
    for (c, _) in concepts {
        for (p, _) in concepts {
            if lt(c, p) && !concepts.iter().any(|(q, _)| lt(c, q) && lt(q, p)) {
                covers.insert((p.clone(), c.clone()));
            }
        }
    }
    covers
}

/// Longest number of cover steps from the top down to each extent.
pub fn brute_force_layers(concepts: &[(Set, Set)]) -> Vec<(Set, usize)> {
    let covers = brute_force_covers(concepts);
    let mut sorted: Vec<&Set> = concepts.iter().map(|(a, _)| a).collect();
    sorted.sort_by_key(|a| std::cmp::Reverse(a.len()));
    let mut out: Vec<(Set, usize)> = Vec::new();
    for a in sorted {
        let layer = covers
            .iter()
            .filter(|(_, c)| c == a)
            .map(|(p, _)| out.iter().find(|(x, _)| x == p).unwrap().1 + 1)
            .max()
            .unwrap_or(0);
        out.push((a.clone(), layer));
    }
    out
}

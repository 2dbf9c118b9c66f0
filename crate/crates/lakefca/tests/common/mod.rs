#![allow(dead_code)]

#[path = "../../../core/tests/common/mod.rs"]
pub mod oracle;
pub mod synthetic;

use lakefca_core::FormalContext;
use proptest::prelude::*;
use rand::Rng;

pub const TOY_CXT: &str = "B\n\n3\n8\n\nStorage\nDBTablespace\nServiceCall\ntime\ntimestamp\nused\nmax\npath\nname\nserviceName\nduration\nX.XXX...\nX.XX.X..\n.X...XXX\n";

/// A context of at most `max_g` x `max_m` with density 0.2, 0.5 or 0.8.
pub fn seeded_context(rng: &mut impl Rng, max_g: usize, max_m: usize) -> FormalContext {
    let g = rng.gen_range(0..=max_g);
    let m = rng.gen_range(0..=max_m);
    let p = [0.2, 0.5, 0.8][rng.gen_range(0..3)];
    let cells: Vec<bool> = (0..g * m).map(|_| rng.gen_bool(p)).collect();
    oracle::random_context(g, m, &cells)
}

fn names(max: usize) -> impl Strategy<Value = Vec<String>> {
    // anything but line breaks, so the same names are valid in CXT and CSV
    prop::collection::btree_set("[^\r\n]{1,6}", 0..=max)
        .prop_map(|s| s.into_iter().collect::<Vec<_>>())
        .prop_shuffle()
}

/// Contexts with awkward names: commas, quotes, spaces, non-ASCII.
pub fn arb_named_context(max_g: usize, max_m: usize) -> impl Strategy<Value = FormalContext> {
    (names(max_g), names(max_m), prop::sample::select(vec![0.2, 0.5, 0.8])).prop_flat_map(|(objects, attributes, p)| {
        let cells = objects.len() * attributes.len();
        prop::collection::vec(prop::bool::weighted(p), cells).prop_map(move |cells| {
            let w = attributes.len();
            let rows = (0..objects.len())
                .map(|g| (0..w).filter(|&m| cells[g * w + m]).collect())
                .collect();
            FormalContext::from_row_indices(objects.clone(), attributes.clone(), rows).unwrap()
        })
    })
}

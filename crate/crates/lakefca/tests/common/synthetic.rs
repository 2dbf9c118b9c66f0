//! A seeded 32 x 190 lake standing in for the real monitoring dataset.
//!
//! 88 canonical fields: 22 popular ones shared through ten families of
//! structures, and 66 rare ones split among the six widest structures. Each
//! shared field is then spelled several ways so that 190 names are in use;
//! the unification script merges every spelling back to its canonical name.

use lakefca_core::{FormalContext, TransformOp, TransformScript};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 95;
pub const OBJECTS: usize = 32;
pub const CANONICAL: usize = 88;
pub const NAMES: usize = 190;
const POPULAR: usize = 22;
const NARROW: usize = 26;
const FAMILIES: usize = 10;
const OPTIONAL: usize = 2;

fn field(f: usize, variant: usize) -> String {
    if variant == 0 {
        format!("field_{f:02}")
    } else {
        format!("field_{f:02}_alt{variant}")
    }
}

/// The pre-unification context and the script that unifies it.
pub fn synthetic_lake(seed: u64) -> (FormalContext, TransformScript) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Every family shares field 0 plus two others, and may use two optional ones.
    let families: Vec<(Vec<usize>, Vec<usize>)> = (0..FAMILIES)
        .map(|_| {
            let mut base = vec![0];
            while base.len() < 3 {
                let f = rng.gen_range(1..POPULAR);
                if !base.contains(&f) {
                    base.push(f);
                }
            }
            let optional = (0..OPTIONAL).map(|_| rng.gen_range(1..POPULAR)).collect();
            (base, optional)
        })
        .collect();

    let wide = OBJECTS - NARROW;
    let mut rows: Vec<Vec<usize>> = Vec::with_capacity(OBJECTS);
    for g in 0..OBJECTS {
        let (base, optional) = &families[g % FAMILIES];
        let mut row = base.clone();
        for &f in optional {
            if rng.gen_bool(0.6) {
                row.push(f);
            }
        }
        if rng.gen_bool(0.5) {
            row.push(rng.gen_range(1..POPULAR));
        }
        if g >= NARROW {
            row.extend((POPULAR..CANONICAL).filter(|f| (f - POPULAR) % wide == g - NARROW));
            row.push(rng.gen_range(POPULAR..CANONICAL));
        }
        row.sort_unstable();
        row.dedup();
        rows.push(row);
    }

    let mut users: Vec<Vec<usize>> = vec![Vec::new(); CANONICAL];
    for (g, row) in rows.iter().enumerate() {
        for &f in row {
            users[f].push(g);
        }
    }
    assert!(users.iter().all(|u| !u.is_empty()), "seed {seed} leaves a field unused");

    // Hand out NAMES - CANONICAL extra spellings among fields with spare users.
    let mut spellings = vec![1usize; CANONICAL];
    let mut candidates: Vec<usize> = (0..CANONICAL).filter(|&f| users[f].len() > 1).collect();
    for _ in CANONICAL..NAMES {
        candidates.retain(|&f| spellings[f] < users[f].len());
        let f = *candidates
            .choose(&mut rng)
            .expect("enough shared fields for every spelling");
        spellings[f] += 1;
    }
    let mut spelling_of = vec![vec![0usize; OBJECTS]; CANONICAL];
    for f in 0..CANONICAL {
        let mut us = users[f].clone();
        us.shuffle(&mut rng);
        for (i, &g) in us.iter().enumerate() {
            spelling_of[f][g] = i % spellings[f];
        }
    }

    let objects: Vec<String> = (0..OBJECTS).map(|g| format!("structure_{g:02}")).collect();
    let attributes: Vec<String> = (0..CANONICAL)
        .flat_map(|f| (0..spellings[f]).map(move |v| field(f, v)))
        .collect();
    let pairs: Vec<(String, String)> = rows
        .iter()
        .enumerate()
        .flat_map(|(g, row)| row.iter().map(move |&f| (g, f)))
        .map(|(g, f)| (objects[g].clone(), field(f, spelling_of[f][g])))
        .collect();
    let ctx = FormalContext::build(
        objects.iter().cloned(),
        attributes,
        pairs.iter().map(|(g, m)| (g.as_str(), m.as_str())),
    )
    .expect("generated names are unique");

    let ops = (0..CANONICAL)
        .filter(|&f| spellings[f] > 1)
        .map(|f| TransformOp::merge_attributes((0..spellings[f]).map(|v| field(f, v)), field(f, 0)))
        .collect();
    (ctx, TransformScript::new(ops))
}

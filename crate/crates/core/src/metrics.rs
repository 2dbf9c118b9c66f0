//! Field-name frequencies, coverage curves and before/after statistics.

use alloc::vec::Vec;

use crate::context::FormalContext;
use crate::lattice::{ConceptLattice, LatticeError};

/// Size of a context and of its concept lattice.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ContextStats {
    pub object_count: usize,
    pub attribute_count: usize,
    pub concept_count: usize,
    pub lattice_height: usize,
}

impl ContextStats {
    pub fn of(ctx: &FormalContext, lattice: &ConceptLattice) -> Self {
        ContextStats {
            object_count: ctx.object_count(),
            attribute_count: ctx.attribute_count(),
            concept_count: lattice.len(),
            lattice_height: lattice.height(),
        }
    }
}

pub fn context_stats(ctx: &FormalContext, cap: usize) -> Result<ContextStats, LatticeError> {
    let lattice = ConceptLattice::compute(ctx, cap)?;
    Ok(ContextStats::of(ctx, &lattice))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AttributeFrequency {
    pub attribute: usize,
    pub count: usize,
}

/// Column sums, most frequent first; ties broken by attribute name.
pub fn attribute_frequencies(ctx: &FormalContext) -> Vec<AttributeFrequency> {
    let mut freq: Vec<AttributeFrequency> = (0..ctx.attribute_count())
        .map(|m| AttributeFrequency {
            attribute: m,
            count: ctx.column(m).len(),
        })
        .collect();
    let names = ctx.attributes();
    freq.sort_by(|a, b| {
        b.count
            .cmp(&a.count)
            .then_with(|| names[a.attribute].cmp(&names[b.attribute]))
    });
    freq
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoverageReport {
    pub ranking: Vec<AttributeFrequency>,
    /// `points[k - 1]` is the fraction of objects whose whole field set lies
    /// within the first `k` ranked attributes.
    pub points: Vec<f64>,
    /// Objects covered with no attribute selected (those with empty rows).
    pub covered_at_zero: usize,
    pub object_count: usize,
}

impl CoverageReport {
    pub fn coverage_at(&self, k: usize) -> f64 {
        if k == 0 {
            return ratio(self.covered_at_zero, self.object_count);
        }
        self.points[k.min(self.points.len()) - 1]
    }

    /// Smallest `k` reaching at least `fraction` coverage.
    pub fn attributes_needed(&self, fraction: f64) -> Option<usize> {
        if self.coverage_at(0) >= fraction {
            return Some(0);
        }
        self.points.iter().position(|&p| p >= fraction).map(|i| i + 1)
    }
}

fn ratio(n: usize, d: usize) -> f64 {
    if d == 0 {
        0.0
    } else {
        n as f64 / d as f64
    }
}

pub fn coverage_curve(ctx: &FormalContext) -> CoverageReport {
    let ranking = attribute_frequencies(ctx);
    let mut rank = alloc::vec![0usize; ctx.attribute_count()];
    for (r, f) in ranking.iter().enumerate() {
        rank[f.attribute] = r;
    }
    // newly_covered[k] = objects whose lowest-ranked attribute sits at k - 1
    let mut newly_covered = alloc::vec![0usize; ctx.attribute_count() + 1];
    for row in ctx.rows() {
        let needed = row.iter().map(|m| rank[m] + 1).max().unwrap_or(0);
        newly_covered[needed] += 1;
    }
    let n = ctx.object_count();
    let mut covered = newly_covered[0];
    let points = newly_covered[1..]
        .iter()
        .map(|&c| {
            covered += c;
            ratio(covered, n)
        })
        .collect();
    CoverageReport {
        ranking,
        points,
        covered_at_zero: newly_covered[0],
        object_count: n,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StatsDelta {
    pub before: ContextStats,
    pub after: ContextStats,
    /// `(before - after) / before` over attribute counts; 0 when `before` is 0.
    pub attribute_reduction: f64,
    /// The reduction as an integer percentage, rounded half up.
    pub attribute_reduction_percent: i64,
}

pub fn compare_stats(before: ContextStats, after: ContextStats) -> StatsDelta {
    let b = before.attribute_count as i64;
    let a = after.attribute_count as i64;
    let (reduction, percent) = if b == 0 {
        (0.0, 0)
    } else {
        let num = 100 * (b - a);
        ((b - a) as f64 / b as f64, (2 * num + b).div_euclid(2 * b))
    };
    StatsDelta {
        before,
        after,
        attribute_reduction: reduction,
        attribute_reduction_percent: percent,
    }
}

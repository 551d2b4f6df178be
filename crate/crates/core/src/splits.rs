//! Bipartitions and the Robinson-Foulds family of distances.
//!
//! Trees are rooted. Every internal edge (parent and child both internal)
//! is identified with the leaf set below its lower endpoint, so a tree has
//! exactly one bipartition per non-root internal node after unary
//! collapsing. This keeps the split counts equal to the unlabeled bracket
//! counts of EvalB with the top-level bracket excluded, and therefore
//! `rfd = 1 - F` holds exactly.

use std::collections::BTreeSet;

use crate::bitset::LeafSet;
use crate::tree::{align_leaves, Tree, UniverseError};

/// A split of the leaf set induced by one internal edge. `side` is the clade
/// below the edge; the other side is its complement.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bipartition {
    side: LeafSet,
    universe: usize,
}

impl Bipartition {
    pub(crate) fn new(side: LeafSet, universe: usize) -> Self {
        Bipartition { side, universe }
    }

    /// Builds a bipartition from 1-based leaf positions.
    pub fn from_positions(positions: &[usize], universe: usize) -> Self {
        let mut side = LeafSet::empty(universe);
        for &p in positions {
            side.insert(p - 1);
        }
        Bipartition { side, universe }
    }

    pub fn side(&self) -> &LeafSet {
        &self.side
    }

    pub fn other_side(&self) -> LeafSet {
        self.side.complement(self.universe)
    }

    pub fn universe_size(&self) -> usize {
        self.universe
    }

    /// 1-based positions on the clade side.
    pub fn positions(&self) -> Vec<usize> {
        self.side.iter().map(|i| i + 1).collect()
    }

    /// The same split oriented as the side that excludes leaf 1.
    pub fn canonical(&self) -> Bipartition {
        if self.side.contains(0) {
            Bipartition {
                side: self.other_side(),
                universe: self.universe,
            }
        } else {
            self.clone()
        }
    }
}

/// Bipartitions of `t` under an explicit leaf numbering.
pub(crate) fn indexed_bipartitions(t: &Tree, index: &[usize], n: usize) -> BTreeSet<Bipartition> {
    let clades = t.clades(index, n);
    t.internal_nodes()
        .filter(|&id| id != t.root())
        .map(|id| &clades[id])
        .filter(|c| c.len() >= 2 && c.len() < n)
        .map(|c| Bipartition::new(c.clone(), n))
        .collect()
}

/// One bipartition per internal edge, over the tree's own leaf positions.
pub fn bipartitions(t: &Tree) -> BTreeSet<Bipartition> {
    let n = t.leaf_count();
    let index: Vec<usize> = (0..n).collect();
    indexed_bipartitions(t, &index, n)
}

/// Unrooted view: nontrivial splits (both sides at least two leaves),
/// oriented away from leaf 1 and deduplicated. Two clades on either side of
/// a two-child root collapse into one split here.
pub fn unrooted_splits(t: &Tree) -> BTreeSet<Bipartition> {
    let n = t.leaf_count();
    bipartitions(t)
        .into_iter()
        .filter(|b| b.side.len() <= n.saturating_sub(2))
        .map(|b| b.canonical())
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SplitCounts {
    /// |E ∩ E'|
    pub shared: usize,
    /// |E − E'|
    pub only_a: usize,
    /// |E' − E|
    pub only_b: usize,
}

impl SplitCounts {
    pub fn splits_a(&self) -> usize {
        self.shared + self.only_a
    }

    pub fn splits_b(&self) -> usize {
        self.shared + self.only_b
    }

    /// Symmetric difference size: the contraction/expansion operation count.
    pub fn distance(&self) -> usize {
        self.only_a + self.only_b
    }

    /// `(|E−E'| + |E'−E|) / (|E| + |E'|)`, zero when neither tree has an
    /// internal edge.
    pub fn normalized(&self) -> f64 {
        let total = self.splits_a() + self.splits_b();
        if total == 0 {
            0.0
        } else {
            self.distance() as f64 / total as f64
        }
    }
}

fn aligned_splits(t1: &Tree, t2: &Tree) -> Result<(BTreeSet<Bipartition>, BTreeSet<Bipartition>), UniverseError> {
    let al = align_leaves(t1, t2)?;
    Ok((
        indexed_bipartitions(t1, &al.first, al.n),
        indexed_bipartitions(t2, &al.second, al.n),
    ))
}

pub fn rf_counts(t1: &Tree, t2: &Tree) -> Result<SplitCounts, UniverseError> {
    let (a, b) = aligned_splits(t1, t2)?;
    let shared = a.intersection(&b).count();
    Ok(SplitCounts {
        shared,
        only_a: a.len() - shared,
        only_b: b.len() - shared,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RfScale {
    /// Fraction of all splits that are unshared, in [0, 1].
    Normalized,
    /// Raw count of unshared splits.
    Count,
}

pub fn rfd(t1: &Tree, t2: &Tree, scale: RfScale) -> Result<f64, UniverseError> {
    let counts = rf_counts(t1, t2)?;
    Ok(match scale {
        RfScale::Normalized => counts.normalized(),
        RfScale::Count => counts.distance() as f64,
    })
}

/// `b` is compatible with the gold tree when, against every gold split, one
/// side of `b` lies inside one side of the gold split.
pub fn is_compatible(b: &Bipartition, gold_splits: &BTreeSet<Bipartition>) -> bool {
    let a1 = &b.side;
    let a2 = b.other_side();
    gold_splits.iter().all(|g| {
        let g1 = &g.side;
        let g2 = g.other_side();
        a1.is_subset(g1) || a1.is_subset(&g2) || a2.is_subset(g1) || a2.is_subset(&g2)
    })
}

/// Generalized RF distance: fraction of the test tree's splits that are
/// incompatible with the gold tree. Zero when the test tree has no splits.
pub fn grfd(test: &Tree, gold: &Tree) -> Result<f64, UniverseError> {
    let (test_splits, gold_splits) = aligned_splits(test, gold)?;
    if test_splits.is_empty() {
        return Ok(0.0);
    }
    let compatible = test_splits.iter().filter(|b| is_compatible(b, &gold_splits)).count();
    Ok((test_splits.len() - compatible) as f64 / test_splits.len() as f64)
}

//! Unlabeled bracket scoring in the style of EvalB.
//!
//! Brackets are matched by the set of words they dominate. For trees built
//! from the same sentence that is the same as matching `(start, end)` spans;
//! for arbitrary trees over a shared leaf set it is the only meaningful
//! choice, since a constituent need not be contiguous in the other tree's
//! word order.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::tree::{align_leaves, Tree, UniverseError};

/// Inclusive 1-based word span.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f_score: f64,
    pub matched: usize,
    pub n_test: usize,
    pub n_gold: usize,
}

impl Prf {
    /// Empty bracket sets count as perfect precision (or recall), so a tree
    /// compared with itself always scores F = 1.
    pub fn from_counts(matched: usize, n_test: usize, n_gold: usize) -> Self {
        let precision = if n_test == 0 {
            1.0
        } else {
            matched as f64 / n_test as f64
        };
        let recall = if n_gold == 0 {
            1.0
        } else {
            matched as f64 / n_gold as f64
        };
        let f_score = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        Prf {
            precision,
            recall,
            f_score,
            matched,
            n_test,
            n_gold,
        }
    }
}

/// Word span of every multi-word constituent, in the tree's own order.
pub fn spans(t: &Tree, include_root: bool) -> BTreeSet<Span> {
    let n = t.leaf_count();
    let mut bounds: Vec<(usize, usize)> = vec![(usize::MAX, 0); t.node_count()];
    for id in t.postorder() {
        let node = t.node(id);
        bounds[id] = match &node.leaf {
            Some(leaf) => (leaf.position, leaf.position),
            None => node.children.iter().fold((usize::MAX, 0), |(lo, hi), &c| {
                (lo.min(bounds[c].0), hi.max(bounds[c].1))
            }),
        };
    }
    let mut out: BTreeSet<Span> = t
        .internal_nodes()
        .map(|id| Span {
            start: bounds[id].0,
            end: bounds[id].1,
        })
        .filter(|s| s.end > s.start && !(s.start == 1 && s.end == n))
        .collect();
    if include_root && n > 0 {
        out.insert(Span { start: 1, end: n });
    }
    out
}

/// Dominated word sets (sorted shared indices) of every multi-word
/// constituent.
fn constituents(t: &Tree, index: &[usize], include_root: bool) -> HashSet<Vec<usize>> {
    let n = t.leaf_count();
    let mut below: Vec<Vec<usize>> = vec![Vec::new(); t.node_count()];
    let mut out = HashSet::new();
    for id in t.postorder() {
        let node = t.node(id);
        let mut words = match &node.leaf {
            Some(leaf) => vec![index[leaf.position - 1]],
            None => node.children.iter().flat_map(|&c| below[c].iter().copied()).collect(),
        };
        words.sort_unstable();
        if node.leaf.is_none() && words.len() >= 2 && words.len() < n {
            out.insert(words.clone());
        }
        below[id] = words;
    }
    if include_root && n > 0 {
        out.insert((0..n).collect());
    }
    out
}

pub fn unlabeled_prf(test: &Tree, gold: &Tree, include_root: bool) -> Result<Prf, UniverseError> {
    // Gold supplies the shared index space.
    let al = align_leaves(gold, test)?;
    let gold_sets = constituents(gold, &al.first, include_root);
    let test_sets = constituents(test, &al.second, include_root);
    let matched = test_sets.intersection(&gold_sets).count();
    Ok(Prf::from_counts(matched, test_sets.len(), gold_sets.len()))
}

//! Quartet topologies, quartet distance (QD) and generalized quartet
//! distance (GQD).
//!
//! Two independent paths compute the same counts:
//!
//! * [`quartet_counts_bruteforce`] enumerates every 4-leaf subset and
//!   classifies it with the four-point condition on path lengths obtained
//!   from LCA depths. O(n⁴); used as the reference.
//! * [`compare_quartets`] counts butterflies through *claims*. In the
//!   unrooted view of a tree, a butterfly `ab|cd` is claimed exactly twice:
//!   by the node where `a` and `b` branch apart while `c`, `d` sit together
//!   in a third subtree, and symmetrically for `cd`. Pairing claims of two
//!   trees node by node reduces every count to sums over the matrix of
//!   subtree intersection sizes, giving O(Σ deg(v)² · Σ deg(v')²) = O(n²d²).

use thiserror::Error;

use crate::lca::Lca;
use crate::tree::{align_leaves, LeafAlignment, NodeId, Tree, UniverseError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuartetError {
    #[error("quartets need at least 4 leaves, tree has {n}")]
    TooFewLeaves { n: usize },
    #[error("leaf index {index} out of range 1..={n}")]
    LeafOutOfRange { index: usize, n: usize },
    #[error("leaf index {index} given twice")]
    DuplicateLeaf { index: usize },
    #[error(transparent)]
    Universe(#[from] UniverseError),
}

/// Resolution of a sorted quartet `a < b < c < d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuartetShape {
    /// ab|cd
    AbCd,
    /// ac|bd
    AcBd,
    /// ad|bc
    AdBc,
    /// no internal edge separates two pairs
    Star,
}

impl QuartetShape {
    pub fn is_butterfly(self) -> bool {
        self != QuartetShape::Star
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuartetTopology {
    /// 1-based leaf positions, ascending.
    pub leaves: [usize; 4],
    pub shape: QuartetShape,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuartetCensus {
    pub butterflies: u64,
    pub stars: u64,
    pub total: u64,
}

pub fn choose4(n: usize) -> u64 {
    if n < 4 {
        return 0;
    }
    let n = n as u64;
    n * (n - 1) * (n - 2) * (n - 3) / 24
}

fn choose2(k: i64) -> i64 {
    k * (k - 1) / 2
}

/// Four-point condition on the three pair-sums of a quartet.
fn shape_from_sums(ab_cd: usize, ac_bd: usize, ad_bc: usize) -> QuartetShape {
    if ab_cd < ac_bd && ab_cd < ad_bc {
        QuartetShape::AbCd
    } else if ac_bd < ab_cd && ac_bd < ad_bc {
        QuartetShape::AcBd
    } else if ad_bc < ab_cd && ad_bc < ac_bd {
        QuartetShape::AdBc
    } else {
        QuartetShape::Star
    }
}

pub fn classify_quartet(t: &Tree, leaves: [usize; 4]) -> Result<QuartetTopology, QuartetError> {
    let n = t.leaf_count();
    if n < 4 {
        return Err(QuartetError::TooFewLeaves { n });
    }
    let mut sorted = leaves;
    sorted.sort_unstable();
    for (i, &p) in sorted.iter().enumerate() {
        if p == 0 || p > n {
            return Err(QuartetError::LeafOutOfRange { index: p, n });
        }
        if i > 0 && sorted[i - 1] == p {
            return Err(QuartetError::DuplicateLeaf { index: p });
        }
    }
    let lca = Lca::new(t);
    let id = |p: usize| t.leaf_order()[p - 1];
    let d = |x: usize, y: usize| lca.distance(id(x), id(y));
    let [a, b, c, e] = sorted;
    let shape = shape_from_sums(d(a, b) + d(c, e), d(a, c) + d(b, e), d(a, e) + d(b, c));
    Ok(QuartetTopology { leaves: sorted, shape })
}

/// Pairwise leaf path lengths under a universal leaf numbering.
struct LeafDistances {
    n: usize,
    d: Vec<u32>,
}

impl LeafDistances {
    fn new(t: &Tree, index: &[usize]) -> Self {
        let n = t.leaf_count();
        let lca = Lca::new(t);
        let mut d = vec![0u32; n * n];
        let leaves = t.leaf_order();
        for p in 0..n {
            for q in p + 1..n {
                let dist = lca.distance(leaves[p], leaves[q]) as u32;
                let (i, j) = (index[p], index[q]);
                d[i * n + j] = dist;
                d[j * n + i] = dist;
            }
        }
        LeafDistances { n, d }
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> usize {
        self.d[i * self.n + j] as usize
    }

    #[inline]
    fn shape(&self, a: usize, b: usize, c: usize, d: usize) -> QuartetShape {
        shape_from_sums(
            self.get(a, b) + self.get(c, d),
            self.get(a, c) + self.get(b, d),
            self.get(a, d) + self.get(b, c),
        )
    }
}

/// Exact quartet agreement counts from full enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BruteForceCounts {
    pub total: u64,
    pub butterflies_a: u64,
    pub butterflies_b: u64,
    /// Same butterfly in both trees.
    pub shared_butterflies: u64,
    /// Star in both trees.
    pub shared_stars: u64,
    /// Butterfly in both trees with different pairings.
    pub different_butterflies: u64,
}

impl BruteForceCounts {
    /// `1 − (|S∩S'| + |B∩B'|) / C(n,4)`
    pub fn qd(&self) -> f64 {
        self.disagreements() as f64 / self.total as f64
    }

    /// Quartets resolved differently by the two trees: `C(n,4) − |S∩S'| − |B∩B'|`.
    pub fn disagreements(&self) -> u64 {
        self.total - self.shared_stars - self.shared_butterflies
    }
}

fn aligned_pair(t1: &Tree, t2: &Tree) -> Result<LeafAlignment, QuartetError> {
    let al = align_leaves(t1, t2)?;
    if al.n < 4 {
        return Err(QuartetError::TooFewLeaves { n: al.n });
    }
    Ok(al)
}

pub fn quartet_counts_bruteforce(t1: &Tree, t2: &Tree) -> Result<BruteForceCounts, QuartetError> {
    let al = aligned_pair(t1, t2)?;
    let (d1, d2) = (LeafDistances::new(t1, &al.first), LeafDistances::new(t2, &al.second));
    let n = al.n;
    let mut out = BruteForceCounts {
        total: choose4(n),
        butterflies_a: 0,
        butterflies_b: 0,
        shared_butterflies: 0,
        shared_stars: 0,
        different_butterflies: 0,
    };
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let s1 = d1.shape(a, b, c, d);
                    let s2 = d2.shape(a, b, c, d);
                    let (b1, b2) = (s1.is_butterfly(), s2.is_butterfly());
                    out.butterflies_a += b1 as u64;
                    out.butterflies_b += b2 as u64;
                    match (b1, b2) {
                        (false, false) => out.shared_stars += 1,
                        (true, true) if s1 == s2 => out.shared_butterflies += 1,
                        (true, true) => out.different_butterflies += 1,
                        _ => {}
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Quartet distance by explicit enumeration of all 4-leaf subsets.
pub fn qd_bruteforce(t1: &Tree, t2: &Tree) -> Result<f64, QuartetError> {
    Ok(quartet_counts_bruteforce(t1, t2)?.qd())
}

/// A subtree hanging off a node in the unrooted view: one of its children,
/// or everything outside the node's own clade.
#[derive(Clone, Copy)]
enum Side {
    Child(NodeId),
    Outside(NodeId),
}

/// Nodes of degree ≥ 3 in the unrooted view and their incident subtrees.
struct ClaimNodes {
    nodes: Vec<(NodeId, Vec<Side>)>,
    clade_size: Vec<usize>,
}

impl ClaimNodes {
    fn new(t: &Tree, index: &[usize], n: usize) -> (Self, Vec<crate::bitset::LeafSet>) {
        let clades = t.clades(index, n);
        let clade_size = clades.iter().map(|c| c.len()).collect();
        let nodes = t
            .internal_nodes()
            .filter_map(|v| {
                let mut sides: Vec<Side> = t.node(v).children.iter().map(|&c| Side::Child(c)).collect();
                if v != t.root() {
                    sides.push(Side::Outside(v));
                }
                (sides.len() >= 3).then_some((v, sides))
            })
            .collect();
        (ClaimNodes { nodes, clade_size }, clades)
    }

    fn census_claims(&self, n: usize) -> i64 {
        let mut claims = 0;
        for (_, sides) in &self.nodes {
            let sizes: Vec<i64> = sides
                .iter()
                .map(|s| match *s {
                    Side::Child(c) => self.clade_size[c] as i64,
                    Side::Outside(v) => (n - self.clade_size[v]) as i64,
                })
                .collect();
            let sum: i64 = sizes.iter().sum();
            let sq: i64 = sizes.iter().map(|s| s * s).sum();
            for &s in &sizes {
                let rest = sum - s;
                let rest_sq = sq - s * s;
                claims += choose2(s) * (rest * rest - rest_sq) / 2;
            }
        }
        claims
    }
}

/// Quartet agreement counts between two trees over a shared leaf set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuartetComparison {
    pub n: usize,
    pub total: u64,
    pub butterflies_a: u64,
    pub butterflies_b: u64,
    pub shared_butterflies: u64,
    pub different_butterflies: u64,
}

impl QuartetComparison {
    /// Stars in both trees, by complement counting.
    pub fn shared_stars(&self) -> u64 {
        self.total + self.shared_butterflies + self.different_butterflies - self.butterflies_a - self.butterflies_b
    }

    /// `B + B' − 2|B∩B'| − DB`, the numerator of the reformulated QD.
    pub fn qd_numerator(&self) -> u64 {
        self.butterflies_a + self.butterflies_b - 2 * self.shared_butterflies - self.different_butterflies
    }

    pub fn qd(&self) -> f64 {
        self.qd_numerator() as f64 / self.total as f64
    }

    /// `DB / B(second tree)`, zero when the second tree has no butterflies.
    pub fn gqd_against_second(&self) -> f64 {
        if self.butterflies_b == 0 {
            0.0
        } else {
            self.different_butterflies as f64 / self.butterflies_b as f64
        }
    }
}

pub fn compare_quartets(t1: &Tree, t2: &Tree) -> Result<QuartetComparison, QuartetError> {
    let al = aligned_pair(t1, t2)?;
    let n = al.n;
    let (v1, clades1) = ClaimNodes::new(t1, &al.first, n);
    let (v2, clades2) = ClaimNodes::new(t2, &al.second, n);

    let n2 = clades2.len();
    let inter: Vec<i64> = clades1
        .iter()
        .flat_map(|a| clades2.iter().map(move |b| a.intersection_len(b) as i64))
        .collect();
    let meet = |x: Side, y: Side| -> i64 {
        match (x, y) {
            (Side::Child(a), Side::Child(b)) => inter[a * n2 + b],
            (Side::Child(a), Side::Outside(w)) => v1.clade_size[a] as i64 - inter[a * n2 + w],
            (Side::Outside(u), Side::Child(b)) => v2.clade_size[b] as i64 - inter[u * n2 + b],
            (Side::Outside(u), Side::Outside(w)) => {
                n as i64 - v1.clade_size[u] as i64 - v2.clade_size[w] as i64 + inter[u * n2 + w]
            }
        }
    };

    // Ordered-tuple tallies; see module docs. Each shared butterfly is hit
    // 8 times, each different butterfly 4 times.
    let mut same_tuples: i64 = 0;
    let mut diff_tuples: i64 = 0;
    let mut m = Vec::new();
    let mut row_sum = Vec::new();
    let mut col_sum = Vec::new();
    for (_, sides1) in &v1.nodes {
        for (_, sides2) in &v2.nodes {
            let (rows, cols) = (sides1.len(), sides2.len());
            m.clear();
            for &x in sides1 {
                for &y in sides2 {
                    m.push(meet(x, y));
                }
            }
            let at = |r: usize, c: usize| m[r * cols + c];
            for jr in 0..rows {
                for jc in 0..cols {
                    let joint = at(jr, jc);
                    if joint == 0 {
                        continue;
                    }
                    // Restrict to rows != jr and cols != jc.
                    row_sum.clear();
                    row_sum.resize(rows, 0i64);
                    col_sum.clear();
                    col_sum.resize(cols, 0i64);
                    let mut total = 0i64;
                    let mut squares = 0i64;
                    for r in (0..rows).filter(|&r| r != jr) {
                        for c in (0..cols).filter(|&c| c != jc) {
                            let x = at(r, c);
                            total += x;
                            squares += x * x;
                            row_sum[r] += x;
                            col_sum[c] += x;
                        }
                    }
                    if joint >= 2 {
                        let rs: i64 = row_sum.iter().map(|x| x * x).sum();
                        let cs: i64 = col_sum.iter().map(|x| x * x).sum();
                        same_tuples += joint * (joint - 1) * (total * total - rs - cs + squares);
                    }
                    // y ranges over column jc outside row jr; z over row jr outside column jc.
                    let col_rest: i64 = (0..rows).filter(|&r| r != jr).map(|r| at(r, jc)).sum();
                    let row_rest: i64 = (0..cols).filter(|&c| c != jc).map(|c| at(jr, c)).sum();
                    let mut acc = 0i64;
                    for r in (0..rows).filter(|&r| r != jr) {
                        let ys = col_rest - at(r, jc);
                        if ys == 0 {
                            continue;
                        }
                        for c in (0..cols).filter(|&c| c != jc) {
                            let x = at(r, c);
                            if x != 0 {
                                acc += x * ys * (row_rest - at(jr, c));
                            }
                        }
                    }
                    diff_tuples += joint * acc;
                }
            }
        }
    }
    debug_assert!(same_tuples % 8 == 0 && diff_tuples % 4 == 0);

    Ok(QuartetComparison {
        n,
        total: choose4(n),
        butterflies_a: (v1.census_claims(n) / 2) as u64,
        butterflies_b: (v2.census_claims(n) / 2) as u64,
        shared_butterflies: (same_tuples / 8) as u64,
        different_butterflies: (diff_tuples / 4) as u64,
    })
}

pub fn quartet_census(t: &Tree) -> Result<QuartetCensus, QuartetError> {
    let n = t.leaf_count();
    if n < 4 {
        return Err(QuartetError::TooFewLeaves { n });
    }
    let index: Vec<usize> = (0..n).collect();
    let (nodes, _) = ClaimNodes::new(t, &index, n);
    let butterflies = (nodes.census_claims(n) / 2) as u64;
    let total = choose4(n);
    Ok(QuartetCensus {
        butterflies,
        stars: total - butterflies,
        total,
    })
}

/// Quartet distance, `(B + B' − 2|B∩B'| − DB) / C(n,4)`.
pub fn qd(t1: &Tree, t2: &Tree) -> Result<f64, QuartetError> {
    Ok(compare_quartets(t1, t2)?.qd())
}

pub fn different_butterflies(t1: &Tree, t2: &Tree) -> Result<u64, QuartetError> {
    Ok(compare_quartets(t1, t2)?.different_butterflies)
}

/// Generalized quartet distance `DB(test, gold) / B(gold)`; stars in the gold
/// tree cannot be contradicted. Zero when the gold tree has no butterflies.
pub fn gqd(test: &Tree, gold: &Tree) -> Result<f64, QuartetError> {
    Ok(compare_quartets(test, gold)?.gqd_against_second())
}

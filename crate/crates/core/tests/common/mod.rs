//! Random tree generation and naive reference computations that work on a
//! plain nested structure, independent of the library's tree type.

#![allow(dead_code)]

use std::collections::BTreeSet;

use parsedist::{parse_newick, Tree};
use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Clone, Debug)]
pub enum Gen {
    Leaf(String),
    Node(Vec<Gen>),
}

impl Gen {
    pub fn newick(&self) -> String {
        fn walk(g: &Gen, out: &mut String) {
            match g {
                Gen::Leaf(name) => out.push_str(name),
                Gen::Node(kids) => {
                    out.push('(');
                    for (i, k) in kids.iter().enumerate() {
                        if i > 0 {
                            out.push(',');
                        }
                        walk(k, out);
                    }
                    out.push(')');
                }
            }
        }
        let mut s = String::new();
        walk(self, &mut s);
        s.push(';');
        s
    }

    pub fn tree(&self) -> Tree {
        parse_newick(&self.newick()).unwrap()
    }

    pub fn leaves(&self) -> Vec<String> {
        match self {
            Gen::Leaf(n) => vec![n.clone()],
            Gen::Node(kids) => kids.iter().flat_map(|k| k.leaves()).collect(),
        }
    }

    /// Leaf-name sets of every internal node except the root.
    pub fn clades(&self) -> BTreeSet<BTreeSet<String>> {
        fn walk(g: &Gen, is_root: bool, out: &mut BTreeSet<BTreeSet<String>>) -> BTreeSet<String> {
            match g {
                Gen::Leaf(n) => BTreeSet::from([n.clone()]),
                Gen::Node(kids) => {
                    let mut all = BTreeSet::new();
                    for k in kids {
                        all.extend(walk(k, false, out));
                    }
                    if !is_root {
                        out.insert(all.clone());
                    }
                    all
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(self, true, &mut out);
        out
    }

    pub fn internal_count(&self) -> usize {
        match self {
            Gen::Leaf(_) => 0,
            Gen::Node(kids) => 1 + kids.iter().map(Gen::internal_count).sum::<usize>(),
        }
    }
}

pub fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("w{i}")).collect()
}

/// Random m-ary tree over the given leaves: repeatedly merges 2..=4 random
/// subtrees, then collapses each non-root internal node with probability
/// `collapse`.
pub fn random_over<R: Rng>(rng: &mut R, leaves: &[String], collapse: f64) -> Gen {
    let mut pool: Vec<Gen> = leaves.iter().cloned().map(Gen::Leaf).collect();
    pool.shuffle(rng);
    while pool.len() > 1 {
        let k = rng.gen_range(2..=pool.len().min(4));
        let mut kids = Vec::with_capacity(k);
        for _ in 0..k {
            let i = rng.gen_range(0..pool.len());
            kids.push(pool.swap_remove(i));
        }
        pool.push(Gen::Node(kids));
    }
    let root = pool.pop().unwrap();
    let root = match root {
        Gen::Leaf(_) => Gen::Node(vec![root]),
        r => r,
    };
    collapse_random(rng, root, collapse)
}

pub fn random_tree<R: Rng>(rng: &mut R, n: usize) -> Gen {
    let collapse = rng.gen_range(0.0..0.6);
    random_over(rng, &names(n), collapse)
}

fn collapse_random<R: Rng>(rng: &mut R, g: Gen, p: f64) -> Gen {
    match g {
        Gen::Leaf(_) => g,
        Gen::Node(kids) => {
            let mut out = Vec::new();
            for k in kids {
                match collapse_random(rng, k, p) {
                    Gen::Node(grand) if rng.gen_bool(p) => out.extend(grand),
                    other => out.push(other),
                }
            }
            Gen::Node(out)
        }
    }
}

/// Randomly resolves polytomies by grouping two children.
fn resolve_random<R: Rng>(rng: &mut R, g: Gen, p: f64) -> Gen {
    match g {
        Gen::Leaf(_) => g,
        Gen::Node(kids) => {
            let mut kids: Vec<Gen> = kids.into_iter().map(|k| resolve_random(rng, k, p)).collect();
            if kids.len() > 2 && rng.gen_bool(p) {
                let i = rng.gen_range(0..kids.len());
                let a = kids.remove(i);
                let j = rng.gen_range(0..kids.len());
                let b = kids.remove(j);
                kids.push(Gen::Node(vec![a, b]));
            }
            kids.shuffle(rng);
            Gen::Node(kids)
        }
    }
}

/// A second tree over the same leaves: independent, or a perturbation of
/// `first` so that the pair shares some structure.
pub fn partner<R: Rng>(rng: &mut R, first: &Gen) -> Gen {
    let leaves = first.leaves();
    match rng.gen_range(0..3) {
        0 => {
            let collapse = rng.gen_range(0.0..0.6);
            random_over(rng, &leaves, collapse)
        }
        _ => {
            let collapsed = collapse_random(rng, first.clone(), 0.3);
            resolve_random(rng, collapsed, 0.5)
        }
    }
}

pub fn random_pair<R: Rng>(rng: &mut R, n: usize) -> (Gen, Gen) {
    let a = random_tree(rng, n);
    let b = partner(rng, &a);
    (a, b)
}

/// Naive RF counts over clade-name sets: (shared, only_a, only_b).
pub fn naive_rf(a: &Gen, b: &Gen) -> (usize, usize, usize) {
    let (ca, cb) = (a.clades(), b.clades());
    let shared = ca.intersection(&cb).count();
    (shared, ca.len() - shared, cb.len() - shared)
}

/// Quartet resolution by clade membership: the unordered pair on one side
/// of a separating edge, or `None` for a star.
pub fn naive_quartet(clades: &BTreeSet<BTreeSet<String>>, q: [&String; 4]) -> Option<BTreeSet<String>> {
    for c in clades {
        let inside: Vec<&String> = q.iter().copied().filter(|x| c.contains(*x)).collect();
        if inside.len() == 2 {
            // orient so the pair containing q[0] is reported
            let pair: BTreeSet<String> = if inside.contains(&q[0]) {
                inside.into_iter().cloned().collect()
            } else {
                q.iter().copied().filter(|x| !c.contains(*x)).cloned().collect()
            };
            return Some(pair);
        }
    }
    None
}

#[derive(Debug, Default, PartialEq, Eq)]
pub struct NaiveQuartets {
    pub total: u64,
    pub butterflies_a: u64,
    pub butterflies_b: u64,
    pub shared_butterflies: u64,
    pub shared_stars: u64,
    pub different_butterflies: u64,
}

pub fn naive_quartets(a: &Gen, b: &Gen) -> NaiveQuartets {
    let leaves = a.leaves();
    let (ca, cb) = (a.clades(), b.clades());
    let n = leaves.len();
    let mut out = NaiveQuartets::default();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    let q = [&leaves[i], &leaves[j], &leaves[k], &leaves[l]];
                    let (x, y) = (naive_quartet(&ca, q), naive_quartet(&cb, q));
                    out.total += 1;
                    out.butterflies_a += x.is_some() as u64;
                    out.butterflies_b += y.is_some() as u64;
                    match (x, y) {
                        (None, None) => out.shared_stars += 1,
                        (Some(p), Some(r)) if p == r => out.shared_butterflies += 1,
                        (Some(_), Some(_)) => out.different_butterflies += 1,
                        _ => {}
                    }
                }
            }
        }
    }
    out
}

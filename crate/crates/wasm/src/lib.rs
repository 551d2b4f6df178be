//! Browser bindings for `parsedist`.
//!
//! Each exported function takes plain text and returns a JSON string, so the
//! page needs no generated type definitions. The `*_json` functions hold the
//! logic and are what the native tests call.

use parsedist::corpus::{column, correlation_matrix, parse_trees, read_scores_csv, Measure, TreeFormat};
use parsedist::{
    align_leaves, compare_quartets, grfd, rf_counts, serialize_newick, unlabeled_prf, PreprocessOptions, Tree,
};
use serde::Serialize;
use std::collections::BTreeSet;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct Converted {
    trees: Vec<String>,
    errors: Vec<String>,
}

/// Bracketed parses to unlabeled NEWICK, one entry per record.
pub fn convert_json(ptb: &str, leaf_suffix: bool) -> String {
    let mut out = Converted {
        trees: Vec::new(),
        errors: Vec::new(),
    };
    for tree in parse_trees(ptb, TreeFormat::Ptb, PreprocessOptions { leaf_suffix }) {
        match tree {
            Ok(t) => out.trees.push(serialize_newick(&t)),
            Err(e) => out.errors.push(e.to_string()),
        }
    }
    serde_json::to_string(&out).unwrap()
}

#[derive(Serialize)]
struct QuartetSummary {
    total: u64,
    butterflies_test: u64,
    butterflies_gold: u64,
    shared_butterflies: u64,
    shared_stars: u64,
    different_butterflies: u64,
}

#[derive(Serialize)]
struct LayoutNode {
    parent: Option<usize>,
    x: f64,
    depth: usize,
    label: Option<String>,
    /// For internal non-root nodes: whether the other tree has the same clade.
    matched: Option<bool>,
}

#[derive(Serialize)]
struct Comparison {
    n: usize,
    rfd: f64,
    grfd: f64,
    qd: Option<f64>,
    gqd: Option<f64>,
    precision: f64,
    recall: f64,
    f_score: f64,
    quartets: Option<QuartetSummary>,
    quartet_error: Option<String>,
    gold: Vec<LayoutNode>,
    test: Vec<LayoutNode>,
}

fn first_tree(text: &str, format: TreeFormat, what: &str) -> Result<Tree, String> {
    parse_trees(text, format, PreprocessOptions::default())
        .into_iter()
        .next()
        .ok_or_else(|| format!("{what}: no tree found"))?
        .map_err(|e| format!("{what}: {e}"))
}

/// Leaf sets (in the shared index) of every non-root internal node.
fn clades(t: &Tree, index: &[usize]) -> Vec<Option<Vec<usize>>> {
    let mut below: Vec<Vec<usize>> = vec![Vec::new(); t.node_count()];
    let mut out = vec![None; t.node_count()];
    for id in t.postorder() {
        let node = t.node(id);
        if let Some(leaf) = &node.leaf {
            below[id].push(index[leaf.position - 1]);
        } else {
            let mut set: Vec<usize> = node.children.iter().flat_map(|&c| below[c].iter().copied()).collect();
            set.sort_unstable();
            if id != t.root() {
                out[id] = Some(set.clone());
            }
            below[id] = set;
        }
    }
    out
}

fn layout(t: &Tree, own: &[Option<Vec<usize>>], other: &BTreeSet<Vec<usize>>) -> Vec<LayoutNode> {
    let parents = t.parents();
    let depths = t.depths();
    let mut x = vec![0.0; t.node_count()];
    for id in t.postorder() {
        let node = t.node(id);
        x[id] = match &node.leaf {
            Some(leaf) => (leaf.position - 1) as f64,
            None => node.children.iter().map(|&c| x[c]).sum::<f64>() / node.children.len() as f64,
        };
    }
    (0..t.node_count())
        .map(|id| LayoutNode {
            parent: parents[id],
            x: x[id],
            depth: depths[id],
            label: t.node(id).leaf.as_ref().map(|l| l.token.clone()),
            matched: own[id].as_ref().map(|c| other.contains(c)),
        })
        .collect()
}

/// Scores the first test tree against the first gold tree.
pub fn compare_json(gold: &str, test: &str, newick: bool) -> Result<String, String> {
    let format = if newick { TreeFormat::Newick } else { TreeFormat::Ptb };
    let gold = first_tree(gold, format, "gold")?;
    let test = first_tree(test, format, "test")?;
    let al = align_leaves(&gold, &test).map_err(|e| e.to_string())?;
    let rf = rf_counts(&test, &gold).map_err(|e| e.to_string())?;
    let prf = unlabeled_prf(&test, &gold, false).map_err(|e| e.to_string())?;
    let (quartets, quartet_error, qd, gqd) = match compare_quartets(&test, &gold) {
        Ok(q) => (
            Some(QuartetSummary {
                total: q.total,
                butterflies_test: q.butterflies_a,
                butterflies_gold: q.butterflies_b,
                shared_butterflies: q.shared_butterflies,
                shared_stars: q.shared_stars(),
                different_butterflies: q.different_butterflies,
            }),
            None,
            Some(q.qd()),
            Some(q.gqd_against_second()),
        ),
        Err(e) => (None, Some(e.to_string()), None, None),
    };
    let gold_clades = clades(&gold, &al.first);
    let test_clades = clades(&test, &al.second);
    let set = |cs: &[Option<Vec<usize>>]| cs.iter().flatten().cloned().collect::<BTreeSet<_>>();
    let out = Comparison {
        n: al.n,
        rfd: rf.normalized(),
        grfd: grfd(&test, &gold).map_err(|e| e.to_string())?,
        qd,
        gqd,
        precision: prf.precision,
        recall: prf.recall,
        f_score: prf.f_score,
        quartets,
        quartet_error,
        gold: layout(&gold, &gold_clades, &set(&test_clades)),
        test: layout(&test, &test_clades, &set(&gold_clades)),
    };
    Ok(serde_json::to_string(&out).unwrap())
}

#[derive(Serialize)]
struct Matrix {
    rows: usize,
    measures: Vec<String>,
    r: Vec<Vec<Option<f64>>>,
}

/// Correlation matrix over every measure column present in a scores CSV.
pub fn correlate_json(csv: &str) -> Result<String, String> {
    let records = read_scores_csv(csv.as_bytes()).map_err(|e| e.to_string())?;
    let measures: Vec<Measure> = Measure::ALL
        .into_iter()
        .filter(|&m| column(&records, m).is_some_and(|c| !c.is_empty()))
        .collect();
    let m = correlation_matrix(&records, &measures).map_err(|e| e.to_string())?;
    Ok(serde_json::to_string(&Matrix {
        rows: records.len(),
        measures: m.measures,
        r: m.r,
    })
    .unwrap())
}

#[wasm_bindgen]
pub fn convert(ptb: &str, leaf_suffix: bool) -> String {
    convert_json(ptb, leaf_suffix)
}

#[wasm_bindgen]
pub fn compare(gold: &str, test: &str, newick: bool) -> Result<String, JsError> {
    compare_json(gold, test, newick).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn correlate(csv: &str) -> Result<String, JsError> {
    correlate_json(csv).map_err(|e| JsError::new(&e))
}

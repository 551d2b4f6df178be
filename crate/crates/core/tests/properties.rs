mod common;

use common::{naive_quartets, naive_rf, random_pair, random_tree, Gen};
use parsedist::quartets::choose4;
use parsedist::{
    bipartitions, classify_quartet, compare_quartets, grfd, parse_newick, parse_ptb, pearson, preprocess,
    quartet_census, quartet_counts_bruteforce, rf_counts, rfd, serialize_newick, tree_stats, unlabeled_prf,
    unrooted_splits, PreprocessOptions, RfScale,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random bracketed parse with part-of-speech preterminals and unary chains.
fn random_ptb(rng: &mut ChaCha8Rng, words: usize) -> String {
    fn grow(rng: &mut ChaCha8Rng, words: &[String], out: &mut String) {
        let label = ["S", "NP", "VP", "PP", "X"][rng.gen_range(0..5)];
        out.push('(');
        out.push_str(label);
        out.push(' ');
        if words.len() == 1 {
            // preterminal, optionally under a unary chain
            let chain = rng.gen_range(0..2);
            out.push_str(&"(U ".repeat(chain));
            out.push_str(&format!("(POS {})", words[0]));
            out.push_str(&")".repeat(chain));
        } else {
            let parts = rng.gen_range(1..=words.len().min(4));
            let mut cuts: Vec<usize> = (1..words.len()).collect();
            cuts.shuffle(rng);
            let mut cuts: Vec<usize> = cuts.into_iter().take(parts - 1).collect();
            cuts.sort_unstable();
            let mut start = 0;
            for end in cuts.into_iter().chain([words.len()]) {
                grow(rng, &words[start..end], out);
                out.push(' ');
                start = end;
            }
        }
        out.push(')');
    }
    let words: Vec<String> = (0..words)
        .map(|i| ["the", "dog", "saw", "a"][i % 4].to_string())
        .collect();
    let mut out = String::new();
    grow(rng, &words, &mut out);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn newick_round_trip(seed in any::<u64>(), n in 1usize..40) {
        let g = random_tree(&mut rng(seed), n);
        let t = g.tree();
        let text = serialize_newick(&t);
        prop_assert_eq!(&text, &g.newick());
        prop_assert_eq!(parse_newick(&text).unwrap(), t);
    }

    #[test]
    fn stats_identities(seed in any::<u64>(), n in 2usize..40) {
        let g = random_tree(&mut rng(seed), n);
        let s = tree_stats(&g.tree());
        prop_assert_eq!(s.n, n);
        prop_assert_eq!(s.num_internal, g.internal_count());
        prop_assert_eq!(s.num_edges, s.num_internal + s.n - 1);
        prop_assert_eq!(s.num_internal_edges, s.num_internal - 1);
    }

    #[test]
    fn positions_are_one_to_n(seed in any::<u64>(), n in 1usize..40) {
        let t = random_tree(&mut rng(seed), n).tree();
        let mut pos: Vec<usize> = t.leaf_order().iter().map(|&id| t.node(id).leaf.as_ref().unwrap().position).collect();
        pos.sort_unstable();
        prop_assert_eq!(pos, (1..=n).collect::<Vec<_>>());
    }

    #[test]
    fn preprocess_removes_unary(seed in any::<u64>(), words in 2usize..25) {
        let mut r = rng(seed);
        let text = random_ptb(&mut r, words);
        let t = parse_ptb(&text).unwrap();
        let out = preprocess(&t, PreprocessOptions::default()).unwrap();
        prop_assert!(!out.has_unary_nodes());
        prop_assert_eq!(out.leaf_count(), words);
        for (i, tok) in out.leaf_tokens().enumerate() {
            let suffix = format!("_{}", i + 1);
            prop_assert!(tok.ends_with(&suffix));
        }
        let again = preprocess(&out, PreprocessOptions { leaf_suffix: false }).unwrap();
        prop_assert_eq!(again, out);
    }

    #[test]
    fn rf_matches_naive_and_is_symmetric(seed in any::<u64>(), n in 2usize..30) {
        let (a, b) = random_pair(&mut rng(seed), n);
        let (ta, tb) = (a.tree(), b.tree());
        let c = rf_counts(&ta, &tb).unwrap();
        prop_assert_eq!((c.shared, c.only_a, c.only_b), naive_rf(&a, &b));
        for scale in [RfScale::Normalized, RfScale::Count] {
            prop_assert_eq!(rfd(&ta, &tb, scale).unwrap(), rfd(&tb, &ta, scale).unwrap());
        }
        let (ea, eb) = (c.splits_a() as i64, c.splits_b() as i64);
        let d = c.distance() as i64;
        prop_assert!((ea - eb).abs() <= d && d <= ea + eb);
        let norm = rfd(&ta, &tb, RfScale::Normalized).unwrap();
        prop_assert!((0.0..=1.0).contains(&norm));
    }

    #[test]
    fn rf_triangle(seed in any::<u64>(), n in 2usize..25) {
        let mut r = rng(seed);
        let a = random_tree(&mut r, n);
        let b = common::partner(&mut r, &a);
        let c = common::partner(&mut r, &b);
        let (ta, tb, tc) = (a.tree(), b.tree(), c.tree());
        let d = |x, y| rfd(x, y, RfScale::Count).unwrap();
        prop_assert!(d(&ta, &tc) <= d(&ta, &tb) + d(&tb, &tc));
        prop_assert_eq!(d(&ta, &ta), 0.0);
        prop_assert_eq!(d(&ta, &tb) == 0.0, a.clades() == b.clades());
    }

    #[test]
    fn bipartition_bounds(seed in any::<u64>(), n in 4usize..40) {
        let t = random_tree(&mut rng(seed), n).tree();
        prop_assert!(bipartitions(&t).len() <= n - 2);
        prop_assert!(unrooted_splits(&t).len() <= n - 3);
        for b in unrooted_splits(&t) {
            let k = b.side().len();
            prop_assert!(k >= 2 && k <= n - 2);
            prop_assert!(!b.side().contains(0));
        }
    }

    #[test]
    fn grfd_bounds(seed in any::<u64>(), n in 2usize..30) {
        let (a, b) = random_pair(&mut rng(seed), n);
        let (ta, tb) = (a.tree(), b.tree());
        let g = grfd(&ta, &tb).unwrap();
        prop_assert!((0.0..=1.0).contains(&g));
        prop_assert_eq!(grfd(&ta, &ta).unwrap(), 0.0);
        let c = rf_counts(&ta, &tb).unwrap();
        if c.splits_a() > 0 {
            prop_assert!(g <= c.only_a as f64 / c.splits_a() as f64);
        }
    }

    #[test]
    fn rfd_is_one_minus_f(seed in any::<u64>(), n in 2usize..30) {
        let (a, b) = random_pair(&mut rng(seed), n);
        let (ta, tb) = (a.tree(), b.tree());
        let r = rfd(&ta, &tb, RfScale::Normalized).unwrap();
        let prf = unlabeled_prf(&ta, &tb, false).unwrap();
        prop_assert!((r - (1.0 - prf.f_score)).abs() < 1e-12);
    }

    #[test]
    fn prf_swaps(seed in any::<u64>(), n in 2usize..30, root in any::<bool>()) {
        let (a, b) = random_pair(&mut rng(seed), n);
        let (ta, tb) = (a.tree(), b.tree());
        let ab = unlabeled_prf(&ta, &tb, root).unwrap();
        let ba = unlabeled_prf(&tb, &ta, root).unwrap();
        prop_assert_eq!(ab.precision, ba.recall);
        prop_assert_eq!(ab.recall, ba.precision);
        if ab.precision + ab.recall > 0.0 {
            let h = 2.0 * ab.precision * ab.recall / (ab.precision + ab.recall);
            prop_assert!((ab.f_score - h).abs() < 1e-15);
        }
        for v in [ab.precision, ab.recall, ab.f_score] {
            prop_assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn recall_monotone_when_adding_gold_bracket(seed in any::<u64>(), n in 4usize..25) {
        let mut r = rng(seed);
        let gold = random_tree(&mut r, n);
        // Test tree: a star plus one gold clade, then the same with a second gold clade.
        let clades: Vec<_> = gold.clades().into_iter().collect();
        prop_assume!(clades.len() >= 2);
        let leaves = gold.leaves();
        let build = |picked: &[&std::collections::BTreeSet<String>]| -> Option<Gen> {
            // only nested or disjoint clades form a tree
            let mut nodes: Vec<Gen> = Vec::new();
            let mut used = std::collections::BTreeSet::new();
            let mut sorted: Vec<_> = picked.to_vec();
            sorted.sort_by_key(|c| c.len());
            let mut groups: Vec<(std::collections::BTreeSet<String>, Gen)> = Vec::new();
            for c in sorted {
                let mut kids = Vec::new();
                let mut covered = std::collections::BTreeSet::new();
                let mut rest = Vec::new();
                for (set, g) in groups.drain(..) {
                    if set.is_subset(c) { covered.extend(set.iter().cloned()); kids.push(g); } else { rest.push((set, g)); }
                }
                groups = rest;
                for l in c { if !covered.contains(l) { kids.push(Gen::Leaf(l.clone())); } }
                groups.push((c.clone(), Gen::Node(kids)));
            }
            for (set, g) in groups { used.extend(set); nodes.push(g); }
            for l in &leaves { if !used.contains(l) { nodes.push(Gen::Leaf(l.clone())); } }
            Some(Gen::Node(nodes))
        };
        let one = build(&[&clades[0]]).unwrap();
        let two = build(&[&clades[0], &clades[1]]).unwrap();
        let g = gold.tree();
        let r1 = unlabeled_prf(&one.tree(), &g, false).unwrap().recall;
        let r2 = unlabeled_prf(&two.tree(), &g, false).unwrap().recall;
        prop_assert!(r2 >= r1);
    }

    #[test]
    fn pearson_affine(xs in prop::collection::vec(-100.0f64..100.0, 2..40), a in 0.1f64..10.0, b in -50.0f64..50.0, neg in any::<bool>()) {
        prop_assume!(xs.iter().any(|&x| (x - xs[0]).abs() > 1e-6));
        let scale = if neg { -a } else { a };
        let ys: Vec<f64> = xs.iter().map(|x| scale * x + b).collect();
        prop_assert!((pearson(&xs, &xs).unwrap() - 1.0).abs() < 1e-12);
        prop_assert!((pearson(&xs, &ys).unwrap() - scale.signum()).abs() < 1e-9);
    }

    #[test]
    fn pearson_symmetric_and_scale_invariant(
        pairs in prop::collection::vec((-100.0f64..100.0, -100.0f64..100.0), 3..40),
        a in 0.1f64..10.0, b in -50.0f64..50.0,
    ) {
        let xs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        if let Ok(r) = pearson(&xs, &ys) {
            prop_assert!((-1.0..=1.0).contains(&r));
            prop_assert!((pearson(&ys, &xs).unwrap() - r).abs() < 1e-12);
            let xs2: Vec<f64> = xs.iter().map(|x| a * x + b).collect();
            prop_assert!((pearson(&xs2, &ys).unwrap() - r).abs() < 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn quartets_match_naive(seed in any::<u64>(), n in 4usize..14) {
        let (a, b) = random_pair(&mut rng(seed), n);
        let (ta, tb) = (a.tree(), b.tree());
        let naive = naive_quartets(&a, &b);
        let bf = quartet_counts_bruteforce(&ta, &tb).unwrap();
        prop_assert_eq!(
            (bf.total, bf.butterflies_a, bf.butterflies_b, bf.shared_butterflies, bf.shared_stars, bf.different_butterflies),
            (naive.total, naive.butterflies_a, naive.butterflies_b, naive.shared_butterflies, naive.shared_stars, naive.different_butterflies)
        );
        let fast = compare_quartets(&ta, &tb).unwrap();
        prop_assert_eq!(fast.butterflies_a, bf.butterflies_a);
        prop_assert_eq!(fast.butterflies_b, bf.butterflies_b);
        prop_assert_eq!(fast.shared_butterflies, bf.shared_butterflies);
        prop_assert_eq!(fast.different_butterflies, bf.different_butterflies);
        prop_assert_eq!(fast.shared_stars(), bf.shared_stars);
        prop_assert!(fast.different_butterflies <= fast.butterflies_a.min(fast.butterflies_b));
    }

    #[test]
    fn quartet_invariants(seed in any::<u64>(), n in 4usize..25) {
        let (a, b) = random_pair(&mut rng(seed), n);
        let (ta, tb) = (a.tree(), b.tree());
        let census = quartet_census(&ta).unwrap();
        prop_assert_eq!(census.butterflies + census.stars, choose4(n));
        let ab = compare_quartets(&ta, &tb).unwrap();
        let ba = compare_quartets(&tb, &ta).unwrap();
        prop_assert_eq!(ab.qd_numerator(), ba.qd_numerator());
        prop_assert!((0.0..=1.0).contains(&ab.qd()));
        prop_assert!((0.0..=1.0).contains(&ab.gqd_against_second()));
        prop_assert_eq!(compare_quartets(&ta, &ta).unwrap().gqd_against_second(), 0.0);
        prop_assert_eq!(compare_quartets(&ta, &ta).unwrap().shared_butterflies, census.butterflies);
    }

    #[test]
    fn classification_is_total(seed in any::<u64>(), n in 4usize..12) {
        let t = random_tree(&mut rng(seed), n).tree();
        let mut butterflies = 0;
        for a in 1..=n { for b in a+1..=n { for c in b+1..=n { for d in c+1..=n {
            let q = classify_quartet(&t, [d, b, a, c]).unwrap();
            prop_assert_eq!(q.leaves, [a, b, c, d]);
            butterflies += q.shape.is_butterfly() as u64;
        }}}}
        prop_assert_eq!(butterflies, quartet_census(&t).unwrap().butterflies);
    }
}

//! Phylogenetic tree distances for evaluating constituency parses.
//!
//! Gold and test parses are reduced to unlabeled trees over the sentence's
//! words and compared with the Robinson-Foulds distance (RFD), its
//! generalized compatibility variant (GRFD), the quartet distance (QD), the
//! generalized quartet distance (GQD), and unlabeled bracket
//! precision/recall/F. Corpus-level scores can be correlated measure by
//! measure.
//!
//! ```
//! use parsedist::{parse_newick, rfd, qd, unlabeled_prf, RfScale};
//!
//! let gold = parse_newick("((a,b),(c,d),e);").unwrap();
//! let test = parse_newick("((a,b),c,d,e);").unwrap();
//! let r = rfd(&test, &gold, RfScale::Normalized).unwrap();
//! let f = unlabeled_prf(&test, &gold, false).unwrap().f_score;
//! assert!((r - (1.0 - f)).abs() < 1e-12);
//! assert!((qd(&test, &gold).unwrap() - 0.4).abs() < 1e-12);
//! ```

pub mod bitset;
pub mod cli;
pub mod corpus;
pub mod evalb;
pub mod lca;
pub mod newick;
pub mod preprocess;
pub mod ptb;
pub mod quartets;
pub mod splits;
pub mod stats;
pub mod tree;

pub use corpus::{
    correlation_matrix, evaluate_corpus, evaluate_pairs, read_corpus, CorpusError, CorpusRecord, EvalOptions, Measure,
    MeasureSet, RecordError, ScoreRecord, ScoreTable, TreeFormat, TreePair,
};
pub use evalb::{spans, unlabeled_prf, Prf, Span};
pub use newick::{parse_newick, serialize_newick, NewickError};
pub use preprocess::{preprocess, PreprocessError, PreprocessOptions};
pub use ptb::{parse_ptb, parse_ptb_stream, PtbError};
pub use quartets::{
    classify_quartet, compare_quartets, different_butterflies, gqd, qd, qd_bruteforce, quartet_census,
    quartet_counts_bruteforce, QuartetCensus, QuartetComparison, QuartetError, QuartetShape, QuartetTopology,
};
pub use splits::{
    bipartitions, grfd, is_compatible, rf_counts, rfd, unrooted_splits, Bipartition, RfScale, SplitCounts,
};
pub use stats::{pearson, CorrelationMatrix, PearsonError};
pub use tree::{align_leaves, tree_stats, Tree, TreeStats, UniverseError};

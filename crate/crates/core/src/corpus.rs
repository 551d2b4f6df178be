//! Parallel gold/test corpora: reading, per-sentence scoring and score
//! tables.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::evalb::unlabeled_prf;
use crate::newick::{parse_newick, NewickError};
use crate::preprocess::{preprocess, PreprocessError, PreprocessOptions};
use crate::ptb::{parse_ptb_stream, PtbError};
use crate::quartets::{compare_quartets, QuartetError};
use crate::splits::{grfd, rf_counts};
use crate::stats::{CorrelationError, CorrelationMatrix};
use crate::tree::{align_leaves, Tree, UniverseError};

/// Sentences shorter than this are skipped; quartets need four leaves.
pub const MIN_SENTENCE_LENGTH: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum TreeFormat {
    /// Bracketed Penn Treebank s-expressions, possibly multi-line.
    Ptb,
    /// One NEWICK tree per line.
    Newick,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecordError {
    #[error("record {record}: {source}")]
    Newick { record: usize, source: NewickError },
    #[error("record {record}: {source}")]
    Ptb { record: usize, source: PtbError },
    #[error("record {record}: {source}")]
    Preprocess { record: usize, source: PreprocessError },
    #[error("record {record}: {source}")]
    Universe { record: usize, source: UniverseError },
    #[error("record {record}: {source}")]
    Quartet { record: usize, source: QuartetError },
}

impl RecordError {
    pub fn record(&self) -> usize {
        match *self {
            RecordError::Newick { record, .. }
            | RecordError::Ptb { record, .. }
            | RecordError::Preprocess { record, .. }
            | RecordError::Universe { record, .. }
            | RecordError::Quartet { record, .. } => record,
        }
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("record counts differ: gold has {gold}, test has {test}")]
    RecordCount { gold: usize, test: usize },
}

#[derive(Clone, Debug)]
pub struct TreePair {
    pub gold: Tree,
    pub test: Tree,
}

impl TreePair {
    pub fn new(gold: Tree, test: Tree) -> Self {
        TreePair { gold, test }
    }
}

pub type CorpusRecord = Result<TreePair, RecordError>;

/// Parses every tree in `text` and applies preprocessing. Records are
/// numbered from 1. For NEWICK, blank lines are skipped and leaf names are
/// kept as written.
pub fn parse_trees(text: &str, format: TreeFormat, opts: PreprocessOptions) -> Vec<Result<Tree, RecordError>> {
    let finish = |record: usize, raw: Tree, opts: PreprocessOptions| {
        preprocess(&raw, opts).map_err(|source| RecordError::Preprocess { record, source })
    };
    match format {
        TreeFormat::Newick => text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .enumerate()
            .map(|(i, line)| {
                let record = i + 1;
                let raw = parse_newick(line).map_err(|source| RecordError::Newick { record, source })?;
                finish(record, raw, PreprocessOptions { leaf_suffix: false })
            })
            .collect(),
        TreeFormat::Ptb => parse_ptb_stream(text)
            .into_iter()
            .enumerate()
            .map(|(i, parsed)| {
                let record = i + 1;
                let raw = parsed.map_err(|source| RecordError::Ptb { record, source })?;
                finish(record, raw, opts)
            })
            .collect(),
    }
}

/// Zips gold and test trees into pairs, checking record counts and leaf
/// universes.
pub fn pair_records(
    gold: Vec<Result<Tree, RecordError>>,
    test: Vec<Result<Tree, RecordError>>,
) -> Result<Vec<CorpusRecord>, CorpusError> {
    if gold.len() != test.len() {
        return Err(CorpusError::RecordCount {
            gold: gold.len(),
            test: test.len(),
        });
    }
    Ok(gold
        .into_iter()
        .zip(test)
        .enumerate()
        .map(|(i, (g, t))| {
            let (gold, test) = (g?, t?);
            align_leaves(&gold, &test).map_err(|source| RecordError::Universe { record: i + 1, source })?;
            Ok(TreePair { gold, test })
        })
        .collect())
}

fn read_text(path: &Path) -> Result<String, CorpusError> {
    fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_corpus(
    gold_path: &Path,
    test_path: &Path,
    format: TreeFormat,
    opts: PreprocessOptions,
) -> Result<Vec<CorpusRecord>, CorpusError> {
    let gold = parse_trees(&read_text(gold_path)?, format, opts);
    let test = parse_trees(&read_text(test_path)?, format, opts);
    pair_records(gold, test)
}

/// A score-table column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Measure {
    Rfd,
    Grfd,
    Qd,
    Gqd,
    Precision,
    Recall,
    FScore,
}

impl Measure {
    pub const ALL: [Measure; 7] = [
        Measure::Rfd,
        Measure::Grfd,
        Measure::Qd,
        Measure::Gqd,
        Measure::Precision,
        Measure::Recall,
        Measure::FScore,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Rfd => "rfd",
            Measure::Grfd => "grfd",
            Measure::Qd => "qd",
            Measure::Gqd => "gqd",
            Measure::Precision => "precision",
            Measure::Recall => "recall",
            Measure::FScore => "f_score",
        }
    }
}

impl FromStr for Measure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Measure::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown measure {s:?}"))
    }
}

/// Which measures to compute. `evalb` covers precision, recall and F.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MeasureSet {
    pub rfd: bool,
    pub grfd: bool,
    pub qd: bool,
    pub gqd: bool,
    pub evalb: bool,
}

impl MeasureSet {
    pub const ALL: MeasureSet = MeasureSet {
        rfd: true,
        grfd: true,
        qd: true,
        gqd: true,
        evalb: true,
    };

    /// Parses a comma-separated list of `rfd`, `grfd`, `qd`, `gqd`, `evalb`.
    pub fn parse_list(s: &str) -> Result<Self, String> {
        let mut set = MeasureSet {
            rfd: false,
            grfd: false,
            qd: false,
            gqd: false,
            evalb: false,
        };
        for name in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            match name {
                "rfd" => set.rfd = true,
                "grfd" => set.grfd = true,
                "qd" => set.qd = true,
                "gqd" => set.gqd = true,
                "evalb" => set.evalb = true,
                other => {
                    return Err(format!(
                        "unknown measure {other:?} (expected rfd, grfd, qd, gqd, evalb)"
                    ))
                }
            }
        }
        if set.columns().is_empty() {
            return Err("no measures selected".into());
        }
        Ok(set)
    }

    pub fn columns(&self) -> Vec<Measure> {
        let mut out = Vec::new();
        if self.rfd {
            out.push(Measure::Rfd);
        }
        if self.grfd {
            out.push(Measure::Grfd);
        }
        if self.qd {
            out.push(Measure::Qd);
        }
        if self.gqd {
            out.push(Measure::Gqd);
        }
        if self.evalb {
            out.extend([Measure::Precision, Measure::Recall, Measure::FScore]);
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalOptions {
    pub measures: MeasureSet,
    /// Count the whole-sentence bracket in precision/recall.
    pub include_root: bool,
    /// Worker threads; `None` uses rayon's global pool.
    pub jobs: Option<usize>,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            measures: MeasureSet::ALL,
            include_root: false,
            jobs: None,
        }
    }
}

/// Scores for one sentence. Measures that were not requested are `None`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoreRecord {
    pub sentence_id: usize,
    pub n: usize,
    #[serde(default)]
    pub rfd: Option<f64>,
    #[serde(default)]
    pub grfd: Option<f64>,
    #[serde(default)]
    pub qd: Option<f64>,
    #[serde(default)]
    pub gqd: Option<f64>,
    #[serde(default)]
    pub precision: Option<f64>,
    #[serde(default)]
    pub recall: Option<f64>,
    #[serde(default)]
    pub f_score: Option<f64>,
}

impl ScoreRecord {
    pub fn get(&self, m: Measure) -> Option<f64> {
        match m {
            Measure::Rfd => self.rfd,
            Measure::Grfd => self.grfd,
            Measure::Qd => self.qd,
            Measure::Gqd => self.gqd,
            Measure::Precision => self.precision,
            Measure::Recall => self.recall,
            Measure::FScore => self.f_score,
        }
    }
}

/// Scores one pair; `Ok(None)` when the sentence is too short.
pub fn score_pair(sentence_id: usize, pair: &TreePair, opts: &EvalOptions) -> Result<Option<ScoreRecord>, RecordError> {
    let record = sentence_id;
    let (gold, test) = (&pair.gold, &pair.test);
    align_leaves(gold, test).map_err(|source| RecordError::Universe { record, source })?;
    let n = gold.leaf_count();
    if n < MIN_SENTENCE_LENGTH {
        return Ok(None);
    }
    let m = opts.measures;
    let mut out = ScoreRecord {
        sentence_id,
        n,
        rfd: None,
        grfd: None,
        qd: None,
        gqd: None,
        precision: None,
        recall: None,
        f_score: None,
    };
    let universe = |source| RecordError::Universe { record, source };
    if m.rfd {
        out.rfd = Some(rf_counts(test, gold).map_err(universe)?.normalized());
    }
    if m.grfd {
        out.grfd = Some(grfd(test, gold).map_err(universe)?);
    }
    if m.qd || m.gqd {
        let q = compare_quartets(test, gold).map_err(|source| RecordError::Quartet { record, source })?;
        out.qd = m.qd.then(|| q.qd());
        out.gqd = m.gqd.then(|| q.gqd_against_second());
    }
    if m.evalb {
        let prf = unlabeled_prf(test, gold, opts.include_root).map_err(universe)?;
        out.precision = Some(prf.precision);
        out.recall = Some(prf.recall);
        out.f_score = Some(prf.f_score);
    }
    Ok(Some(out))
}

#[derive(Clone, Debug, Default)]
pub struct ScoreTable {
    pub records: Vec<ScoreRecord>,
    pub skipped_short: usize,
    pub skipped_error: usize,
    pub errors: Vec<RecordError>,
}

/// Scores every record, in input order regardless of worker scheduling.
pub fn evaluate_corpus(records: &[CorpusRecord], opts: &EvalOptions) -> ScoreTable {
    let work = || -> Vec<Result<Option<ScoreRecord>, RecordError>> {
        records
            .par_iter()
            .enumerate()
            .map(|(i, rec)| match rec {
                Ok(pair) => score_pair(i + 1, pair, opts),
                Err(e) => Err(e.clone()),
            })
            .collect()
    };
    let results = match opts.jobs {
        Some(jobs) => match rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build() {
            Ok(pool) => pool.install(work),
            Err(_) => work(),
        },
        None => work(),
    };
    let mut table = ScoreTable::default();
    for r in results {
        match r {
            Ok(Some(rec)) => table.records.push(rec),
            Ok(None) => table.skipped_short += 1,
            Err(e) => {
                table.skipped_error += 1;
                table.errors.push(e);
            }
        }
    }
    table
}

/// Convenience wrapper for already-paired trees.
pub fn evaluate_pairs(pairs: &[TreePair], opts: &EvalOptions) -> ScoreTable {
    let records: Vec<CorpusRecord> = pairs.iter().cloned().map(Ok).collect();
    evaluate_corpus(&records, opts)
}

fn fmt6(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_default()
}

impl ScoreTable {
    pub fn input_count(&self) -> usize {
        self.records.len() + self.skipped_short + self.skipped_error
    }

    pub fn column(&self, m: Measure) -> Option<Vec<f64>> {
        column(&self.records, m)
    }

    /// CSV with `sentence_id,n` followed by the selected measure columns in
    /// fixed order, six decimals.
    pub fn write_csv<W: io::Write>(&self, out: W, measures: &MeasureSet) -> csv::Result<()> {
        let cols = measures.columns();
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["sentence_id", "n"];
        header.extend(cols.iter().map(|m| m.name()));
        w.write_record(&header)?;
        for r in &self.records {
            let mut row = vec![r.sentence_id.to_string(), r.n.to_string()];
            row.extend(cols.iter().map(|&m| fmt6(r.get(m))));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// One JSON object per line.
    pub fn write_jsonl<W: io::Write>(&self, mut out: W) -> io::Result<()> {
        for r in &self.records {
            serde_json::to_writer(&mut out, r)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    /// Counts and per-measure means.
    pub fn summary(&self) -> String {
        let mut s = format!(
            "records: {}\nskipped_short: {}\nskipped_error: {}\n",
            self.records.len(),
            self.skipped_short,
            self.skipped_error
        );
        for m in Measure::ALL {
            if let Some(col) = self.column(m) {
                if !col.is_empty() {
                    let mean = col.iter().sum::<f64>() / col.len() as f64;
                    let _ = writeln!(s, "mean {}: {mean:.6}", m.name());
                }
            }
        }
        s
    }
}

/// Values of `m` across records, or `None` if any record lacks it.
pub fn column(records: &[ScoreRecord], m: Measure) -> Option<Vec<f64>> {
    records.iter().map(|r| r.get(m)).collect()
}

pub fn read_scores_csv<R: io::Read>(input: R) -> csv::Result<Vec<ScoreRecord>> {
    csv::Reader::from_reader(input).deserialize().collect()
}

pub fn correlation_matrix(
    records: &[ScoreRecord],
    measures: &[Measure],
) -> Result<CorrelationMatrix, CorrelationError> {
    if measures.is_empty() {
        return Err(CorrelationError::NoMeasures);
    }
    if records.len() < 2 {
        return Err(CorrelationError::TooFewRows(records.len()));
    }
    let columns = measures
        .iter()
        .map(|&m| column(records, m).ok_or_else(|| CorrelationError::MissingMeasure(m.name().to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    CorrelationMatrix::from_columns(measures.iter().map(|m| m.name().to_string()).collect(), &columns)
}

//! Command-line front end.
//!
//! Primary output (NEWICK lines, CSV) goes to `--output` or stdout; all
//! diagnostics go to stderr. Exit status: 0 success, 1 record-level
//! failures, 2 usage or I/O errors.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::corpus::{
    correlation_matrix, evaluate_corpus, parse_trees, read_corpus, read_scores_csv, EvalOptions, Measure, MeasureSet,
    ScoreTable, TreeFormat,
};
use crate::newick::serialize_newick;
use crate::preprocess::PreprocessOptions;

pub const EXIT_OK: u8 = 0;
pub const EXIT_RECORD_ERRORS: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "parsedist",
    version,
    about = "Tree-distance evaluation of constituency parses"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Convert bracketed parses to unlabeled NEWICK, one tree per line.
    Convert(ConvertArgs),
    /// Score test trees against gold trees, one CSV row per sentence.
    Compare(CompareArgs),
    /// Score a corpus and report the cross-measure correlation matrix.
    Corpus(CorpusArgs),
    /// Correlation matrix of a scores CSV.
    Correlate(CorrelateArgs),
}

#[derive(Args, Debug, Clone)]
pub struct InputOpts {
    /// Input tree format.
    #[arg(long, value_enum, default_value = "ptb")]
    pub format: TreeFormat,
    /// Keep bare tokens as leaf names instead of `token_position`.
    #[arg(long)]
    pub no_leaf_suffix: bool,
}

impl InputOpts {
    fn preprocess(&self) -> PreprocessOptions {
        PreprocessOptions {
            leaf_suffix: !self.no_leaf_suffix,
        }
    }
}

#[derive(Args, Debug)]
pub struct ConvertArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub input_opts: InputOpts,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    pub gold: PathBuf,
    pub test: PathBuf,
    #[command(flatten)]
    pub input_opts: InputOpts,
    /// Count the top-level bracket in precision/recall, as EvalB does.
    #[arg(long)]
    pub include_root: bool,
    /// Comma-separated subset of rfd, grfd, qd, gqd, evalb.
    #[arg(long, default_value = "rfd,grfd,qd,gqd,evalb", value_parser = MeasureSet::parse_list)]
    pub measures: MeasureSet,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, env = "PARSEDIST_JOBS")]
    pub jobs: Option<usize>,
    /// Write line-delimited JSON records instead of CSV.
    #[arg(long)]
    pub jsonl: bool,
}

#[derive(Args, Debug)]
pub struct CorpusArgs {
    #[command(flatten)]
    pub compare: CompareArgs,
    /// Also write the correlation matrix as CSV here.
    #[arg(long)]
    pub correlations: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CorrelateArgs {
    pub scores: PathBuf,
    /// Comma-separated score columns; `evalb` stands for precision,recall,f_score.
    #[arg(long, default_value = "rfd,grfd,qd,gqd,f_score", value_parser = parse_columns)]
    pub measures: Columns,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug)]
pub struct Columns(pub Vec<Measure>);

fn parse_columns(s: &str) -> Result<Columns, String> {
    let mut out = Vec::new();
    for name in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        if name == "evalb" {
            out.extend([Measure::Precision, Measure::Recall, Measure::FScore]);
        } else {
            out.push(name.parse()?);
        }
    }
    if out.is_empty() {
        return Err("no measures selected".into());
    }
    Ok(Columns(out))
}

#[derive(Debug)]
struct Fatal(String);

impl<E: std::fmt::Display> From<E> for Fatal {
    fn from(e: E) -> Self {
        Fatal(e.to_string())
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, Fatal> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Fatal(format!("cannot create {}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn run(cli: Cli) -> u8 {
    let result = match cli.command {
        Command::Convert(args) => cmd_convert(&args),
        Command::Compare(args) => cmd_compare(&args).map(|(code, _)| code),
        Command::Corpus(args) => cmd_corpus(&args),
        Command::Correlate(args) => cmd_correlate(&args),
    };
    match result {
        Ok(code) => code,
        Err(Fatal(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
    }
}

fn cmd_convert(args: &ConvertArgs) -> Result<u8, Fatal> {
    let text =
        fs::read_to_string(&args.input).map_err(|e| Fatal(format!("cannot read {}: {e}", args.input.display())))?;
    let mut out = open_output(args.output.as_deref())?;
    let mut failed = false;
    for tree in parse_trees(&text, args.input_opts.format, args.input_opts.preprocess()) {
        match tree {
            Ok(t) => writeln!(out, "{}", serialize_newick(&t))?,
            Err(e) => {
                failed = true;
                eprintln!("{e}");
            }
        }
    }
    out.flush()?;
    Ok(if failed { EXIT_RECORD_ERRORS } else { EXIT_OK })
}

fn score(args: &CompareArgs) -> Result<ScoreTable, Fatal> {
    let records = read_corpus(
        &args.gold,
        &args.test,
        args.input_opts.format,
        args.input_opts.preprocess(),
    )?;
    let opts = EvalOptions {
        measures: args.measures,
        include_root: args.include_root,
        jobs: args.jobs,
    };
    let table = evaluate_corpus(&records, &opts);
    for e in &table.errors {
        eprintln!("{e}");
    }
    Ok(table)
}

fn cmd_compare(args: &CompareArgs) -> Result<(u8, ScoreTable), Fatal> {
    let table = score(args)?;
    let mut out = open_output(args.output.as_deref())?;
    if args.jsonl {
        table.write_jsonl(&mut out)?;
    } else {
        table.write_csv(&mut out, &args.measures)?;
    }
    out.flush()?;
    eprint!("{}", table.summary());
    let code = if table.skipped_error > 0 {
        EXIT_RECORD_ERRORS
    } else {
        EXIT_OK
    };
    Ok((code, table))
}

fn cmd_corpus(args: &CorpusArgs) -> Result<u8, Fatal> {
    let (code, table) = cmd_compare(&args.compare)?;
    let measures = args.compare.measures.columns();
    match correlation_matrix(&table.records, &measures) {
        Ok(matrix) => {
            eprint!("\n{}", matrix.pretty());
            if let Some(path) = &args.correlations {
                let file = File::create(path).map_err(|e| Fatal(format!("cannot create {}: {e}", path.display())))?;
                matrix.write_csv(file)?;
            }
        }
        Err(e) => eprintln!("correlations unavailable: {e}"),
    }
    Ok(code)
}

fn cmd_correlate(args: &CorrelateArgs) -> Result<u8, Fatal> {
    let file = File::open(&args.scores).map_err(|e| Fatal(format!("cannot read {}: {e}", args.scores.display())))?;
    let records = read_scores_csv(file)?;
    let matrix = correlation_matrix(&records, &args.measures.0)?;
    let mut out = open_output(args.output.as_deref())?;
    matrix.write_csv(&mut out)?;
    out.flush()?;
    eprint!("{}", matrix.pretty());
    Ok(EXIT_OK)
}

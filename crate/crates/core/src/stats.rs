//! Pearson correlation and correlation matrices.

use std::fmt::Write as _;
use std::io;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PearsonError {
    #[error("sequences differ in length ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("need at least 2 observations, got {len}")]
    TooShort { len: usize },
    #[error("correlation undefined: zero variance")]
    ZeroVariance,
}

/// Product-moment correlation coefficient.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64, PearsonError> {
    if xs.len() != ys.len() {
        return Err(PearsonError::LengthMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(PearsonError::TooShort { len: xs.len() });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(PearsonError::ZeroVariance);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CorrelationError {
    #[error("need at least 2 rows, got {0}")]
    TooFewRows(usize),
    #[error("unknown or missing measure column {0:?}")]
    MissingMeasure(String),
    #[error("no measures requested")]
    NoMeasures,
}

/// Symmetric matrix of pairwise Pearson coefficients. `None` marks an
/// undefined cell (a constant column).
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationMatrix {
    pub measures: Vec<String>,
    pub r: Vec<Vec<Option<f64>>>,
}

impl CorrelationMatrix {
    pub fn from_columns(measures: Vec<String>, columns: &[Vec<f64>]) -> Result<Self, CorrelationError> {
        if columns.is_empty() {
            return Err(CorrelationError::NoMeasures);
        }
        let rows = columns[0].len();
        if rows < 2 {
            return Err(CorrelationError::TooFewRows(rows));
        }
        let k = columns.len();
        let mut r = vec![vec![None; k]; k];
        for i in 0..k {
            for j in i..k {
                let v = pearson(&columns[i], &columns[j]).ok();
                let v = if i == j { v.map(|_| 1.0) } else { v };
                r[i][j] = v;
                r[j][i] = v;
            }
        }
        Ok(CorrelationMatrix { measures, r })
    }

    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.measures.iter().position(|m| m == a)?;
        let j = self.measures.iter().position(|m| m == b)?;
        self.r[i][j]
    }

    pub fn write_csv<W: io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["measure".to_string()];
        header.extend(self.measures.iter().cloned());
        w.write_record(&header)?;
        for (name, row) in self.measures.iter().zip(&self.r) {
            let mut rec = vec![name.clone()];
            rec.extend(row.iter().map(|c| match c {
                Some(v) => format!("{v:.6}"),
                None => "undefined".to_string(),
            }));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Aligned plain-text table.
    pub fn pretty(&self) -> String {
        let width = self.measures.iter().map(|m| m.len()).max().unwrap_or(0).max(9);
        let mut s = format!("{:width$}", "");
        for m in &self.measures {
            let _ = write!(s, " {m:>width$}");
        }
        s.push('\n');
        for (name, row) in self.measures.iter().zip(&self.r) {
            let _ = write!(s, "{name:width$}");
            for c in row {
                match c {
                    Some(v) => {
                        let _ = write!(s, " {v:>width$.4}");
                    }
                    None => {
                        let _ = write!(s, " {:>width$}", "undefined");
                    }
                }
            }
            s.push('\n');
        }
        s
    }
}

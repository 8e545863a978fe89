use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};

/// Sampled function on a strictly increasing positive frequency grid.
///
/// Between samples the value is interpolated log-linearly (`ln v` linear in
/// `ω`) when both neighbours share a sign, linearly otherwise. Below the
/// first sample it continues as a power law, above the last as a decaying
/// exponential.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    omega: Vec<f64>,
    values: Vec<f64>,
}

impl Table {
    pub fn new(omega: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let bad = |message: String| Error::Table {
            path: "<memory>".into(),
            message,
        };
        if omega.len() != values.len() {
            return Err(bad(format!(
                "{} frequencies but {} values",
                omega.len(),
                values.len()
            )));
        }
        if omega.len() < 2 {
            return Err(bad("at least two samples are required".into()));
        }
        if omega[0] <= 0.0 {
            return Err(bad(format!("frequencies must be positive, first is {}", omega[0])));
        }
        for (i, w) in omega.windows(2).enumerate() {
            #[allow(clippy::neg_cmp_op_on_partial_ord)]
            if !(w[1] > w[0]) {
                return Err(bad(format!(
                    "frequencies must be strictly increasing (row {}: {} after {})",
                    i + 2,
                    w[1],
                    w[0]
                )));
            }
        }
        if let Some(i) = omega
            .iter()
            .chain(values.iter())
            .position(|v| !v.is_finite())
        {
            return Err(bad(format!("non-finite entry at position {i}")));
        }
        Ok(Table { omega, values })
    }

    /// Reads a two-column CSV `(ω, value)` with a header line.
    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path)?;
        Self::from_csv_reader(file).map_err(|e| match e {
            Error::Table { message, .. } => Error::Table {
                path: path.display().to_string(),
                message,
            },
            other => other,
        })
    }

    pub fn from_csv_reader(reader: impl Read) -> Result<Self> {
        let bad = |message: String| Error::Table {
            path: "<reader>".into(),
            message,
        };
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut omega = Vec::new();
        let mut values = Vec::new();
        for (row, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| bad(e.to_string()))?;
            if record.len() != 2 {
                return Err(bad(format!(
                    "row {} has {} columns, expected 2",
                    row + 2,
                    record.len()
                )));
            }
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| bad(format!("row {}: `{s}`: {e}", row + 2)))
            };
            omega.push(parse(&record[0])?);
            values.push(parse(&record[1])?);
        }
        Self::new(omega, values).map_err(|e| match e {
            Error::Table { message, .. } => bad(message),
            other => other,
        })
    }

    pub fn first(&self) -> f64 {
        self.omega[0]
    }

    pub fn last(&self) -> f64 {
        *self.omega.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.omega.iter().copied().zip(self.values.iter().copied())
    }

    pub fn eval(&self, omega: f64, low_exponent: f64, tail_rate: f64) -> f64 {
        let n = self.omega.len();
        if omega <= self.omega[0] {
            return self.values[0] * (omega / self.omega[0]).powf(low_exponent);
        }
        if omega >= self.omega[n - 1] {
            return self.values[n - 1] * (-tail_rate * (omega - self.omega[n - 1])).exp();
        }
        let i = self.omega.partition_point(|&w| w <= omega) - 1;
        let (w0, w1) = (self.omega[i], self.omega[i + 1]);
        let (v0, v1) = (self.values[i], self.values[i + 1]);
        let u = (omega - w0) / (w1 - w0);
        if v0 * v1 > 0.0 {
            v0 * (v1 / v0).powf(u)
        } else {
            v0 + (v1 - v0) * u
        }
    }
}

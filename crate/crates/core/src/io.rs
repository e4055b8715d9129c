//! Income input files and the simulation results CSV.

use std::io::{Read, Write};
use std::str::FromStr;

use thiserror::Error;

use crate::simulation::{Estimator, SimSummary};

/// Exact header of the results CSV.
pub const RESULTS_HEADER: [&str; 9] = [
    "alpha",
    "n",
    "estimator",
    "true_value",
    "mean_estimate",
    "rel_bias",
    "mse",
    "n_effective",
    "n_failed",
];

/// Column name that switches input parsing to CSV mode.
pub const INCOME_COLUMN: &str = "income";

#[derive(Debug, Error)]
pub enum InputError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("no observations found")]
    Empty,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn parse_observation(field: &str, line: usize) -> Result<f64, InputError> {
    let value = f64::from_str(field.trim()).map_err(|_| InputError::Line {
        line,
        message: format!("cannot parse {:?} as a number", field.trim()),
    })?;
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(InputError::Line {
            line,
            message: format!("observation {value} is not strictly positive and finite"),
        })
    }
}

fn has_income_header(line: &str) -> bool {
    line.split(',')
        .any(|f| f.trim().trim_matches('"').eq_ignore_ascii_case(INCOME_COLUMN))
}

/// Reads observations from either one number per line or a CSV with an
/// `income` column. Blank lines are skipped; line numbers in errors are
/// 1-based.
pub fn read_observations<R: Read>(mut reader: R) -> Result<Vec<f64>, InputError> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    let first = text.lines().find(|l| !l.trim().is_empty());
    let values = match first {
        Some(header) if has_income_header(header) => read_csv_column(&text)?,
        _ => text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| parse_observation(l, i + 1))
            .collect::<Result<Vec<_>, _>>()?,
    };
    if values.is_empty() {
        return Err(InputError::Empty);
    }
    Ok(values)
}

fn read_csv_column(text: &str) -> Result<Vec<f64>, InputError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let column = rdr
        .headers()?
        .iter()
        .position(|h| h.eq_ignore_ascii_case(INCOME_COLUMN))
        .expect("header checked");
    let mut values = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let field = record.get(column).ok_or_else(|| InputError::Line {
            line,
            message: format!("missing {INCOME_COLUMN} field"),
        })?;
        values.push(parse_observation(field, line)?);
    }
    Ok(values)
}

/// Writes summaries as CSV with shortest round-trip float formatting.
pub fn write_summaries<W: Write>(writer: W, rows: &[SimSummary]) -> csv::Result<()> {
    let mut wtr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    wtr.write_record(RESULTS_HEADER)?;
    for r in rows {
        wtr.write_record([
            r.alpha.to_string(),
            r.n.to_string(),
            r.estimator.name().to_string(),
            r.true_value.to_string(),
            r.mean_estimate.to_string(),
            r.rel_bias.to_string(),
            r.mse.to_string(),
            r.n_effective.to_string(),
            r.n_failed.to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

#[derive(Debug, Error)]
pub enum ResultsError {
    #[error("unexpected header {0:?}")]
    Header(Vec<String>),
    #[error("record {record}: bad {column} field {value:?}")]
    Field {
        record: usize,
        column: &'static str,
        value: String,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Parses a results CSV written by [`write_summaries`].
pub fn read_summaries<R: Read>(reader: R) -> Result<Vec<SimSummary>, ResultsError> {
    let mut rdr = csv::Reader::from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if header != RESULTS_HEADER {
        return Err(ResultsError::Header(header));
    }
    let mut rows = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        fn field<T: FromStr>(rec: &csv::StringRecord, i: usize, col: usize) -> Result<T, ResultsError> {
            let raw = rec.get(col).unwrap_or("");
            raw.parse().map_err(|_| ResultsError::Field {
                record: i + 1,
                column: RESULTS_HEADER[col],
                value: raw.to_owned(),
            })
        }
        rows.push(SimSummary {
            alpha: field(&record, i, 0)?,
            n: field(&record, i, 1)?,
            estimator: field::<Estimator>(&record, i, 2)?,
            true_value: field(&record, i, 3)?,
            mean_estimate: field(&record, i, 4)?,
            rel_bias: field(&record, i, 5)?,
            mse: field(&record, i, 6)?,
            n_effective: field(&record, i, 7)?,
            n_failed: field(&record, i, 8)?,
        });
    }
    Ok(rows)
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn any_finite_summary_round_trips(
            alpha in 1e-3f64..1e3,
            n in 2usize..100_000,
            e in 0usize..6,
            vals in prop::array::uniform4(-1e6f64..1e6),
            eff in 0usize..10_000,
            failed in 0usize..10_000,
        ) {
            let row = SimSummary {
                alpha,
                n,
                estimator: Estimator::ALL[e],
                true_value: vals[0],
                mean_estimate: vals[1],
                rel_bias: vals[2],
                mse: vals[3].abs(),
                n_effective: eff,
                n_failed: failed,
            };
            let mut buf = Vec::new();
            write_summaries(&mut buf, std::slice::from_ref(&row)).unwrap();
            prop_assert_eq!(read_summaries(buf.as_slice()).unwrap(), vec![row]);
        }
    }
}

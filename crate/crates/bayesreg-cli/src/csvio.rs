//! Numeric CSV ingestion.
//!
//! Input contract: a header row, numeric cells, and the last column as the
//! response. Lines starting with `#` are comments (our own artifacts carry a
//! comment header, so round-tripping them stays possible).

use nalgebra::{DMatrix, DVector};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CsvError {
    #[error("line {line}: expected {expected} cells, found {found}")]
    RaggedRow { line: usize, expected: usize, found: usize },
    #[error("line {line}, column {column}: cannot parse {cell:?} as a number")]
    NonNumericCell { line: usize, column: usize, cell: String },
    #[error("no data rows after the header")]
    NoDataRows,
    #[error("need at least 2 data rows, found {0}")]
    TooFewRows(usize),
    #[error("need at least one predictor column before the response")]
    NoPredictors,
    #[error("file is empty")]
    Empty,
}

/// Parse CSV text into a predictor matrix and a response vector.
pub fn parse_csv(text: &str) -> Result<(DMatrix<f64>, DVector<f64>), CsvError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (_, header) = lines.next().ok_or(CsvError::Empty)?;
    let width = header.split(',').count();
    if width < 2 {
        return Err(CsvError::NoPredictors);
    }

    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, raw) in lines {
        let cells: Vec<&str> = raw.split(',').map(str::trim).collect();
        if cells.len() != width {
            return Err(CsvError::RaggedRow { line, expected: width, found: cells.len() });
        }
        let mut row = Vec::with_capacity(width);
        for (c, cell) in cells.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| CsvError::NonNumericCell {
                line,
                column: c + 1,
                cell: (*cell).to_string(),
            })?;
            row.push(v);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CsvError::NoDataRows);
    }
    if rows.len() < 2 {
        return Err(CsvError::TooFewRows(rows.len()));
    }
    let n = rows.len();
    let p = width - 1;
    let x = DMatrix::from_fn(n, p, |i, j| rows[i][j]);
    let y = DVector::from_fn(n, |i, _| rows[i][p]);
    Ok((x, y))
}

/// Read and parse a CSV file; the last column is the response.
pub fn load_csv(path: &Path) -> Result<(DMatrix<f64>, DVector<f64>), crate::error::CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| crate::error::CliError::Io(format!("{}: {e}", path.display())))?;
    parse_csv(&text).map_err(|e| crate::error::CliError::Usage(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn well_formed_file() {
        let (x, y) = parse_csv("x,y\n1,2\n3,4\n5,6\n").unwrap();
        assert_eq!((x.nrows(), x.ncols()), (3, 1));
        assert_eq!(y.as_slice(), &[2.0, 4.0, 6.0]);
    }

    #[test]
    fn ragged_row_reports_line() {
        let err = parse_csv("a,b,y\n1,2,3\n4,5\n").unwrap_err();
        assert_eq!(err, CsvError::RaggedRow { line: 3, expected: 3, found: 2 });
    }

    #[test]
    fn non_numeric_cell_reports_position() {
        let err = parse_csv("a,y\n1,2\n3,oops\n").unwrap_err();
        assert_eq!(
            err,
            CsvError::NonNumericCell { line: 3, column: 2, cell: "oops".into() }
        );
    }

    #[test]
    fn header_only_is_an_error() {
        assert_eq!(parse_csv("a,b,y\n").unwrap_err(), CsvError::NoDataRows);
    }

    #[test]
    fn comments_and_blanks_skipped() {
        let (x, y) = parse_csv("# seed=1\n\nx,y\n1,2\n3,4\n").unwrap();
        assert_eq!(x.nrows(), 2);
        assert_eq!(y.len(), 2);
    }
}

//! Reading and writing parity-check matrices in alist format.
//!
//! ```text
//! N M
//! max_col_weight max_row_weight
//! <N column weights>
//! <M row weights>
//! <N lines: 1-based row indices of each column, zero padded>
//! <M lines: 1-based column indices of each row, zero padded>
//! ```
//!
//! Zeros in index lines are padding and are skipped on read. The writer pads
//! every index line to the maximum weight (at least one token per line).

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use thiserror::Error;

use super::ParityCheckMatrix;

#[derive(Debug, Error)]
pub enum AlistError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: expected {expected} values, found {found}")]
    CountMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("{what} {index}: declared weight {declared} but {listed} indices listed")]
    WeightMismatch {
        what: &'static str,
        index: usize,
        declared: usize,
        listed: usize,
    },
    #[error("{what} {index}: weight {weight} exceeds declared maximum {max}")]
    WeightAboveMax {
        what: &'static str,
        index: usize,
        weight: usize,
        max: usize,
    },
    #[error("{what} {index}: index {value} out of range 1..={bound}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        value: usize,
        bound: usize,
    },
    #[error("{what} {index}: index {value} listed twice")]
    DuplicateIndex {
        what: &'static str,
        index: usize,
        value: usize,
    },
    #[error("column lists and row lists disagree at (row {row}, column {col})")]
    AdjacencyMismatch { row: usize, col: usize },
}

pub fn read_alist(path: impl AsRef<Path>) -> Result<ParityCheckMatrix, AlistError> {
    parse_alist(&fs::read_to_string(path)?)
}

pub fn write_alist(h: &ParityCheckMatrix, path: impl AsRef<Path>) -> Result<(), AlistError> {
    fs::write(path, format_alist(h))?;
    Ok(())
}

pub fn format_alist(h: &ParityCheckMatrix) -> String {
    let mut out = String::new();
    let join =
        |v: &mut dyn Iterator<Item = usize>| v.map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let (max_c, max_r) = (h.max_col_weight(), h.max_row_weight());
    let _ = writeln!(out, "{} {}", h.n_cols(), h.n_rows());
    let _ = writeln!(out, "{max_c} {max_r}");
    let _ = writeln!(out, "{}", join(&mut h.cols().iter().map(Vec::len)));
    let _ = writeln!(out, "{}", join(&mut h.rows().iter().map(Vec::len)));
    for (lists, max) in [(h.cols(), max_c), (h.rows(), max_r)] {
        for list in lists {
            let padded = list
                .iter()
                .map(|&i| i + 1)
                .chain(std::iter::repeat(0))
                .take(max.max(list.len()).max(1));
            let _ = writeln!(out, "{}", join(&mut padded.into_iter()));
        }
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    /// Next non-blank line, parsed into integers, with its 1-based number.
    fn next_ints(&mut self) -> Result<(usize, Vec<usize>), AlistError> {
        for (i, text) in self.inner.by_ref() {
            let line = i + 1;
            if text.trim().is_empty() {
                continue;
            }
            let values = text
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| AlistError::Malformed {
                        line,
                        reason: format!("not a non-negative integer: {tok:?}"),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            return Ok((line, values));
        }
        Err(AlistError::Malformed {
            line: 0,
            reason: "unexpected end of file".into(),
        })
    }

    fn next_exact(&mut self, expected: usize) -> Result<(usize, Vec<usize>), AlistError> {
        let (line, v) = self.next_ints()?;
        if v.len() != expected {
            return Err(AlistError::CountMismatch {
                line,
                expected,
                found: v.len(),
            });
        }
        Ok((line, v))
    }
}

/// Reads one index list per declared weight and checks the listed count.
fn read_lists(
    lines: &mut Lines<'_>,
    what: &'static str,
    weights: &[usize],
    bound: usize,
) -> Result<Vec<Vec<usize>>, AlistError> {
    weights
        .iter()
        .enumerate()
        .map(|(index, &declared)| {
            let (_, raw) = lines.next_ints()?;
            let mut list = Vec::with_capacity(declared);
            for value in raw.into_iter().filter(|&v| v != 0) {
                if value > bound {
                    return Err(AlistError::IndexOutOfRange {
                        what,
                        index,
                        value,
                        bound,
                    });
                }
                list.push(value - 1);
            }
            if list.len() != declared {
                return Err(AlistError::WeightMismatch {
                    what,
                    index,
                    declared,
                    listed: list.len(),
                });
            }
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(AlistError::DuplicateIndex {
                    what,
                    index,
                    value: w[0] + 1,
                });
            }
            Ok(list)
        })
        .collect()
}

pub fn parse_alist(text: &str) -> Result<ParityCheckMatrix, AlistError> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };
    let (_, dims) = lines.next_exact(2)?;
    let (n, m) = (dims[0], dims[1]);
    let (_, maxes) = lines.next_exact(2)?;
    let (max_c, max_r) = (maxes[0], maxes[1]);
    let (_, col_w) = lines.next_exact(n)?;
    let (_, row_w) = lines.next_exact(m)?;

    for (what, weights, max) in [("column", &col_w, max_c), ("row", &row_w, max_r)] {
        if let Some((index, &weight)) = weights.iter().enumerate().find(|(_, &w)| w > max) {
            return Err(AlistError::WeightAboveMax {
                what,
                index,
                weight,
                max,
            });
        }
    }

    let cols = read_lists(&mut lines, "column", &col_w, m)?;
    let rows = read_lists(&mut lines, "row", &row_w, n)?;

    let h = ParityCheckMatrix::from_rows(n, rows).expect("indices validated above");
    for (col, list) in cols.iter().enumerate() {
        if let Some(&row) = list.iter().find(|&&row| !h.get(row, col)) {
            return Err(AlistError::AdjacencyMismatch { row, col });
        }
    }
    // Equal edge totals plus containment means the two views coincide.
    let col_edges: usize = cols.iter().map(Vec::len).sum();
    if col_edges != h.n_edges() {
        let (row, col) = h
            .rows()
            .iter()
            .enumerate()
            .flat_map(|(r, l)| l.iter().map(move |&c| (r, c)))
            .find(|&(r, c)| cols[c].binary_search(&r).is_err())
            .expect("edge totals differ");
        return Err(AlistError::AdjacencyMismatch { row, col });
    }
    Ok(h)
}

//! Sparse parity-check matrices, code parameters and structural checks.

pub mod alist;
pub mod eg;

use std::fmt;

use thiserror::Error;

pub use alist::{read_alist, write_alist, AlistError};
pub use eg::eg_ldpc_construct;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("row {row} references column {col}, but the matrix has {n_cols} columns")]
    ColumnOutOfRange {
        row: usize,
        col: usize,
        n_cols: usize,
    },
    #[error("row {row} lists column {col} more than once")]
    DuplicateIndex { row: usize, col: usize },
}

/// Binary `M x N` matrix stored as row and column adjacency lists.
///
/// `row_adj[m]` is the sorted set N(m) of bits in check `m`; `col_adj[n]` is
/// the sorted set M(n) of checks containing bit `n`. Both views are always
/// transposes of each other.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheckMatrix {
    n_rows: usize,
    n_cols: usize,
    row_adj: Vec<Vec<usize>>,
    col_adj: Vec<Vec<usize>>,
}

impl ParityCheckMatrix {
    /// Builds a matrix from its rows. Column indices within a row may come in
    /// any order but must be distinct and `< n_cols`.
    pub fn from_rows(n_cols: usize, rows: Vec<Vec<usize>>) -> Result<Self, MatrixError> {
        let mut row_adj = rows;
        let mut col_adj = vec![Vec::new(); n_cols];
        for (m, row) in row_adj.iter_mut().enumerate() {
            row.sort_unstable();
            for w in row.windows(2) {
                if w[0] == w[1] {
                    return Err(MatrixError::DuplicateIndex { row: m, col: w[0] });
                }
            }
            for &n in row.iter() {
                if n >= n_cols {
                    return Err(MatrixError::ColumnOutOfRange {
                        row: m,
                        col: n,
                        n_cols,
                    });
                }
                col_adj[n].push(m);
            }
        }
        Ok(Self {
            n_rows: row_adj.len(),
            n_cols,
            row_adj,
            col_adj,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_rows(n, (0..n).map(|i| vec![i]).collect()).expect("identity is well formed")
    }

    /// Builds a matrix from a dense 0/1 row-major description.
    pub fn from_dense(rows: &[Vec<u8>]) -> Result<Self, MatrixError> {
        let n_cols = rows.first().map_or(0, |r| r.len());
        let sparse = rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        Self::from_rows(n_cols, sparse)
    }

    /// Number of checks, M.
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    /// Block length, N.
    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// N(m): bits participating in check `m`.
    pub fn row(&self, m: usize) -> &[usize] {
        &self.row_adj[m]
    }

    /// M(n): checks containing bit `n`.
    pub fn col(&self, n: usize) -> &[usize] {
        &self.col_adj[n]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.row_adj
    }

    pub fn cols(&self) -> &[Vec<usize>] {
        &self.col_adj
    }

    pub fn n_edges(&self) -> usize {
        self.row_adj.iter().map(Vec::len).sum()
    }

    pub fn get(&self, m: usize, n: usize) -> bool {
        self.row_adj[m].binary_search(&n).is_ok()
    }

    pub fn transpose(&self) -> Self {
        Self {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            row_adj: self.col_adj.clone(),
            col_adj: self.row_adj.clone(),
        }
    }

    /// Common weight of all rows, or `None` for an irregular matrix.
    pub fn row_weight(&self) -> Option<usize> {
        uniform_len(&self.row_adj)
    }

    pub fn col_weight(&self) -> Option<usize> {
        uniform_len(&self.col_adj)
    }

    pub fn max_row_weight(&self) -> usize {
        self.row_adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn max_col_weight(&self) -> usize {
        self.col_adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `z * H^T` over GF(2), one entry per check.
    pub fn syndrome(&self, z: &[u8]) -> Vec<u8> {
        assert_eq!(z.len(), self.n_cols, "hard-decision length mismatch");
        self.row_adj
            .iter()
            .map(|row| row.iter().fold(0u8, |acc, &n| acc ^ (z[n] & 1)))
            .collect()
    }

    pub fn is_codeword(&self, z: &[u8]) -> bool {
        self.syndrome(z).iter().all(|&s| s == 0)
    }

    /// Checks that `row_adj` and `col_adj` describe the same set of entries.
    pub fn is_transpose_consistent(&self) -> bool {
        if self.col_adj.len() != self.n_cols || self.row_adj.len() != self.n_rows {
            return false;
        }
        let row_edges: usize = self.row_adj.iter().map(Vec::len).sum();
        let col_edges: usize = self.col_adj.iter().map(Vec::len).sum();
        if row_edges != col_edges {
            return false;
        }
        self.col_adj.iter().enumerate().all(|(n, col)| {
            col.windows(2).all(|w| w[0] < w[1])
                && col.iter().all(|&m| m < self.n_rows && self.get(m, n))
        })
    }
}

fn uniform_len(lists: &[Vec<usize>]) -> Option<usize> {
    let first = lists.first()?.len();
    lists.iter().all(|l| l.len() == first).then_some(first)
}

/// Row or column weight of a code: a single value or irregular.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    Regular(usize),
    Irregular,
}

impl From<Option<usize>> for Weight {
    fn from(w: Option<usize>) -> Self {
        w.map_or(Weight::Irregular, Weight::Regular)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Regular(w) => write!(f, "{w}"),
            Weight::Irregular => write!(f, "irregular"),
        }
    }
}

/// Summary parameters of the code defined by a parity-check matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeSpec {
    pub n: usize,
    pub k: usize,
    pub rate: f64,
    pub row_weight: Weight,
    pub col_weight: Weight,
}

impl CodeSpec {
    pub fn of(h: &ParityCheckMatrix) -> Self {
        let n = h.n_cols();
        let k = n - gf2_rank(h);
        Self {
            n,
            k,
            rate: k as f64 / n as f64,
            row_weight: h.row_weight().into(),
            col_weight: h.col_weight().into(),
        }
    }
}

/// Outcome of a row-column constraint check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RcReport {
    Pass,
    /// Two rows share more than one column.
    RowViolation {
        rows: (usize, usize),
        shared: usize,
    },
    /// Two columns share more than one row.
    ColumnViolation {
        cols: (usize, usize),
        shared: usize,
    },
}

impl RcReport {
    pub fn passed(&self) -> bool {
        matches!(self, RcReport::Pass)
    }
}

/// Checks that no two rows and no two columns overlap in more than one
/// position. Reports the first violating pair in index order.
pub fn validate_rc(h: &ParityCheckMatrix) -> RcReport {
    if let Some((a, b, shared)) = first_overlap(h.rows(), h.cols()) {
        return RcReport::RowViolation {
            rows: (a, b),
            shared,
        };
    }
    if let Some((a, b, shared)) = first_overlap(h.cols(), h.rows()) {
        return RcReport::ColumnViolation {
            cols: (a, b),
            shared,
        };
    }
    RcReport::Pass
}

/// For each line `a`, counts overlaps with every later line `b` by walking
/// the transpose adjacency. Returns the smallest `(a, b)` with overlap > 1.
fn first_overlap(lines: &[Vec<usize>], transpose: &[Vec<usize>]) -> Option<(usize, usize, usize)> {
    let mut counts = vec![0usize; lines.len()];
    let mut touched = Vec::new();
    for (a, line) in lines.iter().enumerate() {
        for &pos in line {
            for &b in &transpose[pos] {
                if b > a {
                    if counts[b] == 0 {
                        touched.push(b);
                    }
                    counts[b] += 1;
                }
            }
        }
        let worst = touched.iter().filter(|&&b| counts[b] > 1).min().copied();
        let found = worst.map(|b| (a, b, counts[b]));
        for &b in &touched {
            counts[b] = 0;
        }
        touched.clear();
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Rank over GF(2) by Gaussian elimination on bit-packed rows.
pub fn gf2_rank(h: &ParityCheckMatrix) -> usize {
    let words = h.n_cols().div_ceil(64);
    let mut rows: Vec<Vec<u64>> = h
        .rows()
        .iter()
        .map(|row| {
            let mut packed = vec![0u64; words];
            for &n in row {
                packed[n / 64] |= 1 << (n % 64);
            }
            packed
        })
        .collect();

    let mut rank = 0;
    for col in 0..h.n_cols() {
        let (w, bit) = (col / 64, 1u64 << (col % 64));
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][w] & bit != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for row in tail.iter_mut() {
            if row[w] & bit != 0 {
                for (dst, src) in row.iter_mut().zip(pivot_row).skip(w) {
                    *dst ^= src;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

use std::fmt;

use crate::error::{Error, Result};
use crate::universe::{Elem, Universe};

/// An `m × q` matrix over a finite universe, `m >= 1`, `q >= 0`.
///
/// Entries are row-major. The derived ordering compares rows, then columns,
/// then the row-major entries, which is the canonical order used in files.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Elem>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Elem>) -> Result<Self> {
        if rows == 0 {
            return Err(Error::ZeroArity);
        }
        if entries.len() != rows * cols {
            return Err(Error::LengthMismatch {
                field: "entries",
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(Matrix { rows, cols, entries })
    }

    /// The 0-column matrix `()` with `rows` rows.
    pub fn empty(rows: usize) -> Self {
        Matrix {
            rows,
            cols: 0,
            entries: Vec::new(),
        }
    }

    /// Builds a matrix from its columns, each of length `rows`.
    pub fn from_columns<C: AsRef<[Elem]>>(rows: usize, columns: &[C]) -> Result<Self> {
        for c in columns {
            if c.as_ref().len() != rows {
                return Err(Error::RowMismatch {
                    expected: rows,
                    found: c.as_ref().len(),
                });
            }
        }
        Matrix::new(
            rows,
            columns.len(),
            (0..rows)
                .flat_map(|r| columns.iter().map(move |c| c.as_ref()[r]))
                .collect(),
        )
    }

    /// Builds a matrix from its rows, all of the same length.
    pub fn from_rows<R: AsRef<[Elem]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let entries: Vec<Elem> = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        Matrix::new(rows.len(), cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Elem] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Elem {
        self.entries[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[Elem] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> Vec<Elem> {
        (0..self.rows).map(|r| self.get(r, col)).collect()
    }

    /// Fails if some entry lies outside `universe`.
    pub fn check_universe(&self, universe: Universe) -> Result<()> {
        for &e in &self.entries {
            universe.check(e as usize)?;
        }
        Ok(())
    }

    /// Columns `range` as a new matrix.
    pub fn columns(&self, start: usize, end: usize) -> Matrix {
        debug_assert!(start <= end && end <= self.cols);
        let cols = end - start;
        let entries = (0..self.rows)
            .flat_map(|r| self.row(r)[start..end].iter().copied())
            .collect();
        Matrix {
            rows: self.rows,
            cols,
            entries,
        }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return Err(Error::RowMismatch {
                expected: self.rows,
                found: other.rows,
            });
        }
        let entries = (0..self.rows)
            .flat_map(|r| self.row(r).iter().chain(other.row(r)).copied())
            .collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols + other.cols,
            entries,
        })
    }

    /// Whether the last columns equal `suffix`.
    pub fn ends_with(&self, suffix: &Matrix) -> bool {
        self.rows == suffix.rows
            && self.cols >= suffix.cols
            && (0..self.rows).all(|r| self.row(r)[self.cols - suffix.cols..] == *suffix.row(r))
    }

    /// Whether the first columns equal `prefix`.
    pub fn starts_with(&self, prefix: &Matrix) -> bool {
        self.rows == prefix.rows
            && self.cols >= prefix.cols
            && (0..self.rows).all(|r| self.row(r)[..prefix.cols] == *prefix.row(r))
    }

    /// Every `rows × cols` matrix over `universe`, in canonical order.
    pub fn all(universe: Universe, rows: usize, cols: usize) -> impl Iterator<Item = Matrix> {
        let k = universe.size();
        let len = rows * cols;
        let count = k.pow(len as u32);
        (0..count).map(move |code| {
            let mut entries = vec![0; len];
            crate::universe::decode_tuple(k, code, &mut entries);
            Matrix { rows, cols, entries }
        })
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cols == 0 {
            return write!(f, "()");
        }
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|e| e.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

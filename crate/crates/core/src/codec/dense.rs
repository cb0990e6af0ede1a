use thiserror::Error;

use crate::model::{Matrix, SparseEntry, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DenseVector {
    pub entries: Vec<String>,
}

impl DenseVector {
    pub fn new(entries: Vec<String>) -> Self {
        Self { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl<S: Into<String>> FromIterator<S> for DenseVector {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Self::new(iter.into_iter().map(Into::into).collect())
    }
}

/// Rectangular matrix of tokens; every row has `cols` entries.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DenseMatrix {
    pub rows: Vec<DenseVector>,
    pub cols: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DenseError {
    #[error("sparse content without a known dimension")]
    MissingDimension,
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: u64, dim: u64 },
    #[error("rows have different widths ({first} and {other}) and no cols attribute")]
    RaggedRows { first: usize, other: usize },
    #[error("row has {found} entries, expected {cols}")]
    WidthMismatch { cols: usize, found: usize },
    #[error("{0} cannot be densified")]
    NotNumeric(&'static str),
}

/// Splits on runs of ASCII whitespace.
pub fn tokenize_dense(raw: &str) -> Vec<String> {
    raw.split_ascii_whitespace().map(str::to_owned).collect()
}

pub fn densify_vector(
    v: &Vector,
    length_hint: Option<u64>,
    zero: &str,
) -> Result<DenseVector, DenseError> {
    match v {
        Vector::Dense(raw) => Ok(DenseVector::new(tokenize_dense(raw))),
        Vector::Sparse { dim, entries } => {
            let len = dim.or(length_hint).ok_or(DenseError::MissingDimension)?;
            fill(entries, len, zero)
        }
        Vector::Tuples { .. } => Err(DenseError::NotNumeric("vector of tuples")),
    }
}

fn fill(entries: &[SparseEntry], len: u64, zero: &str) -> Result<DenseVector, DenseError> {
    let mut out = vec![zero.to_owned(); len as usize];
    for e in entries {
        let slot = out.get_mut(e.index as usize).filter(|_| e.index < len).ok_or(
            DenseError::IndexOutOfRange {
                index: e.index,
                dim: len,
            },
        )?;
        *slot = e.text.clone();
    }
    Ok(DenseVector::new(out))
}

/// Width a row announces on its own, if any.
fn own_width(v: &Vector) -> Option<u64> {
    match v {
        Vector::Dense(raw) => Some(raw.split_ascii_whitespace().count() as u64),
        Vector::Sparse { dim, .. } => *dim,
        Vector::Tuples { .. } => None,
    }
}

fn common_width<'a>(rows: impl Iterator<Item = &'a Vector>) -> Result<Option<u64>, DenseError> {
    let mut width: Option<u64> = None;
    let mut saw_row = false;
    for row in rows {
        saw_row = true;
        if let Some(w) = own_width(row) {
            match width {
                None => width = Some(w),
                Some(first) if first != w => {
                    return Err(DenseError::RaggedRows {
                        first: first as usize,
                        other: w as usize,
                    })
                }
                Some(_) => {}
            }
        }
    }
    match (width, saw_row) {
        (None, true) => Err(DenseError::MissingDimension),
        (None, false) => Ok(None),
        (w, _) => Ok(w),
    }
}

pub fn densify_matrix(m: &Matrix, zero: &str) -> Result<DenseMatrix, DenseError> {
    match m {
        Matrix::Dense { cols, rows } => {
            let width = match cols {
                Some(c) => *c,
                None => common_width(rows.iter())?.unwrap_or(0),
            };
            let rows = rows
                .iter()
                .map(|r| densify_row(r, width, zero))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(DenseMatrix {
                rows,
                cols: width as usize,
            })
        }
        Matrix::Sparse { dim, rows } => {
            let width = common_width(rows.iter().map(|r| &r.row))?.unwrap_or(0);
            let zero_row = DenseVector::new(vec![zero.to_owned(); width as usize]);
            let mut out = vec![zero_row; *dim as usize];
            for r in rows {
                if r.index >= *dim {
                    return Err(DenseError::IndexOutOfRange {
                        index: r.index,
                        dim: *dim,
                    });
                }
                out[r.index as usize] = densify_row(&r.row, width, zero)?;
            }
            Ok(DenseMatrix {
                rows: out,
                cols: width as usize,
            })
        }
        Matrix::Nested(_) => Err(DenseError::NotNumeric("matrix of matrices")),
        Matrix::Tuples(_) => Err(DenseError::NotNumeric("matrix of tuples")),
    }
}

fn densify_row(row: &Vector, width: u64, zero: &str) -> Result<DenseVector, DenseError> {
    let dense = densify_vector(row, Some(width), zero)?;
    if dense.len() as u64 != width {
        return Err(DenseError::WidthMismatch {
            cols: width as usize,
            found: dense.len(),
        });
    }
    Ok(dense)
}

/// Keeps exactly the entries different from `zero`.
pub fn sparsify_vector(d: &DenseVector, zero: &str) -> Vector {
    let entries = d
        .entries
        .iter()
        .enumerate()
        .filter(|(_, t)| *t != zero)
        .map(|(i, t)| SparseEntry::new(i as u64, t.clone()))
        .collect();
    Vector::Sparse {
        dim: Some(d.len() as u64),
        entries,
    }
}

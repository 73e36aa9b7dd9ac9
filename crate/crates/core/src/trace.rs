//! In-memory traces: the ordered strategy choices of one execution.

use alloc::string::String;
use alloc::vec::Vec;

use num_rational::BigRational;

use crate::matrix::{MatrixError, PayoffMatrix};
use crate::scalar::Scalar;

/// One step's choices, 0-based: the row player plays `row`, the column player `col`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Choice {
    pub row: usize,
    pub col: usize,
}

impl Choice {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }
}

/// How the game matrix is recorded in a trace header.
#[derive(Debug, Clone, PartialEq)]
pub enum MatrixDescriptor {
    Identity(usize),
    /// Row-major exact entries.
    Inline(Vec<BigRational>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceHeader {
    pub rows: usize,
    pub cols: usize,
    pub matrix: MatrixDescriptor,
    pub policy: String,
    pub seed: Option<u64>,
}

impl TraceHeader {
    pub fn for_matrix<S: Scalar>(matrix: &PayoffMatrix<S>, policy: &str, seed: Option<u64>) -> Self {
        let descriptor = if matrix.is_identity() {
            MatrixDescriptor::Identity(matrix.rows())
        } else {
            MatrixDescriptor::Inline(matrix.entries().iter().map(Scalar::to_rational).collect())
        };
        Self {
            rows: matrix.rows(),
            cols: matrix.cols(),
            matrix: descriptor,
            policy: policy.into(),
            seed,
        }
    }

    /// Exact matrix described by the header.
    pub fn rational_matrix(&self) -> Result<PayoffMatrix<BigRational>, MatrixError> {
        match &self.matrix {
            MatrixDescriptor::Identity(n) => Ok(PayoffMatrix::identity(*n)),
            MatrixDescriptor::Inline(entries) => PayoffMatrix::new(self.rows, self.cols, entries.clone()),
        }
    }

    /// Floating-point matrix described by the header, for replaying float-mode runs.
    pub fn float_matrix(&self, tolerance: f64) -> Result<PayoffMatrix<f64>, MatrixError> {
        let entries = match &self.matrix {
            MatrixDescriptor::Identity(n) => return Ok(PayoffMatrix::identity(*n).with_tolerance(tolerance)),
            MatrixDescriptor::Inline(entries) => entries.iter().map(Scalar::to_f64).collect(),
        };
        Ok(PayoffMatrix::new(self.rows, self.cols, entries)?.with_tolerance(tolerance))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub header: TraceHeader,
    pub steps: Vec<Choice>,
}

impl Trace {
    pub fn new(header: TraceHeader, steps: Vec<Choice>) -> Self {
        Self { header, steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// First `len` steps.
    pub fn prefix(&self, len: usize) -> Self {
        Self {
            header: self.header.clone(),
            steps: self.steps[..len.min(self.steps.len())].to_vec(),
        }
    }
}

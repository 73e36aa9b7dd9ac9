use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::scalar::Scalar;

/// Default tie tolerance for floating-point games.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("matrix must have at least one row and one column (got {rows}x{cols})")]
    EmptyDimension { rows: usize, cols: usize },
    #[error("expected {expected} entries for a {rows}x{cols} matrix, got {actual}")]
    EntryCount {
        rows: usize,
        cols: usize,
        expected: usize,
        actual: usize,
    },
}

/// An `m x n` payoff matrix: entry `(i, j)` is what the column player pays
/// the row player when they play row `i` and column `j`.
///
/// Indices are 0-based in the API; external formats add one.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffMatrix<S> {
    rows: usize,
    cols: usize,
    entries: Vec<S>,
    identity: bool,
    tolerance: f64,
}

impl<S: Scalar> PayoffMatrix<S> {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<S>) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::EmptyDimension { rows, cols });
        }
        if entries.len() != rows * cols {
            return Err(MatrixError::EntryCount {
                rows,
                cols,
                expected: rows * cols,
                actual: entries.len(),
            });
        }
        let identity = rows == cols
            && entries.iter().enumerate().all(|(k, a)| {
                let want = if k / cols == k % cols { S::one() } else { S::zero() };
                *a == want
            });
        Ok(Self {
            rows,
            cols,
            entries,
            identity,
            tolerance: DEFAULT_TOLERANCE,
        })
    }

    /// Replaces the tie tolerance used by inexact scalars.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn entry(&self, row: usize, col: usize) -> &S {
        &self.entries[row * self.cols + col]
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn row(&self, row: usize) -> &[S] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    /// True when the matrix is `I_n` (square, ones on the diagonal, zeros elsewhere).
    pub fn is_identity(&self) -> bool {
        self.identity
    }
}

impl<S: Scalar> PayoffMatrix<S> {
    /// The identity game `I_n`.
    ///
    /// # Panics
    ///
    /// Panics if `n == 0`.
    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "identity game needs n >= 1");
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(if i == j { S::one() } else { S::zero() });
            }
        }
        Self {
            rows: n,
            cols: n,
            entries,
            identity: true,
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

impl PayoffMatrix<f64> {
    /// An `m x n` game with i.i.d. uniform `[0, 1)` entries drawn from a
    /// ChaCha8 stream seeded with `seed`.
    pub fn random_uniform(rows: usize, cols: usize, seed: u64) -> Result<Self, MatrixError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let entries = (0..rows * cols).map(|_| rng.gen::<f64>()).collect();
        Self::new(rows, cols, entries)
    }
}

impl<S: Scalar> PayoffMatrix<S> {
    /// Exact rational copy of this matrix.
    pub fn to_rational(&self) -> PayoffMatrix<BigRational> {
        PayoffMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(Scalar::to_rational).collect(),
            identity: self.identity,
            tolerance: self.tolerance,
        }
    }

    /// Integer copy, if every entry is an integer.
    pub fn to_integer(&self) -> Option<PayoffMatrix<BigInt>> {
        let entries = self
            .entries
            .iter()
            .map(|a| {
                let r = a.to_rational();
                r.is_integer().then(|| r.to_integer())
            })
            .collect::<Option<Vec<_>>>()?;
        Some(PayoffMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
            identity: self.identity,
            tolerance: self.tolerance,
        })
    }
}

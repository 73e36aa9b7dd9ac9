//! Fictitious play as a cumulative-payoff vector system.
//!
//! `U` (length `cols`) accumulates the rows of `A` the row player has chosen,
//! so `U = t x(t)^T A`; `V` (length `rows`) accumulates chosen columns, so
//! `V = t A y(t)`. A step may pick row `i` only if `V_i = max V` and column `j`
//! only if `U_j = min U`. Both players move from the same pre-step state.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::matrix::PayoffMatrix;
use crate::policy::TieBreakPolicy;
use crate::scalar::Scalar;
use crate::trace::{Choice, Trace, TraceHeader};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Row,
    Col,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Row => "row",
            Side::Col => "col",
        })
    }
}

/// 1-based index list for messages.
struct OneBased<'a>(&'a [usize]);

impl fmt::Display for OneBased<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("state is {state_rows}x{state_cols} but matrix is {rows}x{cols}")]
    DimensionMismatch {
        rows: usize,
        cols: usize,
        state_rows: usize,
        state_cols: usize,
    },
    #[error("choice index out of range at step {t}: {side} {}", index + 1)]
    IndexOutOfRange { t: u64, side: Side, index: usize },
    /// `index` and `tie_set` are 0-based; `t` is the 1-based step being taken.
    #[error("step {t}: {side} choice {} is not a best response (ties {})", index + 1, OneBased(tie_set))]
    InvalidChoice {
        t: u64,
        side: Side,
        index: usize,
        tie_set: Vec<usize>,
    },
    #[error("scripted policy exhausted after {t} steps")]
    ScriptExhausted { t: u64 },
    #[error("normalized gap is undefined at t = 0")]
    ZeroSteps,
}

/// State of a dynamic after `t` steps.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicState<S> {
    t: u64,
    u: Vec<S>,
    v: Vec<S>,
    row_counts: Vec<u64>,
    col_counts: Vec<u64>,
}

impl<S: Scalar> DynamicState<S> {
    /// The all-zero state at `t = 0`.
    pub fn new(matrix: &PayoffMatrix<S>) -> Self {
        Self {
            t: 0,
            u: alloc::vec![S::zero(); matrix.cols()],
            v: alloc::vec![S::zero(); matrix.rows()],
            row_counts: alloc::vec![0; matrix.rows()],
            col_counts: alloc::vec![0; matrix.cols()],
        }
    }

    /// Rebuilds a state from play counts using `U = counts_row^T A`, `V = A counts_col`.
    pub fn from_counts(
        matrix: &PayoffMatrix<S>,
        row_counts: Vec<u64>,
        col_counts: Vec<u64>,
    ) -> Result<Self, EngineError> {
        if row_counts.len() != matrix.rows() || col_counts.len() != matrix.cols() {
            return Err(EngineError::DimensionMismatch {
                rows: matrix.rows(),
                cols: matrix.cols(),
                state_rows: row_counts.len(),
                state_cols: col_counts.len(),
            });
        }
        let t: u64 = row_counts.iter().sum();
        let mut u = alloc::vec![S::zero(); matrix.cols()];
        let mut v = alloc::vec![S::zero(); matrix.rows()];
        for i in 0..matrix.rows() {
            for j in 0..matrix.cols() {
                let a = matrix.entry(i, j);
                u[j].add_assign_ref(&a.mul_count(row_counts[i]));
                v[i].add_assign_ref(&a.mul_count(col_counts[j]));
            }
        }
        Ok(Self {
            t,
            u,
            v,
            row_counts,
            col_counts,
        })
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn u(&self) -> &[S] {
        &self.u
    }

    pub fn v(&self) -> &[S] {
        &self.v
    }

    pub fn row_counts(&self) -> &[u64] {
        &self.row_counts
    }

    pub fn col_counts(&self) -> &[u64] {
        &self.col_counts
    }

    fn check_dims(&self, matrix: &PayoffMatrix<S>) -> Result<(), EngineError> {
        if self.v.len() != matrix.rows() || self.u.len() != matrix.cols() {
            return Err(EngineError::DimensionMismatch {
                rows: matrix.rows(),
                cols: matrix.cols(),
                state_rows: self.v.len(),
                state_cols: self.u.len(),
            });
        }
        Ok(())
    }

    pub fn max_v(&self) -> &S {
        extreme(&self.v, Ordering::Greater)
    }

    pub fn min_u(&self) -> &S {
        extreme(&self.u, Ordering::Less)
    }

    /// `max V - min U`.
    pub fn gap(&self) -> S {
        self.max_v().sub_ref(self.min_u())
    }

    /// `(max V - min U) / t`, the duality gap of the empirical strategies.
    pub fn normalized_gap(&self) -> Result<BigRational, EngineError> {
        if self.t == 0 {
            return Err(EngineError::ZeroSteps);
        }
        Ok(self.gap().to_rational() / BigRational::from_integer(BigInt::from(self.t)))
    }

    /// Rows attaining `max V` and columns attaining `min U`, ascending.
    pub fn best_response_sets(&self, matrix: &PayoffMatrix<S>) -> Result<(Vec<usize>, Vec<usize>), EngineError> {
        self.check_dims(matrix)?;
        let tol = matrix.tolerance();
        let max_v = self.max_v();
        let min_u = self.min_u();
        let rows = indices_where(&self.v, |x| x.approx_cmp(max_v, tol) == Ordering::Equal);
        let cols = indices_where(&self.u, |x| x.approx_cmp(min_u, tol) == Ordering::Equal);
        Ok((rows, cols))
    }

    /// One step with choices supplied by `policy`.
    pub fn step(&mut self, matrix: &PayoffMatrix<S>, policy: &mut TieBreakPolicy) -> Result<Choice, EngineError> {
        let (rows, cols) = self.best_response_sets(matrix)?;
        let choice = policy
            .choose(self, matrix, &rows, &cols)
            .ok_or(EngineError::ScriptExhausted { t: self.t })?;
        self.check_membership(choice, &rows, &cols)?;
        self.apply(matrix, choice);
        Ok(choice)
    }

    /// One step with fixed choices, rejected unless both are best responses.
    /// On error the state is unchanged.
    pub fn step_scripted(&mut self, matrix: &PayoffMatrix<S>, choice: Choice) -> Result<(), EngineError> {
        let (rows, cols) = self.best_response_sets(matrix)?;
        if choice.row >= matrix.rows() {
            return Err(EngineError::IndexOutOfRange {
                t: self.t + 1,
                side: Side::Row,
                index: choice.row,
            });
        }
        if choice.col >= matrix.cols() {
            return Err(EngineError::IndexOutOfRange {
                t: self.t + 1,
                side: Side::Col,
                index: choice.col,
            });
        }
        self.check_membership(choice, &rows, &cols)?;
        self.apply(matrix, choice);
        Ok(())
    }

    fn check_membership(&self, choice: Choice, rows: &[usize], cols: &[usize]) -> Result<(), EngineError> {
        if rows.binary_search(&choice.row).is_err() {
            return Err(EngineError::InvalidChoice {
                t: self.t + 1,
                side: Side::Row,
                index: choice.row,
                tie_set: rows.to_vec(),
            });
        }
        if cols.binary_search(&choice.col).is_err() {
            return Err(EngineError::InvalidChoice {
                t: self.t + 1,
                side: Side::Col,
                index: choice.col,
                tie_set: cols.to_vec(),
            });
        }
        Ok(())
    }

    fn apply(&mut self, matrix: &PayoffMatrix<S>, choice: Choice) {
        for (u, a) in self.u.iter_mut().zip(matrix.row(choice.row)) {
            u.add_assign_ref(a);
        }
        for (i, v) in self.v.iter_mut().enumerate() {
            v.add_assign_ref(matrix.entry(i, choice.col));
        }
        self.row_counts[choice.row] += 1;
        self.col_counts[choice.col] += 1;
        self.t += 1;
    }
}

fn extreme<S: Scalar>(xs: &[S], keep: Ordering) -> &S {
    let mut best = &xs[0];
    for x in &xs[1..] {
        if x.approx_cmp(best, 0.0) == keep {
            best = x;
        }
    }
    best
}

fn indices_where<S>(xs: &[S], pred: impl Fn(&S) -> bool) -> Vec<usize> {
    xs.iter().enumerate().filter(|(_, x)| pred(x)).map(|(k, _)| k).collect()
}

/// Runs `steps` steps from the zero state.
pub fn run<S: Scalar>(
    matrix: &PayoffMatrix<S>,
    policy: &mut TieBreakPolicy,
    steps: u64,
) -> Result<(Trace, DynamicState<S>), EngineError> {
    let mut state = DynamicState::new(matrix);
    let mut choices = Vec::with_capacity(steps.min(1 << 24) as usize);
    for _ in 0..steps {
        choices.push(state.step(matrix, policy)?);
    }
    let header = TraceHeader::for_matrix(matrix, policy.name(), policy.seed());
    Ok((Trace::new(header, choices), state))
}

/// Replays `choices` from the zero state, certifying every step.
pub fn replay<S: Scalar>(matrix: &PayoffMatrix<S>, choices: &[Choice]) -> Result<DynamicState<S>, EngineError> {
    let mut state = DynamicState::new(matrix);
    for &c in choices {
        state.step_scripted(matrix, c)?;
    }
    Ok(state)
}

//! Certificates that a trace is a valid fictitious-play execution.
//!
//! Validation always replays from zero vectors; annotations and any values
//! recorded alongside a trace are never trusted.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::engine::{DynamicState, EngineError, Side};
use crate::matrix::PayoffMatrix;
use crate::scalar::Scalar;
use crate::schedule::Schedule;
use crate::trace::{Choice, MatrixDescriptor, Trace};

pub const CHECK_SUMS: &str = "sum_u_eq_sum_v_eq_t";
pub const CHECK_RECONSTRUCTION: &str = "counts_reconstruct_u_v";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ValidateError {
    #[error("trace header is {trace_rows}x{trace_cols} but matrix is {rows}x{cols}")]
    HeaderMismatch {
        rows: usize,
        cols: usize,
        trace_rows: usize,
        trace_cols: usize,
    },
    #[error("permutation requires an identity-game trace")]
    NotIdentity,
    #[error("not a permutation of 1..{n}")]
    BadPermutation { n: usize },
}

/// First step whose choice is not a best response. Indices are 0-based;
/// `t` is the 1-based step number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub t: u64,
    pub side: Side,
    pub chosen_index: usize,
    pub tie_set: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub ok: bool,
    /// Steps examined, including a failing one.
    pub steps_checked: u64,
    pub first_violation: Option<Violation>,
    pub structural_checks: BTreeMap<String, bool>,
}

impl ValidationReport {
    fn finish(
        steps_checked: u64,
        first_violation: Option<Violation>,
        structural_checks: BTreeMap<String, bool>,
    ) -> Self {
        let ok = first_violation.is_none() && structural_checks.values().all(|&b| b);
        Self {
            ok,
            steps_checked,
            first_violation,
            structural_checks,
        }
    }
}

fn violation_from(err: EngineError, ties: impl FnOnce(Side) -> Vec<usize>) -> Violation {
    match err {
        EngineError::InvalidChoice {
            t,
            side,
            index,
            tie_set,
        } => Violation {
            t,
            side,
            chosen_index: index,
            tie_set,
        },
        EngineError::IndexOutOfRange { t, side, index } => Violation {
            t,
            side,
            chosen_index: index,
            tie_set: ties(side),
        },
        other => unreachable!("replay cannot fail with {other:?}"),
    }
}

/// Replays `trace` on `matrix` with per-step certification.
///
/// On identity games it also checks, after every step, that
/// `sum(U) = sum(V) = t` and that `U`, `V` equal the play counts.
pub fn validate_trace<S: Scalar>(matrix: &PayoffMatrix<S>, trace: &Trace) -> Result<ValidationReport, ValidateError> {
    if trace.header.rows != matrix.rows() || trace.header.cols != matrix.cols() {
        return Err(ValidateError::HeaderMismatch {
            rows: matrix.rows(),
            cols: matrix.cols(),
            trace_rows: trace.header.rows,
            trace_cols: trace.header.cols,
        });
    }
    let identity = matrix.is_identity();
    let mut sums_ok = true;
    let mut reconstruct_ok = true;
    let mut state = DynamicState::new(matrix);
    let mut violation = None;
    for &choice in &trace.steps {
        if let Err(e) = state.step_scripted(matrix, choice) {
            let (rows, cols) = state.best_response_sets(matrix).expect("dimensions checked");
            violation = Some(violation_from(e, |side| match side {
                Side::Row => rows,
                Side::Col => cols,
            }));
            break;
        }
        if identity {
            sums_ok &= identity_sums_hold(&state);
            reconstruct_ok &= identity_counts_match(&state);
        }
    }
    let steps_checked = violation.as_ref().map_or(state.t(), |v| v.t);
    if !identity {
        let rebuilt = DynamicState::from_counts(matrix, state.row_counts().to_vec(), state.col_counts().to_vec())
            .expect("dimensions checked");
        // Floating-point sums depend on addition order; only exact back-ends can be compared.
        reconstruct_ok = !S::EXACT || (rebuilt.u() == state.u() && rebuilt.v() == state.v());
    }
    let mut checks = BTreeMap::new();
    if identity {
        checks.insert(CHECK_SUMS.into(), sums_ok);
    }
    checks.insert(CHECK_RECONSTRUCTION.into(), reconstruct_ok);
    Ok(ValidationReport::finish(steps_checked, violation, checks))
}

fn identity_sums_hold<S: Scalar>(state: &DynamicState<S>) -> bool {
    let t = S::one().mul_count(state.t());
    let sum = |xs: &[S]| {
        xs.iter().fold(S::zero(), |mut acc, x| {
            acc.add_assign_ref(x);
            acc
        })
    };
    sum(state.u()) == t && sum(state.v()) == t
}

/// On `I_n`, `U_j` counts plays of row `j` and `V_i` plays of column `i`.
fn identity_counts_match<S: Scalar>(state: &DynamicState<S>) -> bool {
    let eq = |x: &S, c: u64| *x == S::one().mul_count(c);
    state.u().iter().zip(state.row_counts()).all(|(x, &c)| eq(x, c))
        && state.v().iter().zip(state.col_counts()).all(|(x, &c)| eq(x, c))
}

/// Certifies a run-length schedule for `I_n` by exact run-wise replay.
pub fn validate_schedule(schedule: &Schedule) -> ValidationReport {
    let mut d = crate::identity::IdentityDynamic::new(schedule.n());
    let mut violation = None;
    let mut sums_ok = true;
    let mut reconstruct_ok = true;
    let mut row_counts = alloc::vec![0u64; schedule.n()];
    let mut col_counts = alloc::vec![0u64; schedule.n()];
    for &run in schedule.runs() {
        if let Err(e) = d.apply_run(run) {
            let (rows, cols) = (d.row_ties(), d.col_ties());
            violation = Some(violation_from(e, |side| match side {
                Side::Row => rows,
                Side::Col => cols,
            }));
            break;
        }
        sums_ok &= d.u().iter().sum::<u64>() == d.t() && d.v().iter().sum::<u64>() == d.t();
        row_counts[run.row] += run.len;
        col_counts[run.col] += run.len;
        reconstruct_ok &= d.u()[run.row] == row_counts[run.row] && d.v()[run.col] == col_counts[run.col];
    }
    let steps_checked = violation.as_ref().map_or(d.t(), |v| v.t);
    let mut checks = BTreeMap::new();
    checks.insert(CHECK_SUMS.into(), sums_ok);
    checks.insert(
        CHECK_RECONSTRUCTION.into(),
        reconstruct_ok && d.u() == row_counts && d.v() == col_counts,
    );
    ValidationReport::finish(steps_checked, violation, checks)
}

/// Applies a common relabeling `sigma` (0-based, `k -> sigma[k]`) to every
/// row and column choice of an identity-game trace.
pub fn permute_trace(trace: &Trace, sigma: &[usize]) -> Result<Trace, ValidateError> {
    let n = match trace.header.matrix {
        MatrixDescriptor::Identity(n) => n,
        MatrixDescriptor::Inline(_) => return Err(ValidateError::NotIdentity),
    };
    check_permutation(sigma, n)?;
    let steps = trace
        .steps
        .iter()
        .map(|c| Choice::new(sigma[c.row], sigma[c.col]))
        .collect();
    Ok(Trace::new(trace.header.clone(), steps))
}

fn check_permutation(sigma: &[usize], n: usize) -> Result<(), ValidateError> {
    let mut seen = alloc::vec![false; n];
    if sigma.len() != n {
        return Err(ValidateError::BadPermutation { n });
    }
    for &k in sigma {
        if k >= n || seen[k] {
            return Err(ValidateError::BadPermutation { n });
        }
        seen[k] = true;
    }
    Ok(())
}

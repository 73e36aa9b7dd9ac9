//! Tie-breaking rules for choosing among best responses.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::engine::DynamicState;
use crate::matrix::PayoffMatrix;
use crate::scalar::Scalar;
use crate::trace::Choice;

/// Selects one row from the row player's tie set and one column from the
/// column player's tie set.
#[derive(Debug, Clone)]
pub enum TieBreakPolicy {
    /// Smallest index in each tie set.
    Lexicographic,
    /// Uniform choice from each tie set, driven by a ChaCha8 stream.
    SeededRandom { seed: u64, rng: Box<ChaCha8Rng> },
    /// Pair maximizing the gap after the step; residual ties lexicographic.
    GreedyGap,
    /// Replays fixed choices; the engine rejects any that are not best responses.
    Scripted { steps: Vec<Choice>, cursor: usize },
}

impl TieBreakPolicy {
    pub fn seeded_random(seed: u64) -> Self {
        Self::SeededRandom {
            seed,
            rng: Box::new(ChaCha8Rng::seed_from_u64(seed)),
        }
    }

    pub fn scripted(steps: Vec<Choice>) -> Self {
        Self::Scripted { steps, cursor: 0 }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Lexicographic => "lexicographic",
            Self::SeededRandom { .. } => "seeded-random",
            Self::GreedyGap => "greedy-gap",
            Self::Scripted { .. } => "scripted",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Self::SeededRandom { seed, .. } => Some(*seed),
            _ => None,
        }
    }

    /// Picks the next pair. `None` means a scripted policy ran out of steps.
    ///
    /// Both tie sets must be non-empty and sorted ascending.
    pub fn choose<S: Scalar>(
        &mut self,
        state: &DynamicState<S>,
        matrix: &PayoffMatrix<S>,
        row_ties: &[usize],
        col_ties: &[usize],
    ) -> Option<Choice> {
        match self {
            Self::Lexicographic => Some(Choice::new(row_ties[0], col_ties[0])),
            Self::SeededRandom { rng, .. } => {
                let row = row_ties[rng.gen_range(0..row_ties.len())];
                let col = col_ties[rng.gen_range(0..col_ties.len())];
                Some(Choice::new(row, col))
            }
            Self::GreedyGap => Some(greedy_gap(state, matrix, row_ties, col_ties)),
            Self::Scripted { steps, cursor } => {
                let choice = steps.get(*cursor).copied()?;
                *cursor += 1;
                Some(choice)
            }
        }
    }
}

/// The gap after a step is `max(V + A e_j) - min(U + e_i^T A)`, which splits
/// into a column part and a row part; each is optimized on its own.
fn greedy_gap<S: Scalar>(
    state: &DynamicState<S>,
    matrix: &PayoffMatrix<S>,
    row_ties: &[usize],
    col_ties: &[usize],
) -> Choice {
    let tol = matrix.tolerance();

    let mut best_col = col_ties[0];
    let mut best_max = max_after_col(state, matrix, best_col);
    for &j in &col_ties[1..] {
        let candidate = max_after_col(state, matrix, j);
        if candidate.approx_cmp(&best_max, tol) == Ordering::Greater {
            best_col = j;
            best_max = candidate;
        }
    }

    let mut best_row = row_ties[0];
    let mut best_min = min_after_row(state, matrix, best_row);
    for &i in &row_ties[1..] {
        let candidate = min_after_row(state, matrix, i);
        if candidate.approx_cmp(&best_min, tol) == Ordering::Less {
            best_row = i;
            best_min = candidate;
        }
    }

    Choice::new(best_row, best_col)
}

fn max_after_col<S: Scalar>(state: &DynamicState<S>, matrix: &PayoffMatrix<S>, col: usize) -> S {
    let mut best: Option<S> = None;
    for (i, v) in state.v().iter().enumerate() {
        let mut next = v.clone();
        next.add_assign_ref(matrix.entry(i, col));
        match &best {
            Some(b) if next.approx_cmp(b, 0.0) != Ordering::Greater => {}
            _ => best = Some(next),
        }
    }
    best.expect("matrix has at least one row")
}

fn min_after_row<S: Scalar>(state: &DynamicState<S>, matrix: &PayoffMatrix<S>, row: usize) -> S {
    let mut best: Option<S> = None;
    for (j, u) in state.u().iter().enumerate() {
        let mut next = u.clone();
        next.add_assign_ref(matrix.entry(row, j));
        match &best {
            Some(b) if next.approx_cmp(b, 0.0) != Ordering::Less => {}
            _ => best = Some(next),
        }
    }
    best.expect("matrix has at least one column")
}

//! Fast exact replay for identity games `I_n`.
//!
//! For `I_n`, `U_j` is the number of times row `j` was played and `V_i` the
//! number of times column `i` was played, so every component is bounded by
//! `t` and plain `u64` counters are exact for any trace that fits in memory.
//! Runs of identical choices are certified in `O(n)` time regardless of
//! their length.

use alloc::vec::Vec;

use crate::engine::{EngineError, Side};
use crate::trace::Choice;

/// A run of `len` identical steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Run {
    pub row: usize,
    pub col: usize,
    pub len: u64,
}

impl Run {
    pub const fn new(row: usize, col: usize, len: u64) -> Self {
        Self { row, col, len }
    }

    pub fn choice(&self) -> Choice {
        Choice::new(self.row, self.col)
    }
}

/// A dynamic for `I_n` with `u64` components.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IdentityDynamic {
    t: u64,
    u: Vec<u64>,
    v: Vec<u64>,
}

impl IdentityDynamic {
    pub fn new(n: usize) -> Self {
        Self {
            t: 0,
            u: alloc::vec![0; n],
            v: alloc::vec![0; n],
        }
    }

    pub fn from_parts(u: Vec<u64>, v: Vec<u64>) -> Self {
        assert_eq!(u.len(), v.len());
        let t = u.iter().sum();
        Self { t, u, v }
    }

    pub fn n(&self) -> usize {
        self.u.len()
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn u(&self) -> &[u64] {
        &self.u
    }

    pub fn v(&self) -> &[u64] {
        &self.v
    }

    pub fn max_v(&self) -> u64 {
        self.v.iter().copied().max().unwrap_or(0)
    }

    pub fn min_u(&self) -> u64 {
        self.u.iter().copied().min().unwrap_or(0)
    }

    /// `max V - min U`; never negative on `I_n` because `max V >= t/n >= min U`.
    pub fn gap(&self) -> u64 {
        self.max_v() - self.min_u()
    }

    pub fn row_ties(&self) -> Vec<usize> {
        let m = self.max_v();
        (0..self.n()).filter(|&i| self.v[i] == m).collect()
    }

    pub fn col_ties(&self) -> Vec<usize> {
        let m = self.min_u();
        (0..self.n()).filter(|&j| self.u[j] == m).collect()
    }

    pub fn step(&mut self, choice: Choice) -> Result<(), EngineError> {
        self.apply_run(Run::new(choice.row, choice.col, 1))
    }

    /// Applies `run.len` copies of one choice, certifying every one of them.
    ///
    /// On failure nothing is applied and the error names the first offending
    /// step exactly as per-step replay would.
    pub fn apply_run(&mut self, run: Run) -> Result<(), EngineError> {
        let n = self.n();
        for (side, index) in [(Side::Row, run.row), (Side::Col, run.col)] {
            if index >= n {
                return Err(EngineError::IndexOutOfRange {
                    t: self.t + 1,
                    side,
                    index,
                });
            }
        }
        if run.len == 0 {
            return Ok(());
        }
        if let Some((offset, side)) = self.first_failure(run) {
            let mut at = self.clone();
            at.advance(run.row, run.col, offset);
            let (index, tie_set) = match side {
                Side::Row => (run.row, at.row_ties()),
                Side::Col => (run.col, at.col_ties()),
            };
            return Err(EngineError::InvalidChoice {
                t: at.t + 1,
                side,
                index,
                tie_set,
            });
        }
        self.advance(run.row, run.col, run.len);
        Ok(())
    }

    /// Offset (within the run) of the first step whose row or column choice
    /// is not a best response, and which side fails there. Row is reported
    /// before column at the same offset.
    fn first_failure(&self, run: Run) -> Option<(u64, Side)> {
        let (i, j, len) = (run.row, run.col, run.len);

        // Row i must attain max V while V_j grows by one per step.
        let row_fail = {
            let vi = self.v[i];
            let others_ok = (0..self.n()).all(|k| k == j || self.v[k] <= vi);
            if !others_ok {
                Some(0)
            } else if j == i {
                None
            } else if self.v[j] > vi {
                Some(0)
            } else {
                // Fails once V_j + s > V_i, i.e. at s = V_i - V_j + 1.
                let s = vi - self.v[j] + 1;
                (s < len).then_some(s)
            }
        };

        // Column j must attain min U while U_i grows by one per step.
        let col_fail = {
            let uj = self.u[j];
            if i == j {
                let others_min = (0..self.n()).filter(|&k| k != j).map(|k| self.u[k]).min();
                match others_min {
                    None => None,
                    Some(m) if uj > m => Some(0),
                    // Fails once U_j + s > m.
                    Some(m) => {
                        let s = m - uj + 1;
                        (s < len).then_some(s)
                    }
                }
            } else if (0..self.n()).any(|k| self.u[k] < uj) {
                Some(0)
            } else {
                None
            }
        };

        match (row_fail, col_fail) {
            (Some(r), Some(c)) if c < r => Some((c, Side::Col)),
            (Some(r), _) => Some((r, Side::Row)),
            (None, Some(c)) => Some((c, Side::Col)),
            (None, None) => None,
        }
    }

    /// Applies a run without any checks.
    pub fn advance(&mut self, row: usize, col: usize, len: u64) {
        self.u[row] += len;
        self.v[col] += len;
        self.t += len;
    }

    /// Relabels components: component `k` moves to `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut u = alloc::vec![0; self.n()];
        let mut v = alloc::vec![0; self.n()];
        for k in 0..self.n() {
            u[perm[k]] = self.u[k];
            v[perm[k]] = self.v[k];
        }
        Self { t: self.t, u, v }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::DynamicState;
    use crate::matrix::PayoffMatrix;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    /// Per-step reference: expand the run and use the generic engine.
    fn reference(u: &[u64], v: &[u64], run: Run) -> Result<DynamicState<BigInt>, EngineError> {
        let n = u.len();
        let a = PayoffMatrix::<BigInt>::identity(n);
        let mut s = DynamicState::from_counts(&a, u.to_vec(), v.to_vec()).unwrap();
        for _ in 0..run.len {
            s.step_scripted(&a, run.choice())?;
        }
        Ok(s)
    }

    proptest! {
        #[test]
        fn run_certificate_matches_per_step_replay(
            n in 2usize..5,
            seed in proptest::collection::vec(0u64..6, 8),
            row in 0usize..5,
            col in 0usize..5,
            len in 1u64..10,
        ) {
            let row = row % n;
            let col = col % n;
            // Any pair of count vectors with equal sums is a reachable-looking start;
            // the certificate only depends on the values.
            let u: Vec<u64> = seed[..n].to_vec();
            let mut v: Vec<u64> = seed[4..4 + n].to_vec();
            let su: u64 = u.iter().sum();
            let sv: u64 = v.iter().sum();
            if sv < su { v[0] += su - sv; } else { let mut d = sv - su; for x in v.iter_mut() { let take = d.min(*x); *x -= take; d -= take; } }
            let mut fast = IdentityDynamic::from_parts(u.clone(), v.clone());
            let got = fast.apply_run(Run::new(row, col, len));
            match reference(&u, &v, Run::new(row, col, len)) {
                Ok(s) => {
                    prop_assert!(got.is_ok());
                    let to_u64 = |xs: &[BigInt]| xs.iter().map(|x| u64::try_from(x).unwrap()).collect::<Vec<_>>();
                    prop_assert_eq!(fast.u().to_vec(), to_u64(s.u()));
                    prop_assert_eq!(fast.v().to_vec(), to_u64(s.v()));
                }
                Err(e) => {
                    // Reference error t is relative to from_counts' t, which equals ours.
                    prop_assert_eq!(got, Err(e));
                }
            }
        }
    }

    #[test]
    fn long_run_is_certified_in_one_call() {
        let mut d = IdentityDynamic::from_parts(alloc::vec![5, 5], alloc::vec![3, 7]);
        d.apply_run(Run::new(1, 0, 4)).unwrap();
        assert_eq!(d.v(), &[7, 7]);
        let err = d.clone().apply_run(Run::new(1, 0, 2)).unwrap_err();
        // Second step of the run: V = [8, 7], row 2 no longer maximal.
        assert!(matches!(
            err,
            EngineError::InvalidChoice {
                t: 16,
                side: Side::Row,
                index: 1,
                ..
            }
        ));
    }
}

//! Run-length encoded schedules for identity games.

use alloc::vec::Vec;

use crate::engine::EngineError;
use crate::identity::{IdentityDynamic, Run};
use crate::trace::{Choice, MatrixDescriptor, Trace, TraceHeader};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    A,
    B,
}

/// Position markers. `t` is the number of steps already taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Annotation {
    EpochStart { epoch: u32, t: u64, big_t: u64, gap: u64 },
    PhaseStart { phase: Phase, t: u64 },
}

impl Annotation {
    pub fn t(&self) -> u64 {
        match *self {
            Annotation::EpochStart { t, .. } | Annotation::PhaseStart { t, .. } => t,
        }
    }
}

/// A sequence of choices for `I_n`, stored as maximal runs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Schedule {
    n: usize,
    runs: Vec<Run>,
    len: u64,
    annotations: Vec<Annotation>,
}

impl Schedule {
    pub fn new(n: usize) -> Self {
        Self { n, ..Self::default() }
    }

    pub fn from_choices(n: usize, choices: impl IntoIterator<Item = Choice>) -> Self {
        let mut s = Self::new(n);
        for c in choices {
            s.push(Run::new(c.row, c.col, 1));
        }
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of steps.
    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    pub fn annotations(&self) -> &[Annotation] {
        &self.annotations
    }

    pub fn annotate(&mut self, annotation: Annotation) {
        self.annotations.push(annotation);
    }

    /// Appends a run, merging it into the previous one when the choices agree.
    pub fn push(&mut self, run: Run) {
        if run.len == 0 {
            return;
        }
        self.len += run.len;
        if let Some(last) = self.runs.last_mut() {
            if last.row == run.row && last.col == run.col {
                last.len += run.len;
                return;
            }
        }
        self.runs.push(run);
    }

    pub fn extend_runs(&mut self, runs: impl IntoIterator<Item = Run>) {
        for r in runs {
            self.push(r);
        }
    }

    /// Expanded per-step choices.
    pub fn choices(&self) -> impl Iterator<Item = Choice> + '_ {
        self.runs
            .iter()
            .flat_map(|r| core::iter::repeat_n(r.choice(), r.len as usize))
    }

    /// Runs covering steps `from..to` (0-based step positions), split at the ends.
    pub fn slice(&self, from: u64, to: u64) -> Vec<Run> {
        let mut out = Vec::new();
        let mut pos = 0u64;
        for r in &self.runs {
            let (start, end) = (pos, pos + r.len);
            pos = end;
            if end <= from {
                continue;
            }
            if start >= to {
                break;
            }
            let lo = start.max(from);
            let hi = end.min(to);
            if hi <= lo {
                continue;
            }
            out.push(Run::new(r.row, r.col, hi - lo));
        }
        out
    }

    /// Applies `perm` (component `k` becomes `perm[k]`) to every choice.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut s = Self::new(self.n);
        s.extend_runs(self.runs.iter().map(|r| Run::new(perm[r.row], perm[r.col], r.len)));
        s.annotations = self.annotations.clone();
        s
    }

    /// Replays from zero vectors, certifying every step.
    pub fn replay(&self) -> Result<IdentityDynamic, EngineError> {
        let mut d = IdentityDynamic::new(self.n);
        for &r in &self.runs {
            d.apply_run(r)?;
        }
        Ok(d)
    }

    /// Replays the first `t` steps without certification.
    pub fn state_at(&self, t: u64) -> IdentityDynamic {
        let mut d = IdentityDynamic::new(self.n);
        for r in self.slice(0, t) {
            d.advance(r.row, r.col, r.len);
        }
        d
    }

    pub fn to_trace(&self, policy: &str) -> Trace {
        let header = TraceHeader {
            rows: self.n,
            cols: self.n,
            matrix: MatrixDescriptor::Identity(self.n),
            policy: policy.into(),
            seed: None,
        };
        Trace::new(header, self.choices().collect())
    }
}

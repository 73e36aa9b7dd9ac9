//! Slow fictitious-play schedules for identity games.
//!
//! All schedules here are built in run-length form and certified by exact
//! replay before they are returned: every step's row choice attains `max V`
//! and every column choice attains `min U`.
//!
//! Dimension convention: `n` is always the size of the identity matrix the
//! schedule is for. The inductive main dynamic for `I_n` embeds dynamics for
//! `I_{n-1}`.
//!
//! Terminology used throughout:
//!
//! * A *padding* dynamic reaches `U = [k, .., k]` with `V = [k-1, k, .., k, k+1]`
//!   after `n k` steps, for any `k >= 1`.
//! * The *main* dynamic for `I_2` reaches `U = [k(2k-1), k(2k-1)]` with gap
//!   `2k-1` after `2k(2k-1)` steps.
//! * The *main* dynamic for `I_n`, `n >= 3`, proceeds in epochs. Epoch `i`
//!   starts at `t = n T_i` with all of `U` equal to `T_i` and gap `G_i`.
//! * A *part-2* dynamic for `(n, T)` reaches `U = [T, .., T]` after `n T`
//!   steps with gap `Θ(T^((n-1)/n))`, by padding first and then replaying a
//!   prefix of the main dynamic shifted up.

use alloc::boxed::Box;
use alloc::vec::Vec;

use num_integer::Roots;

use crate::engine::EngineError;
use crate::identity::{IdentityDynamic, Run};
use crate::schedule::{Annotation, Phase, Schedule};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstructionError {
    #[error("{name} must be at least {min}, got {value}")]
    OutOfRange { name: &'static str, value: u64, min: u64 },
    #[error("constructed schedule failed certification: {0}")]
    Certificate(#[from] EngineError),
    #[error("constructed schedule ended in the wrong state")]
    WrongTerminalState,
}

fn at_least(name: &'static str, value: u64, min: u64) -> Result<(), ConstructionError> {
    if value < min {
        Err(ConstructionError::OutOfRange { name, value, min })
    } else {
        Ok(())
    }
}

/// Which component of `V` ends low in an `I_2` padding dynamic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// `V = [k-1, k+1]`.
    V1Low,
    /// `V = [k+1, k-1]`.
    V1High,
}

/// Per-epoch bookkeeping of the main dynamic for `I_n`, `n >= 3`.
///
/// `q` is `V` sorted ascending and `sigma[c]` is the physical component
/// holding canonical component `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpochRecord {
    pub index: u32,
    /// Step count at the epoch start, `n T_i`.
    pub t: u64,
    /// Common value of every `U` component.
    pub p: u64,
    pub q: Vec<u64>,
    /// Length of phase A, `n (Q_n - P)`; also the size of the embedded sub-dynamic.
    pub r: u64,
    /// Final `V` of the embedded `I_{n-1}` dynamic; `None` for the last epoch, not yet played.
    pub s: Option<Vec<u64>>,
    pub big_t: u64,
    pub gap: u64,
    pub sigma: Vec<usize>,
}

/// 1-based run literal, with strategies numbered from 1.
fn r1(row: usize, col: usize, len: u64) -> Run {
    Run::new(row - 1, col - 1, len)
}

/// Pushes the (s, s+1) staircase for s in `from..=to` (1-based), if non-empty.
fn staircase(out: &mut Vec<Run>, from: usize, to: usize) {
    for s in from..=to {
        out.push(r1(s, s + 1, 1));
    }
}

fn certify(schedule: &Schedule) -> Result<IdentityDynamic, ConstructionError> {
    Ok(schedule.replay()?)
}

fn low_high(v: &[u64]) -> (usize, usize) {
    let order = canonical_order(v);
    (order[0], order[v.len() - 1])
}

/// Components sorted by `V` value, ties by index: `order[c]` is the physical
/// component at canonical position `c`.
pub fn canonical_order(v: &[u64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by_key(|&k| (v[k], k));
    order
}

/// Inverse of `canonical_order`: maps physical components to canonical ones.
fn canonicalizing_perm(v: &[u64]) -> Vec<usize> {
    let order = canonical_order(v);
    let mut perm = alloc::vec![0; v.len()];
    for (c, &k) in order.iter().enumerate() {
        perm[k] = c;
    }
    perm
}

/// Permutation sending the start format's low/high/middle components to the
/// end format's, middles in ascending order.
fn format_perm(n: usize, start: (usize, usize), end: (usize, usize)) -> Vec<usize> {
    let mut perm = alloc::vec![0; n];
    perm[start.0] = end.0;
    perm[start.1] = end.1;
    let from = (0..n).filter(|&k| k != start.0 && k != start.1);
    let to = (0..n).filter(|&k| k != end.0 && k != end.1);
    for (a, b) in from.zip(to) {
        perm[a] = b;
    }
    perm
}

/// Prefix, then `reps` copies of a periodic block. Each copy is relabeled so
/// its low/high components line up with where the previous copy left them.
fn periodic(n: usize, prefix: &[Run], block: &[Run], reps: u64) -> Schedule {
    let mut s = Schedule::new(n);
    s.extend_runs(prefix.iter().copied());
    let start = s.state_at(s.len());
    let mut end = start.clone();
    for r in block {
        end.advance(r.row, r.col, r.len);
    }
    let step = format_perm(n, low_high(start.v()), low_high(end.v()));
    let mut frame: Vec<usize> = (0..n).collect();
    for _ in 0..reps {
        s.extend_runs(block.iter().map(|r| Run::new(frame[r.row], frame[r.col], r.len)));
        frame = step.iter().map(|&x| frame[x]).collect();
    }
    s
}

/// Padding dynamic for `I_2` with `U(2k) = [k, k]`.
pub fn padding_i2(k: u64, orientation: Orientation) -> Result<Schedule, ConstructionError> {
    at_least("k", k, 1)?;
    let s = padding_i2_unchecked(k, orientation);
    let d = certify(&s)?;
    if d.u() != [k, k] {
        return Err(ConstructionError::WrongTerminalState);
    }
    Ok(s)
}

fn padding_i2_unchecked(k: u64, orientation: Orientation) -> Schedule {
    // Both dynamics continue with the same four-step block, swapping
    // the two strategies on every repetition.
    let block = [r1(2, 1, 2), r1(1, 1, 2)];
    let s = if k % 2 == 1 {
        periodic(2, &[r1(1, 2, 1), r1(2, 2, 1)], &block, (k - 1) / 2)
    } else {
        periodic(2, &[r1(1, 1, 1), r1(1, 2, 1), r1(2, 2, 2)], &block, (k - 2) / 2)
    };
    let v = s.state_at(s.len());
    let v1_low = v.v()[0] < v.v()[1];
    match (orientation, v1_low) {
        (Orientation::V1Low, true) | (Orientation::V1High, false) => s,
        _ => s.permuted(&[1, 0]),
    }
}

/// `k(2k-1)`, the value of each `U` component at level `k` of the main `I_2` dynamic.
pub fn i2_level_value(k: u64) -> u64 {
    k * (2 * k - 1)
}

/// Largest `k >= 1` with `k(2k-1) <= t`. Requires `t >= 1`.
pub fn i2_level(t: u64) -> u64 {
    let mut k = ((1 + (1 + 8 * t as u128).sqrt()) / 4) as u64;
    k = k.max(1);
    while i2_level_value(k) > t {
        k -= 1;
    }
    while i2_level_value(k + 1) <= t {
        k += 1;
    }
    k
}

/// Main dynamic for `I_2`, `2K(2K-1)` steps for `K = target_k`.
///
/// Level `k` is reached at `t = 2k(2k-1)` with `U = [k(2k-1), k(2k-1)]` and
/// `V = [(k-1)(2k-1), (k+1)(2k-1)]` for odd `k`, components swapped for even `k`.
pub fn main_i2(target_k: u64) -> Result<Schedule, ConstructionError> {
    at_least("target_k", target_k, 1)?;
    let s = main_i2_unchecked(target_k);
    certify(&s)?;
    Ok(s)
}

fn main_i2_unchecked(target_k: u64) -> Schedule {
    let mut s = Schedule::new(2);
    s.push(r1(1, 2, 1));
    s.push(r1(2, 2, 1));
    s.annotate(level_annotation(1));
    for k in 1..target_k {
        // Odd levels have V_1 low: strategy 2 leads, then strategy 1.
        let (a, b) = if k % 2 == 1 { (1, 0) } else { (0, 1) };
        s.push(Run::new(a, a, 1));
        s.push(Run::new(a, b, 4 * k));
        s.push(Run::new(b, b, 4 * k + 1));
        s.annotate(level_annotation(k + 1));
    }
    s
}

fn level_annotation(k: u64) -> Annotation {
    Annotation::EpochStart {
        epoch: k as u32,
        t: 2 * i2_level_value(k),
        big_t: i2_level_value(k),
        gap: 2 * k - 1,
    }
}

/// First step count of `I_n` padding in raw orientation (odd `k`).
fn odd_prefix(n: usize) -> Vec<Run> {
    let mut out = Vec::new();
    staircase(&mut out, 1, n - 1);
    out.push(r1(n, n, 1));
    out
}

/// Two-level block for odd `k`: from `k` to `k + 2` in `2n` steps.
fn odd_block(n: usize) -> Vec<Run> {
    let mut out = alloc::vec![r1(n, 1, 2)];
    staircase(&mut out, 1, n - 2);
    out.push(r1(n - 1, n - 1, 1));
    out.push(r1(n - 1, 1, 1));
    staircase(&mut out, 1, n - 3);
    out.push(r1(n - 2, n - 2, 1));
    out
}

/// First `2n` steps for even `k`, reaching `k = 2`.
fn even_prefix(n: usize) -> Vec<Run> {
    let mut out = alloc::vec![r1(1, 1, 1), r1(1, 2, 1)];
    for t in 3..=n {
        out.push(r1(t - 1, t, 1));
    }
    out.push(r1(n, n, 1));
    out.push(r1(n, 2, 1));
    staircase(&mut out, 2, n - 2);
    out.push(r1(n - 1, n - 1, 1));
    out
}

/// Two-level block for even `k`: from `k` to `k + 2` in `2n` steps.
fn even_block(n: usize) -> Vec<Run> {
    let mut out = alloc::vec![r1(n - 1, 1, 1), r1(n - 1, n, 1), r1(n, 1, 1)];
    staircase(&mut out, 1, n - 3);
    out.push(r1(n - 2, n - 2, 1));
    out.push(r1(n - 2, n, 1));
    if n >= 4 {
        out.push(r1(n, 1, 1));
        staircase(&mut out, 1, n - 4);
        out.push(r1(n - 3, n - 3, 1));
    } else {
        // With three strategies the block closes one step early.
        out.push(r1(n, n, 1));
    }
    out
}

/// Padding dynamic for `I_n` (`n >= 3`) in its raw orientation,
/// before canonical relabeling.
pub fn padding_in_raw(n: usize, k: u64) -> Result<Schedule, ConstructionError> {
    at_least("n", n as u64, 3)?;
    at_least("k", k, 1)?;
    let s = padding_in_raw_unchecked(n, k);
    certify(&s)?;
    Ok(s)
}

fn padding_in_raw_unchecked(n: usize, k: u64) -> Schedule {
    if k % 2 == 1 {
        periodic(n, &odd_prefix(n), &odd_block(n), (k - 1) / 2)
    } else {
        periodic(n, &even_prefix(n), &even_block(n), (k - 2) / 2)
    }
}

/// Padding dynamic for `I_n`, `n >= 3`: after `n k` steps
/// `U = [k, .., k]` and `V = [k-1, k, .., k, k+1]` exactly.
pub fn padding_in(n: usize, k: u64) -> Result<Schedule, ConstructionError> {
    at_least("n", n as u64, 3)?;
    at_least("k", k, 1)?;
    let s = padding_in_unchecked(n, k);
    let d = certify(&s)?;
    if !is_padded_state(&d, k) {
        return Err(ConstructionError::WrongTerminalState);
    }
    Ok(s)
}

fn padding_in_unchecked(n: usize, k: u64) -> Schedule {
    let raw = padding_in_raw_unchecked(n, k);
    let end = raw.state_at(raw.len());
    raw.permuted(&canonicalizing_perm(end.v()))
}

fn is_padded_state(d: &IdentityDynamic, k: u64) -> bool {
    let n = d.n();
    d.u().iter().all(|&x| x == k)
        && d.v()[0] + 1 == k
        && d.v()[n - 1] == k + 1
        && d.v()[1..n - 1].iter().all(|&x| x == k)
}

/// Source of part-2 dynamics for one dimension, caching the main dynamic it
/// replays prefixes of.
enum Part2Source {
    I2 { main: Schedule, levels: u64 },
    Main(Box<MainGenerator>),
}

impl Part2Source {
    fn new(n: usize) -> Self {
        if n == 2 {
            Part2Source::I2 {
                main: main_i2_unchecked(1),
                levels: 1,
            }
        } else {
            Part2Source::Main(Box::new(MainGenerator::new(n)))
        }
    }

    fn n(&self) -> usize {
        match self {
            Part2Source::I2 { .. } => 2,
            Part2Source::Main(g) => g.n,
        }
    }

    /// Uncertified part-2 schedule for `T = big_t` and its final gap.
    fn part2(&mut self, big_t: u64) -> Result<(Schedule, u64), ConstructionError> {
        match self {
            Part2Source::I2 { main, levels } => {
                let k = i2_level(big_t);
                if k > *levels {
                    // Grow geometrically so repeated calls stay linear overall.
                    *levels = k.max(2 * *levels);
                    *main = main_i2_unchecked(*levels);
                }
                let l = big_t - i2_level_value(k) + 1;
                let mut s = padding_i2_unchecked(l, Orientation::V1Low);
                s.extend_runs(main.slice(2, 2 * i2_level_value(k)));
                Ok((s, 2 * k - 1))
            }
            Part2Source::Main(g) => {
                while g.records.last().is_none_or(|r| r.big_t <= big_t) {
                    g.extend_epoch()?;
                }
                let rec = g
                    .records
                    .iter()
                    .rev()
                    .find(|r| r.big_t <= big_t)
                    .expect("epoch 1 has T = 1");
                let n = g.n as u64;
                let l = big_t - rec.big_t + 1;
                let mut s = padding_in_unchecked(g.n, l);
                s.extend_runs(g.schedule.slice(n, n * rec.big_t));
                Ok((s, rec.gap))
            }
        }
    }
}

/// Incrementally built main dynamic for `I_n`, `n >= 3`. Every run is
/// certified against the running state as it is appended.
struct MainGenerator {
    n: usize,
    schedule: Schedule,
    state: IdentityDynamic,
    records: Vec<EpochRecord>,
    sub: Option<Part2Source>,
}

impl MainGenerator {
    fn new(n: usize) -> Self {
        let mut g = Self {
            n,
            schedule: Schedule::new(n),
            state: IdentityDynamic::new(n),
            records: Vec::new(),
            sub: None,
        };
        // Epoch 1 starts from the k = 1 padding state, already canonical.
        let prefix = odd_prefix(n);
        g.records.push(Self::record(1, &prefix_state(n, &prefix), n));
        g.schedule.extend_runs(prefix);
        g
    }

    fn record(index: u32, d: &IdentityDynamic, n: usize) -> EpochRecord {
        let sigma = canonical_order(d.v());
        let q: Vec<u64> = sigma.iter().map(|&k| d.v()[k]).collect();
        let p = d.u()[0];
        let gap = q[n - 1] - p;
        EpochRecord {
            index,
            t: d.t(),
            p,
            q,
            r: n as u64 * gap,
            s: None,
            big_t: p,
            gap,
            sigma,
        }
    }

    fn push(&mut self, run: Run) -> Result<(), ConstructionError> {
        self.state.apply_run(run)?;
        self.schedule.push(run);
        Ok(())
    }

    fn extend_epoch(&mut self) -> Result<(), ConstructionError> {
        if self.records.len() == 1 && self.state.t() == 0 {
            // Certify the initial padding on first use.
            for r in self.schedule.runs().to_vec() {
                self.state.apply_run(r)?;
            }
            let first = &self.records[0];
            self.schedule.annotate(Annotation::EpochStart {
                epoch: first.index,
                t: first.t,
                big_t: first.big_t,
                gap: first.gap,
            });
        }
        let n = self.n;
        let rec = self.records.last().expect("epoch 1 exists").clone();
        let top = rec.sigma[n - 1];
        let q_top = rec.q[n - 1];

        // Phase A: row plays the top component; each other column catches up to Q_top.
        self.schedule.annotate(Annotation::PhaseStart {
            phase: Phase::A,
            t: self.state.t(),
        });
        for c in 0..n - 1 {
            self.push(Run::new(top, rec.sigma[c], q_top - rec.q[c]))?;
        }

        // Phase B: a part-2 dynamic for I_{n-1} on the other components.
        self.schedule.annotate(Annotation::PhaseStart {
            phase: Phase::B,
            t: self.state.t(),
        });
        let sub = self.sub.get_or_insert_with(|| Part2Source::new(n - 1));
        let (sub_schedule, _) = sub.part2(rec.r)?;
        debug_assert_eq!(sub.n(), n - 1);
        let mut sub_end = IdentityDynamic::new(n - 1);
        for r in sub_schedule.runs() {
            sub_end.advance(r.row, r.col, r.len);
            self.push(Run::new(rec.sigma[r.row], rec.sigma[r.col], r.len))?;
        }
        self.records.last_mut().expect("epoch exists").s = Some(sub_end.v().to_vec());

        let next = Self::record(rec.index + 1, &self.state, n);
        if next.big_t != rec.p + rec.r || self.state.u().iter().any(|&x| x != next.p) {
            return Err(ConstructionError::WrongTerminalState);
        }
        self.schedule.annotate(Annotation::EpochStart {
            epoch: next.index,
            t: next.t,
            big_t: next.big_t,
            gap: next.gap,
        });
        self.records.push(next);
        Ok(())
    }
}

fn prefix_state(n: usize, runs: &[Run]) -> IdentityDynamic {
    let mut d = IdentityDynamic::new(n);
    for r in runs {
        d.advance(r.row, r.col, r.len);
    }
    d
}

/// Main dynamic for `I_n`, `n >= 3`, up to the start of epoch `epochs`.
///
/// `epochs = 1` yields just the `k = 1` padding (`n` steps).
pub fn main_dynamic(n: usize, epochs: u32) -> Result<(Schedule, Vec<EpochRecord>), ConstructionError> {
    at_least("n", n as u64, 3)?;
    at_least("epochs", epochs as u64, 1)?;
    let mut g = MainGenerator::new(n);
    if epochs == 1 {
        let d = certify(&g.schedule)?;
        debug_assert_eq!(d.t(), n as u64);
        g.schedule.annotate(Annotation::EpochStart {
            epoch: 1,
            t: n as u64,
            big_t: 1,
            gap: 1,
        });
    }
    while g.records.len() < epochs as usize {
        g.extend_epoch()?;
    }
    Ok((g.schedule, g.records))
}

/// Part-2 dynamic for `I_n`: `n T` steps ending at `U = [T, .., T]`.
///
/// Returns the schedule and its final gap `max V - min U`.
pub fn part2(n: usize, big_t: u64) -> Result<(Schedule, u64), ConstructionError> {
    at_least("n", n as u64, 2)?;
    at_least("T", big_t, 1)?;
    let (s, gap) = Part2Source::new(n).part2(big_t)?;
    let d = certify(&s)?;
    if d.t() != n as u64 * big_t || d.u().iter().any(|&x| x != big_t) || d.gap() != gap {
        return Err(ConstructionError::WrongTerminalState);
    }
    Ok((s, gap))
}

/// Final gap of `part2(n, T)` computed from the epoch recurrences alone,
/// without building any schedule.
pub fn part2_gap(n: usize, big_t: u64) -> u64 {
    assert!(n >= 2 && big_t >= 1);
    if n == 2 {
        return 2 * i2_level(big_t) - 1;
    }
    let mut cur = (1u64, 1u64);
    loop {
        let next = next_epoch(n, cur);
        if next.0 > big_t {
            return cur.1;
        }
        cur = next;
    }
}

/// `(T_{i+1}, G_{i+1})` from `(T_i, G_i)`:
/// `R = n G_i`, `T_{i+1} = T_i + R`, `G_{i+1} = G_i + gap of part2(n-1, R)`.
fn next_epoch(n: usize, (big_t, gap): (u64, u64)) -> (u64, u64) {
    let r = n as u64 * gap;
    (big_t + r, gap + part2_gap(n - 1, r))
}

/// `(T_i, G_i)` for epochs `1..=count` of the main dynamic for `I_n`, from
/// the recurrence only.
pub fn epoch_series(n: usize, count: u32) -> Vec<(u64, u64)> {
    assert!(n >= 3, "epoch series needs n >= 3");
    let mut out = Vec::with_capacity(count as usize);
    let mut cur = (1, 1);
    for _ in 0..count {
        out.push(cur);
        cur = next_epoch(n, cur);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn state(s: &Schedule, t: u64) -> (Vec<u64>, Vec<u64>) {
        let d = s.state_at(t);
        (d.u().to_vec(), d.v().to_vec())
    }

    #[test]
    fn i2_level_inverts_level_value() {
        assert_eq!(i2_level(1), 1);
        assert_eq!(i2_level(5), 1);
        assert_eq!(i2_level(6), 2);
        assert_eq!(i2_level(14), 2);
        assert_eq!(i2_level(15), 3);
        for k in 1..2000u64 {
            assert_eq!(i2_level(i2_level_value(k)), k);
            assert_eq!(i2_level(i2_level_value(k + 1) - 1), k);
        }
    }

    #[test]
    fn padding_i2_examples() {
        let s = padding_i2(2, Orientation::V1Low).unwrap();
        assert_eq!(state(&s, 4), (vec![2, 2], vec![1, 3]));
        let s = padding_i2(3, Orientation::V1High).unwrap();
        assert_eq!(state(&s, 6), (vec![3, 3], vec![4, 2]));
        let s = padding_i2(5, Orientation::V1Low).unwrap();
        assert_eq!(state(&s, 10), (vec![5, 5], vec![4, 6]));
        assert!(padding_i2(0, Orientation::V1Low).is_err());
    }

    #[test]
    fn padding_i2_terminal_states() {
        for k in 1..60 {
            for o in [Orientation::V1Low, Orientation::V1High] {
                let s = padding_i2(k, o).unwrap();
                assert_eq!(s.len(), 2 * k);
                let want_v = match o {
                    Orientation::V1Low => vec![k - 1, k + 1],
                    Orientation::V1High => vec![k + 1, k - 1],
                };
                assert_eq!(state(&s, 2 * k), (vec![k, k], want_v));
            }
        }
    }

    #[test]
    fn main_i2_examples() {
        assert_eq!(state(&main_i2(1).unwrap(), 2), (vec![1, 1], vec![0, 2]));
        assert_eq!(state(&main_i2(2).unwrap(), 12), (vec![6, 6], vec![9, 3]));
        let s = main_i2(3).unwrap();
        assert_eq!(s.len(), 30);
        assert_eq!(state(&s, 30), (vec![15, 15], vec![10, 20]));
    }

    #[test]
    fn padding_in_examples() {
        let s = padding_in(3, 1).unwrap();
        assert_eq!(state(&s, 3), (vec![1, 1, 1], vec![0, 1, 2]));
        let s = padding_in(3, 2).unwrap();
        assert_eq!(state(&s, 6), (vec![2, 2, 2], vec![1, 2, 3]));
        let s = padding_in(3, 3).unwrap();
        assert_eq!(state(&s, 9), (vec![3, 3, 3], vec![2, 3, 4]));
        assert!(padding_in(2, 1).is_err());
        assert!(padding_in(3, 0).is_err());
    }

    #[test]
    fn padding_in_terminal_states() {
        for n in 3..9 {
            for k in 1..25 {
                let s = padding_in(n, k).unwrap();
                assert_eq!(s.len(), n as u64 * k);
            }
        }
    }

    #[test]
    fn part2_i2_examples() {
        let (s, gap) = part2(2, 3).unwrap();
        assert_eq!(state(&s, 6), (vec![3, 3], vec![2, 4]));
        assert_eq!(gap, 1);
        let (s, gap) = part2(2, 6).unwrap();
        assert_eq!(state(&s, 12).0, vec![6, 6]);
        assert_eq!(gap, 3);
        let (s, gap) = part2(2, 1).unwrap();
        assert_eq!(state(&s, 2).0, vec![1, 1]);
        assert_eq!(gap, 1);
    }

    #[test]
    fn part2_gap_matches_construction() {
        for n in 2..5 {
            for t in 1..80 {
                let (_, gap) = part2(n, t).unwrap();
                assert_eq!(gap, part2_gap(n, t), "n={n} T={t}");
            }
        }
    }

    #[test]
    fn main_dynamic_first_epoch_transition() {
        let (s, recs) = main_dynamic(3, 2).unwrap();
        assert_eq!(recs[0].p, 1);
        assert_eq!(recs[0].q, vec![0, 1, 2]);
        assert_eq!(recs[0].r, 3);
        assert_eq!(recs[0].s, Some(vec![2, 4]));
        let phase_a_end = s.state_at(6);
        let canon: Vec<u64> = recs[0].sigma.iter().map(|&k| phase_a_end.u()[k]).collect();
        assert_eq!(canon, vec![1, 1, 4]);
        assert_eq!(phase_a_end.v(), &[2, 2, 2]);
        assert_eq!(s.len(), 12);
        assert_eq!((recs[1].big_t, recs[1].gap), (4, 2));
        let (u, mut v) = state(&s, 12);
        assert_eq!(u, vec![4, 4, 4]);
        v.sort();
        assert_eq!(v, vec![2, 4, 6]);
    }

    #[test]
    fn single_epoch_is_the_initial_padding() {
        for n in 3..7 {
            let (s, recs) = main_dynamic(n, 1).unwrap();
            assert_eq!(s.runs(), padding_in(n, 1).unwrap().runs());
            assert_eq!(recs.len(), 1);
            assert_eq!(s.replay().unwrap().gap(), 1);
        }
    }

    #[test]
    fn epoch_series_small_values() {
        let e = epoch_series(3, 30);
        assert_eq!(e[0], (1, 1));
        assert_eq!(e[1], (4, 2));
        for w in e.windows(2) {
            assert!(w[1].0 > w[0].0);
            assert!(w[1].1 > w[0].1);
        }
    }

    #[test]
    fn out_of_range_arguments() {
        assert!(main_dynamic(2, 3).is_err());
        assert!(main_dynamic(3, 0).is_err());
        assert!(part2(1, 3).is_err());
        assert!(part2(3, 0).is_err());
        assert!(main_i2(0).is_err());
    }
}

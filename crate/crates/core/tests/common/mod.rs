#![allow(dead_code)]

use fpdyn_core::identity::IdentityDynamic;
use fpdyn_core::schedule::Schedule;
use fpdyn_core::Choice;

pub type State = (Vec<u64>, Vec<u64>);

/// 1-based `(row, col)` pairs to 0-based choices.
pub fn choices(pairs: &[(usize, usize)]) -> Vec<Choice> {
    pairs.iter().map(|&(i, j)| Choice::new(i - 1, j - 1)).collect()
}

/// The 30 listed steps of the main `I_2` dynamic, 1-based.
pub fn main_i2_steps() -> Vec<(usize, usize)> {
    let mut s = vec![(1, 2), (2, 2), (2, 2)];
    s.extend([(2, 1); 4]);
    s.extend([(1, 1); 6]);
    s.extend([(1, 2); 8]);
    s.extend([(2, 2); 9]);
    s
}

pub fn main_i2_states() -> Vec<(u64, State)> {
    let st = |t, u: [u64; 2], v: [u64; 2]| (t, (u.to_vec(), v.to_vec()));
    vec![
        st(0, [0, 0], [0, 0]),
        st(1, [1, 0], [0, 1]),
        st(2, [1, 1], [0, 2]),
        st(3, [1, 2], [0, 3]),
        st(4, [1, 3], [1, 3]),
        st(5, [1, 4], [2, 3]),
        st(6, [1, 5], [3, 3]),
        st(7, [1, 6], [4, 3]),
        st(8, [2, 6], [5, 3]),
        st(12, [6, 6], [9, 3]),
        st(13, [7, 6], [10, 3]),
        st(14, [8, 6], [10, 4]),
        st(20, [14, 6], [10, 10]),
        st(21, [15, 6], [10, 11]),
        st(22, [15, 7], [10, 12]),
        st(30, [15, 15], [10, 20]),
    ]
}

/// Left and right padding dynamics for `I_2`, steps 1..6.
pub fn padding_i2_odd_steps() -> Vec<(usize, usize)> {
    vec![(1, 2), (2, 2), (2, 1), (2, 1), (1, 1), (1, 1)]
}

pub fn padding_i2_even_steps() -> Vec<(usize, usize)> {
    vec![(1, 1), (1, 2), (2, 2), (2, 2), (2, 1), (2, 1)]
}

pub fn padding_i2_odd_states() -> Vec<(u64, State)> {
    let st = |t, u: [u64; 2], v: [u64; 2]| (t, (u.to_vec(), v.to_vec()));
    vec![
        st(1, [1, 0], [0, 1]),
        st(2, [1, 1], [0, 2]),
        st(3, [1, 2], [1, 2]),
        st(4, [1, 3], [2, 2]),
        st(5, [2, 3], [3, 2]),
        st(6, [3, 3], [4, 2]),
    ]
}

pub fn padding_i2_even_states() -> Vec<(u64, State)> {
    let st = |t, u: [u64; 2], v: [u64; 2]| (t, (u.to_vec(), v.to_vec()));
    vec![
        st(1, [1, 0], [1, 0]),
        st(2, [2, 0], [1, 1]),
        st(3, [2, 1], [1, 2]),
        st(4, [2, 2], [1, 3]),
        st(5, [2, 3], [2, 3]),
        st(6, [2, 4], [3, 3]),
    ]
}

/// A vector drawn as `[head, fill, .., fill, tail]`. `None` when the
/// explicit entries alone do not fit in `n` components.
pub fn pattern(n: usize, head: &[u64], fill: u64, tail: &[u64]) -> Option<Vec<u64>> {
    let gap = n.checked_sub(head.len() + tail.len())?;
    let mut v = head.to_vec();
    v.extend(std::iter::repeat_n(fill, gap));
    v.extend_from_slice(tail);
    Some(v)
}

type Pat = (&'static [u64], u64, &'static [u64]);

fn expand(n: usize, rows: &[(u64, Pat, Pat)]) -> Vec<(u64, State)> {
    rows.iter()
        .filter_map(|&(t, u, v)| Some((t, (pattern(n, u.0, u.1, u.2)?, pattern(n, v.0, v.1, v.2)?))))
        .collect()
}

/// States displayed for the odd-`k` padding dynamic of `I_n`. Steps are
/// written in terms of `m = n - 1`. Rows whose drawing needs more than `n`
/// components are dropped.
pub fn padding_in_odd_states(n: usize) -> Vec<(u64, State)> {
    let m = n as u64 - 1;
    let mut rows: Vec<(u64, State)> = (0..=m)
        .map(|t| {
            let u: Vec<u64> = (0..n as u64).map(|c| u64::from(c < t)).collect();
            let v: Vec<u64> = (0..n as u64).map(|c| u64::from(c >= 1 && c <= t)).collect();
            (t, (u, v))
        })
        .collect();
    rows.extend(expand(
        n,
        &[
            (m + 1, (&[], 1, &[]), (&[0], 1, &[2])),
            (m + 2, (&[], 1, &[2]), (&[], 1, &[2])),
            (m + 3, (&[], 1, &[3]), (&[2], 1, &[2])),
            (m + 4, (&[2], 1, &[3]), (&[2, 2], 1, &[2])),
            (2 * m + 2, (&[], 2, &[1, 3]), (&[], 2, &[])),
            (2 * m + 3, (&[], 2, &[3]), (&[], 2, &[3, 2])),
            (2 * m + 4, (&[], 2, &[3, 3]), (&[3], 2, &[3, 2])),
            (2 * m + 5, (&[3], 2, &[3, 3]), (&[3, 3], 2, &[3, 2])),
            (3 * m + 2, (&[], 3, &[2, 3, 3]), (&[], 3, &[2])),
            (3 * m + 3, (&[], 3, &[]), (&[], 3, &[4, 3, 2])),
        ],
    ));
    rows
}

/// States displayed for the even-`k` padding dynamic of `I_n`.
pub fn padding_in_even_states(n: usize) -> Vec<(u64, State)> {
    let m = n as u64 - 1;
    expand(
        n,
        &[
            (0, (&[], 0, &[]), (&[], 0, &[])),
            (1, (&[1], 0, &[]), (&[1], 0, &[])),
            (2, (&[2], 0, &[]), (&[1, 1], 0, &[])),
            (3, (&[2, 1], 0, &[]), (&[1, 1, 1], 0, &[])),
            (m + 1, (&[2], 1, &[0]), (&[], 1, &[])),
            (m + 2, (&[2], 1, &[]), (&[], 1, &[2])),
            (m + 3, (&[2], 1, &[2]), (&[1, 2], 1, &[2])),
            (m + 4, (&[2, 2], 1, &[2]), (&[1, 2, 2], 1, &[2])),
            (2 * m + 1, (&[], 2, &[1, 2]), (&[1], 2, &[])),
            (2 * m + 2, (&[], 2, &[]), (&[1], 2, &[3, 2])),
            (2 * m + 3, (&[], 2, &[3, 2]), (&[], 2, &[3, 2])),
            (2 * m + 4, (&[], 2, &[4, 2]), (&[], 2, &[3, 3])),
            (2 * m + 5, (&[], 2, &[4, 3]), (&[3], 2, &[3, 3])),
            (3 * m + 3, (&[], 3, &[2, 4, 3]), (&[], 3, &[])),
            (3 * m + 4, (&[], 3, &[4, 3]), (&[], 3, &[4, 3, 3])),
            (3 * m + 5, (&[], 3, &[4, 4, 3]), (&[], 3, &[4, 3, 4])),
            (3 * m + 6, (&[], 3, &[4, 4, 4]), (&[4], 3, &[4, 3, 4])),
            (4 * m + 3, (&[], 4, &[3, 4, 4, 4]), (&[], 4, &[3, 4])),
            (4 * m + 4, (&[], 4, &[]), (&[], 4, &[5, 4, 3, 4])),
        ],
    )
}

/// Step-by-step identity replay, independent of run certification.
pub fn states_along(n: usize, steps: impl IntoIterator<Item = Choice>) -> Vec<State> {
    let mut u = vec![0u64; n];
    let mut v = vec![0u64; n];
    let mut out = vec![(u.clone(), v.clone())];
    for c in steps {
        let max_v = *v.iter().max().unwrap();
        let min_u = *u.iter().min().unwrap();
        assert_eq!(v[c.row], max_v, "row {} not a best response at t={}", c.row, out.len());
        assert_eq!(u[c.col], min_u, "col {} not a best response at t={}", c.col, out.len());
        u[c.row] += 1;
        v[c.col] += 1;
        out.push((u.clone(), v.clone()));
    }
    out
}

pub fn schedule_states(s: &Schedule) -> Vec<State> {
    states_along(s.n(), s.choices())
}

pub fn terminal(s: &Schedule) -> IdentityDynamic {
    s.replay().expect("certified schedule")
}

/// Asserts every listed state, reporting the first mismatch by step.
pub fn assert_states(label: &str, got: &[State], want: &[(u64, State)]) {
    for (t, st) in want {
        let g = got
            .get(*t as usize)
            .unwrap_or_else(|| panic!("{label}: no state at t={t}"));
        assert_eq!(g, st, "{label}: state at t={t}");
    }
}

/// Every `(U, V)` reachable on `I_n` by a valid execution, grouped by step.
pub fn reachable_states(n: usize, t_max: usize) -> Vec<std::collections::BTreeSet<State>> {
    use std::collections::BTreeSet;
    let mut layers = vec![BTreeSet::from([(vec![0u64; n], vec![0u64; n])])];
    for _ in 0..t_max {
        let mut next = BTreeSet::new();
        for (u, v) in layers.last().unwrap() {
            let max_v = *v.iter().max().unwrap();
            let min_u = *u.iter().min().unwrap();
            for i in (0..n).filter(|&i| v[i] == max_v) {
                for j in (0..n).filter(|&j| u[j] == min_u) {
                    let (mut u2, mut v2) = (u.clone(), v.clone());
                    u2[i] += 1;
                    v2[j] += 1;
                    next.insert((u2, v2));
                }
            }
        }
        layers.push(next);
    }
    layers
}

pub fn state_gap((u, v): &State) -> u64 {
    v.iter().max().unwrap() - u.iter().min().unwrap()
}

/// Checks that every prefix state of `schedule` up to `t_max` is reachable
/// and that no state at that step beats the best reachable gap.
pub fn check_against_enumeration(
    layers: &[std::collections::BTreeSet<State>],
    schedule: &Schedule,
) -> Result<(), String> {
    let states = schedule_states(schedule);
    for (t, st) in states.iter().enumerate().take(layers.len()) {
        if !layers[t].contains(st) {
            return Err(format!("state at t={t} not reachable: {st:?}"));
        }
        let best = layers[t].iter().map(state_gap).max().unwrap();
        if best < state_gap(st) {
            return Err(format!("t={t}: enumeration max gap {best} below construction"));
        }
    }
    Ok(())
}

/// Constructed schedules small enough to enumerate against.
pub fn tiny_constructions(n: usize) -> Vec<(String, Schedule)> {
    use fpdyn_core::constructions::*;
    let mut out = Vec::new();
    if n == 2 {
        out.push(("main_i2(3)".into(), main_i2(3).unwrap()));
        for k in 1..=6 {
            out.push((
                format!("padding_i2({k}, low)"),
                padding_i2(k, Orientation::V1Low).unwrap(),
            ));
            out.push((
                format!("padding_i2({k}, high)"),
                padding_i2(k, Orientation::V1High).unwrap(),
            ));
        }
    } else {
        out.push((format!("main_dynamic({n}, 3)"), main_dynamic(n, 3).unwrap().0));
        for k in 1..=4 {
            out.push((format!("padding_in({n}, {k})"), padding_in(n, k).unwrap()));
            out.push((format!("padding_in_raw({n}, {k})"), padding_in_raw(n, k).unwrap()));
        }
    }
    for t in 1..=6 {
        out.push((format!("part2({n}, {t})"), part2(n, t).unwrap().0));
    }
    out
}

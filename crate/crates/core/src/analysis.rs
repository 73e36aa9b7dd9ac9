//! Gap series and convergence-rate estimates.
//!
//! Gaps are kept exact; logarithms and the least-squares fit are the only
//! floating-point stages.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::engine::{DynamicState, EngineError};
use crate::identity::IdentityDynamic;
use crate::matrix::PayoffMatrix;
use crate::scalar::Scalar;
use crate::schedule::{Annotation, Schedule};
use crate::trace::Trace;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalysisError {
    #[error("need at least 3 samples with positive gap in range, found {found}")]
    InsufficientSamples { found: usize },
    #[error("series is empty")]
    EmptySeries,
    #[error("series spans {decades:.2} decades, need at least 2")]
    InsufficientSpan { decades: f64 },
    #[error(transparent)]
    Replay(#[from] EngineError),
}

/// Where to sample a series.
#[derive(Debug, Clone, PartialEq)]
pub enum SampleAt {
    EveryStep,
    /// For schedules, the annotated epoch starts. For plain traces, the steps
    /// at which every component of `U` is equal; on the constructed main
    /// dynamics these are exactly the epoch starts.
    EpochStarts,
    /// `t = ceil(ratio^k)` for `k = 0, 1, ..`, deduplicated.
    Geometric(f64),
    At(Vec<u64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapSample {
    pub t: u64,
    /// `max V(t) - min U(t)`.
    pub gap: BigRational,
}

impl GapSample {
    pub fn new(t: u64, gap: BigRational) -> Self {
        Self { t, gap }
    }

    /// `gap / t`.
    pub fn normalized(&self) -> BigRational {
        &self.gap / BigRational::from_integer(BigInt::from(self.t))
    }

    pub fn normalized_f64(&self) -> f64 {
        Scalar::to_f64(&self.normalized())
    }
}

/// Samples with strictly increasing `t >= 1`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GapSeries {
    pub samples: Vec<GapSample>,
}

impl GapSeries {
    /// Builds a series from `(t, normalized gap)` pairs, e.g. read back from CSV.
    pub fn from_samples(mut samples: Vec<GapSample>) -> Self {
        samples.sort_by_key(|s| s.t);
        samples.dedup_by_key(|s| s.t);
        samples.retain(|s| s.t >= 1);
        Self { samples }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Geometric grid `ceil(ratio^k)` up to `t_max`.
pub fn geometric_grid(ratio: f64, t_max: u64) -> Vec<u64> {
    assert!(ratio > 1.0, "grid ratio must exceed 1");
    let mut out = Vec::new();
    let mut x = 1.0f64;
    while x <= t_max as f64 {
        let t = libm::ceil(x) as u64;
        if out.last() != Some(&t) && t <= t_max {
            out.push(t);
        }
        x *= ratio;
    }
    out
}

fn explicit_points(sample: &SampleAt, len: u64) -> Option<BTreeSet<u64>> {
    match sample {
        SampleAt::EveryStep | SampleAt::EpochStarts => None,
        SampleAt::Geometric(r) => Some(geometric_grid(*r, len).into_iter().collect()),
        SampleAt::At(ts) => Some(ts.iter().copied().filter(|&t| t >= 1 && t <= len).collect()),
    }
}

fn all_equal<T: PartialEq>(xs: &[T]) -> bool {
    xs.windows(2).all(|w| w[0] == w[1])
}

/// Replays `trace` with certification and samples `max V - min U`.
pub fn gap_series<S: Scalar>(
    matrix: &PayoffMatrix<S>,
    trace: &Trace,
    sample: &SampleAt,
) -> Result<GapSeries, AnalysisError> {
    let points = explicit_points(sample, trace.len() as u64);
    let mut state = DynamicState::new(matrix);
    let mut samples = Vec::new();
    for &c in &trace.steps {
        state.step_scripted(matrix, c)?;
        let t = state.t();
        let take = match (&points, sample) {
            (Some(p), _) => p.contains(&t),
            (None, SampleAt::EpochStarts) => all_equal(state.u()),
            (None, _) => true,
        };
        if take {
            samples.push(GapSample::new(t, state.gap().to_rational()));
        }
    }
    Ok(GapSeries { samples })
}

fn identity_gap_at(d: &IdentityDynamic, row: usize, col: usize, offset: u64) -> u64 {
    let max_v = d
        .v()
        .iter()
        .enumerate()
        .map(|(k, &x)| if k == col { x + offset } else { x })
        .max()
        .unwrap_or(0);
    let min_u = d
        .u()
        .iter()
        .enumerate()
        .map(|(k, &x)| if k == row { x + offset } else { x })
        .min()
        .unwrap_or(0);
    max_v - min_u
}

fn int_sample(t: u64, gap: u64) -> GapSample {
    GapSample::new(t, BigRational::from_integer(BigInt::from(gap)))
}

/// Steps at which every `U` component is equal.
fn balanced_points(schedule: &Schedule) -> Result<BTreeSet<u64>, AnalysisError> {
    let mut d = IdentityDynamic::new(schedule.n());
    let mut out = BTreeSet::new();
    for &run in schedule.runs() {
        let mut others = d.u().iter().enumerate().filter(|&(k, _)| k != run.row).map(|(_, &x)| x);
        let target = others.next();
        if others.all(|x| Some(x) == target) {
            let base = d.u()[run.row];
            match target {
                None => out.extend(d.t() + 1..=d.t() + run.len),
                Some(c) if c > base && c - base <= run.len => {
                    out.insert(d.t() + (c - base));
                }
                _ => {}
            }
        }
        d.apply_run(run)?;
    }
    Ok(out)
}

/// Gap series of a certified identity-game schedule, replayed run by run.
///
/// `EpochStarts` uses the schedule's annotations, or the balanced states
/// when it has none.
pub fn schedule_gap_series(schedule: &Schedule, sample: &SampleAt) -> Result<GapSeries, AnalysisError> {
    let mut d = IdentityDynamic::new(schedule.n());
    let annotated: BTreeSet<u64> = schedule
        .annotations()
        .iter()
        .filter_map(|a| match a {
            Annotation::EpochStart { t, .. } if *t >= 1 => Some(*t),
            _ => None,
        })
        .collect();
    let points: BTreeSet<u64> = match sample {
        SampleAt::EpochStarts if annotated.is_empty() => balanced_points(schedule)?,
        SampleAt::EpochStarts => annotated,
        SampleAt::EveryStep => (1..=schedule.len()).collect(),
        other => explicit_points(other, schedule.len()).expect("explicit sample set"),
    };
    let mut samples = Vec::with_capacity(points.len());
    for &run in schedule.runs() {
        let start = d.t();
        for &t in points.range(start + 1..=start + run.len) {
            samples.push(int_sample(t, identity_gap_at(&d, run.row, run.col, t - start)));
        }
        d.apply_run(run)?;
    }
    Ok(GapSeries { samples })
}

/// Least-squares fit of `ln(gap/t)` against `ln t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope.
    pub stderr: f64,
    pub t_min: u64,
    pub t_max: u64,
    pub sample_count: usize,
}

/// Fits the decay exponent over samples with `t_min <= t <= t_max` and positive gap.
pub fn fit_exponent(series: &GapSeries, t_min: u64, t_max: u64) -> Result<ExponentFit, AnalysisError> {
    let pts: Vec<(u64, f64, f64)> = series
        .samples
        .iter()
        .filter(|s| s.t >= t_min && s.t <= t_max && s.gap.is_positive())
        .map(|s| (s.t, libm::log(s.t as f64), libm::log(s.normalized_f64())))
        .collect();
    if pts.len() < 3 {
        return Err(AnalysisError::InsufficientSamples { found: pts.len() });
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.2).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.1 - mx) * (p.1 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.1 - mx) * (p.2 - my)).sum();
    if sxx == 0.0 {
        return Err(AnalysisError::InsufficientSamples { found: 1 });
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = pts
        .iter()
        .map(|p| {
            let r = p.2 - (intercept + slope * p.1);
            r * r
        })
        .sum();
    let stderr = libm::sqrt(ssr / (k - 2.0) / sxx);
    Ok(ExponentFit {
        slope,
        intercept,
        stderr,
        t_min: pts[0].0,
        t_max: pts[pts.len() - 1].0,
        sample_count: pts.len(),
    })
}

/// Extremes of `gap(t) / t^((n-1)/n)` over a series.
#[derive(Debug, Clone, PartialEq)]
pub struct RateEnvelope {
    pub c_low: f64,
    pub c_high: f64,
    pub samples_used: usize,
    /// Samples skipped because their gap is zero.
    pub zero_gap_excluded: usize,
}

impl RateEnvelope {
    fn empty() -> Self {
        Self {
            c_low: f64::INFINITY,
            c_high: 0.0,
            samples_used: 0,
            zero_gap_excluded: 0,
        }
    }

    fn add(&mut self, t: u64, gap: f64, exponent: f64) {
        if gap == 0.0 {
            self.zero_gap_excluded += 1;
            return;
        }
        let c = gap / libm::pow(t as f64, exponent);
        self.c_low = self.c_low.min(c);
        self.c_high = self.c_high.max(c);
        self.samples_used += 1;
    }

    fn finish(self) -> Result<Self, AnalysisError> {
        if self.samples_used == 0 {
            Err(AnalysisError::EmptySeries)
        } else {
            Ok(self)
        }
    }
}

pub fn rate_envelope(n: usize, series: &GapSeries) -> Result<RateEnvelope, AnalysisError> {
    let exponent = (n as f64 - 1.0) / n as f64;
    let mut env = RateEnvelope::empty();
    for s in &series.samples {
        env.add(s.t, Scalar::to_f64(&s.gap), exponent);
    }
    env.finish()
}

/// `rate_envelope` over every step `t >= t_min` of a schedule, without
/// materializing the series.
pub fn schedule_rate_envelope(schedule: &Schedule, t_min: u64) -> Result<RateEnvelope, AnalysisError> {
    let n = schedule.n();
    let exponent = (n as f64 - 1.0) / n as f64;
    let mut env = RateEnvelope::empty();
    let mut d = IdentityDynamic::new(n);
    for &run in schedule.runs() {
        let start = d.t();
        for s in 1..=run.len {
            if start + s >= t_min {
                env.add(start + s, identity_gap_at(&d, run.row, run.col, s) as f64, exponent);
            }
        }
        d.apply_run(run)?;
    }
    env.finish()
}

/// Weak downward-trend check: the geometric mean of the normalized gap over
/// the last decade of `t` is below that over the first decade.
///
/// Zero-gap samples are left out of the means; a decade with only zero gaps
/// counts as mean zero.
pub fn robinson_sanity(series: &GapSeries) -> Result<bool, AnalysisError> {
    let (first, last) = match (series.samples.first(), series.samples.last()) {
        (Some(f), Some(l)) => (f.t as f64, l.t as f64),
        _ => return Err(AnalysisError::EmptySeries),
    };
    let decades = libm::log10(last / first);
    if decades < 2.0 {
        return Err(AnalysisError::InsufficientSpan { decades });
    }
    let geo_mean = |lo: f64, hi: f64| {
        let logs: Vec<f64> = series
            .samples
            .iter()
            .filter(|s| (s.t as f64) >= lo && (s.t as f64) <= hi && s.gap.is_positive())
            .map(|s| libm::log(s.normalized_f64()))
            .collect();
        if logs.is_empty() {
            0.0
        } else {
            libm::exp(logs.iter().sum::<f64>() / logs.len() as f64)
        }
    };
    let head = geo_mean(first, first * 10.0);
    let tail = geo_mean(last / 10.0, last);
    Ok(head > 0.0 && tail < head)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{main_dynamic, main_i2};
    use alloc::vec;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn power_law(exponent: f64, ts: &[u64]) -> GapSeries {
        // gap = t^(1 + exponent) as an exact rational of the f64 value.
        let samples = ts
            .iter()
            .map(|&t| {
                let g = libm::pow(t as f64, 1.0 + exponent);
                GapSample::new(t, Scalar::to_rational(&g))
            })
            .collect();
        GapSeries { samples }
    }

    #[test]
    fn fit_recovers_synthetic_exponent() {
        let series = power_law(-0.5, &geometric_grid(1.5, 1_000_000));
        let fit = fit_exponent(&series, 1, u64::MAX).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-9, "{}", fit.slope);
        assert!(fit.stderr < 1e-9);
        assert_eq!(fit.t_min, 1);
    }

    #[test]
    fn fit_needs_three_positive_samples() {
        let series = GapSeries::from_samples(vec![
            GapSample::new(1, ratio(1, 1)),
            GapSample::new(2, ratio(0, 1)),
            GapSample::new(3, ratio(1, 1)),
        ]);
        assert_eq!(
            fit_exponent(&series, 1, 10),
            Err(AnalysisError::InsufficientSamples { found: 2 })
        );
    }

    #[test]
    fn main_i2_golden_points() {
        let s = main_i2(3).unwrap();
        let series = schedule_gap_series(&s, &SampleAt::At(vec![2, 12, 30])).unwrap();
        let gaps: Vec<BigRational> = series.samples.iter().map(|x| x.gap.clone()).collect();
        assert_eq!(gaps, vec![ratio(1, 1), ratio(3, 1), ratio(5, 1)]);
        let got: Vec<BigRational> = series.samples.iter().map(|x| x.normalized()).collect();
        assert_eq!(got, vec![ratio(1, 2), ratio(1, 4), ratio(1, 6)]);

        let trace = s.to_trace("scripted");
        let generic = gap_series(
            &PayoffMatrix::<BigInt>::identity(2),
            &trace,
            &SampleAt::At(vec![2, 12, 30]),
        )
        .unwrap();
        assert_eq!(generic, series);
    }

    #[test]
    fn first_step_normalized_gap_is_one() {
        let s = main_i2(2).unwrap();
        let series = schedule_gap_series(&s, &SampleAt::At(vec![1])).unwrap();
        assert_eq!(series.samples[0].normalized(), ratio(1, 1));
        for n in 3..6 {
            let (s, _) = main_dynamic(n, 2).unwrap();
            let series = schedule_gap_series(&s, &SampleAt::At(vec![1])).unwrap();
            assert_eq!(series.samples[0].normalized(), ratio(1, 1));
        }
    }

    #[test]
    fn epoch_starts_match_records() {
        let (s, records) = main_dynamic(3, 8).unwrap();
        let series = schedule_gap_series(&s, &SampleAt::EpochStarts).unwrap();
        assert_eq!(series.len(), records.len());
        for (sample, r) in series.samples.iter().zip(&records) {
            assert_eq!(sample.t, 3 * r.big_t);
            assert_eq!(sample.normalized(), ratio(r.gap as i64, 3 * r.big_t as i64));
        }
        // On a plain trace the balanced states are the same points.
        let trace = s.to_trace("scripted");
        let generic = gap_series(&PayoffMatrix::<BigInt>::identity(3), &trace, &SampleAt::EpochStarts).unwrap();
        assert_eq!(generic, series);
        let bare = Schedule::from_choices(3, s.choices());
        assert_eq!(schedule_gap_series(&bare, &SampleAt::EpochStarts).unwrap(), series);
    }

    #[test]
    fn every_step_matches_generic_replay() {
        let (s, _) = main_dynamic(4, 3).unwrap();
        let a = schedule_gap_series(&s, &SampleAt::EveryStep).unwrap();
        let b = gap_series(
            &PayoffMatrix::<BigInt>::identity(4),
            &s.to_trace("scripted"),
            &SampleAt::EveryStep,
        )
        .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len() as u64, s.len());
    }

    #[test]
    fn main_i2_envelope() {
        let s = main_i2(60).unwrap();
        let ts: Vec<u64> = (1..=60u64).map(|k| 2 * k * (2 * k - 1)).collect();
        let series = schedule_gap_series(&s, &SampleAt::At(ts)).unwrap();
        let env = rate_envelope(2, &series).unwrap();
        assert!(env.c_low > 0.70 && env.c_high < 1.0, "{env:?}");
        assert_eq!(env.zero_gap_excluded, 0);
    }

    #[test]
    fn streaming_envelope_matches_series() {
        let (s, _) = main_dynamic(3, 6).unwrap();
        let series = schedule_gap_series(&s, &SampleAt::EveryStep).unwrap();
        let tail = GapSeries::from_samples(series.samples.into_iter().filter(|x| x.t >= 3).collect());
        assert_eq!(schedule_rate_envelope(&s, 3).unwrap(), rate_envelope(3, &tail).unwrap());
    }

    #[test]
    fn envelope_skips_zero_gaps() {
        let series = GapSeries::from_samples(vec![GapSample::new(1, ratio(0, 1)), GapSample::new(4, ratio(2, 1))]);
        let env = rate_envelope(2, &series).unwrap();
        assert_eq!((env.c_low, env.c_high, env.zero_gap_excluded), (1.0, 1.0, 1));
        let empty = GapSeries::from_samples(vec![GapSample::new(3, ratio(0, 1))]);
        assert_eq!(rate_envelope(2, &empty), Err(AnalysisError::EmptySeries));
    }

    #[test]
    fn sanity_trend() {
        let grid = geometric_grid(1.2, 1_000_000);
        let decaying = power_law(-0.5, &grid);
        let grid_from_100: Vec<u64> = grid.iter().copied().filter(|&t| t >= 100).collect();
        assert_eq!(robinson_sanity(&power_law(-0.5, &grid_from_100)), Ok(true));
        assert_eq!(robinson_sanity(&decaying), Ok(true));
        assert_eq!(robinson_sanity(&power_law(0.0, &grid)), Ok(false));
        let short = power_law(-0.5, &geometric_grid(1.2, 50));
        assert!(matches!(
            robinson_sanity(&short),
            Err(AnalysisError::InsufficientSpan { .. })
        ));
    }

    #[test]
    fn main_i2_sanity() {
        let s = main_i2(600).unwrap();
        let ts: Vec<u64> = geometric_grid(1.1, s.len()).into_iter().filter(|&t| t >= 100).collect();
        let series = schedule_gap_series(&s, &SampleAt::At(ts)).unwrap();
        assert_eq!(robinson_sanity(&series), Ok(true));
    }

    #[test]
    fn grid_is_strictly_increasing() {
        let g = geometric_grid(1.05, 10_000);
        assert_eq!(&g[..3], &[1, 2, 3]);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(*g.last().unwrap() <= 10_000);
    }
}

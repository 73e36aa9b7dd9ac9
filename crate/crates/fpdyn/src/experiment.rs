//! Runs one configured simulation and writes its outputs.

use std::fs::File;
use std::io::{BufWriter, Write};

use anyhow::Context;
use fpdyn_core::analysis::{gap_series, GapSeries, SampleAt};
use fpdyn_core::engine::{run, DynamicState};
use fpdyn_core::scalar::Scalar;
use fpdyn_core::seed::{derive_seed, MATRIX_STREAM, POLICY_STREAM};
use fpdyn_core::trace::TraceHeader;
use fpdyn_core::{PayoffMatrix, TieBreakPolicy, Trace};
use num_bigint::BigInt;

use crate::config::{ExperimentConfig, GameSpec, PolicySpec};
use crate::csv::write_gap_csv;
use crate::tracefile::write_trace;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub trace: Trace,
    pub series: GapSeries,
    /// `None` before the first step.
    pub final_normalized_gap: Option<f64>,
}

fn policy_for(cfg: &ExperimentConfig) -> TieBreakPolicy {
    match cfg.policy {
        PolicySpec::Lexicographic => TieBreakPolicy::Lexicographic,
        PolicySpec::GreedyGap => TieBreakPolicy::GreedyGap,
        PolicySpec::SeededRandom => TieBreakPolicy::seeded_random(derive_seed(cfg.seed, POLICY_STREAM)),
    }
}

fn simulate_on<S: Scalar>(matrix: &PayoffMatrix<S>, cfg: &ExperimentConfig) -> anyhow::Result<Outcome> {
    let mut policy = policy_for(cfg);
    let uses_seed = matches!(cfg.game, GameSpec::RandomUniform { .. }) || cfg.policy == PolicySpec::SeededRandom;
    let (mut trace, state): (Trace, DynamicState<S>) = run(matrix, &mut policy, cfg.steps)?;
    trace.header = TraceHeader::for_matrix(matrix, policy.name(), uses_seed.then_some(cfg.seed));
    let series = gap_series(matrix, &trace, &SampleAt::Geometric(cfg.sample_ratio))?;
    let final_normalized_gap = state.normalized_gap().ok().map(|g| Scalar::to_f64(&g));
    Ok(Outcome {
        trace,
        series,
        final_normalized_gap,
    })
}

pub fn run_experiment(cfg: &ExperimentConfig) -> anyhow::Result<Outcome> {
    cfg.check().map_err(anyhow::Error::msg)?;
    match cfg.game {
        GameSpec::Identity { n } => simulate_on(&PayoffMatrix::<BigInt>::identity(n), cfg),
        GameSpec::RandomUniform { rows, cols } => {
            let a = PayoffMatrix::<f64>::random_uniform(rows, cols, derive_seed(cfg.seed, MATRIX_STREAM))?
                .with_tolerance(cfg.epsilon);
            simulate_on(&a, cfg)
        }
    }
}

/// Runs `cfg` and writes whichever outputs it names.
pub fn run_and_write(cfg: &ExperimentConfig) -> anyhow::Result<Outcome> {
    let outcome = run_experiment(cfg)?;
    if let Some(path) = &cfg.trace_out {
        let mut w = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
        write_trace(&mut w, &outcome.trace)?;
        w.flush()?;
    }
    if let Some(path) = &cfg.csv_out {
        let mut w = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
        write_gap_csv(&mut w, &outcome.series)?;
        w.flush()?;
    }
    Ok(outcome)
}

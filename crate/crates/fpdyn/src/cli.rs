//! The `fpdyn` command line.

use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fpdyn_core::analysis::{
    fit_exponent, gap_series, rate_envelope, schedule_gap_series, ExponentFit, GapSeries, SampleAt,
};
use fpdyn_core::constructions::{main_dynamic, main_i2, padding_i2, padding_in, part2, EpochRecord, Orientation};
use fpdyn_core::schedule::Schedule;
use fpdyn_core::seed::job_seed;
use fpdyn_core::trace::{MatrixDescriptor, TraceHeader};
use fpdyn_core::validator::validate_trace;
use fpdyn_core::PayoffMatrix;

use crate::config::{ConfigFile, ExperimentConfig, GameSpec, PolicySpec};
use crate::csv::{fmt_float, read_gap_csv, CSV_HEADER};
use crate::experiment::run_and_write;
use crate::report::{envelope_summary, fit_summary, report_json, report_text};
use crate::tracefile::{read_trace, write_steps};

#[derive(Debug, Parser)]
#[command(
    name = "fpdyn",
    version,
    about = "Fictitious-play dynamics: slow schedules, simulation, certification, rates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a certified identity-game schedule.
    Construct(ConstructArgs),
    /// Run fictitious play with a tie-breaking policy.
    Simulate(SimulateArgs),
    /// Certify a trace file step by step.
    Validate(ValidateArgs),
    /// Fit the decay exponent of the normalized gap.
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Main,
    Padding,
    Part2,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    /// Matrix dimension.
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum)]
    pub variant: Variant,
    /// Level for `main` with n = 2 and for `padding`.
    #[arg(long)]
    pub k: Option<u64>,
    /// Epoch count for `main` with n >= 3.
    #[arg(long)]
    pub epochs: Option<u32>,
    /// Target for `part2`.
    #[arg(long = "T", alias = "t")]
    pub big_t: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// identity:N or random:MxN.
    #[arg(long, default_value = "identity:3")]
    pub game: GameSpec,
    #[arg(long, value_enum, default_value = "seeded-random")]
    pub policy: PolicySpec,
    /// Master seed. Overrides the seed in --config.
    #[arg(long, env = "FPDYN_SEED")]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 100_000)]
    pub steps: u64,
    /// Geometric sampling ratio for the gap CSV.
    #[arg(long, default_value_t = 1.1)]
    pub ratio: f64,
    /// Tie tolerance for floating-point games.
    #[arg(long, default_value_t = fpdyn_core::matrix::DEFAULT_TOLERANCE)]
    pub epsilon: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// JSON experiment config, one object or a list. Replaces the game flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Worker threads for a list of configs.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    pub file: PathBuf,
    /// Replay inline matrices in floating point instead of exactly.
    #[arg(long)]
    pub float: bool,
    #[arg(long, default_value_t = fpdyn_core::matrix::DEFAULT_TOLERANCE)]
    pub epsilon: f64,
    /// Print the machine-readable record instead of the text summary.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Trace file or gap CSV.
    pub file: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub t_min: u64,
    #[arg(long, default_value_t = u64::MAX)]
    pub t_max: u64,
    /// auto, every, epochs or geometric:R.
    #[arg(long, default_value = "auto")]
    pub sample: String,
    /// Dimension for the rate envelope; defaults to the trace's column count.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub float: bool,
    #[arg(long, default_value_t = fpdyn_core::matrix::DEFAULT_TOLERANCE)]
    pub epsilon: f64,
    /// Write <prefix>.dat and a gnuplot script <prefix>.gp.
    #[arg(long)]
    pub plot_out: Option<PathBuf>,
}

/// Process exit status of a finished command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    ValidationFailed,
}

pub fn execute(cli: Cli, out: &mut dyn Write) -> anyhow::Result<Status> {
    match cli.command {
        Command::Construct(a) => construct(a, out),
        Command::Simulate(a) => simulate(a, out),
        Command::Validate(a) => validate(a, out),
        Command::Analyze(a) => analyze(a, out),
    }
}

fn fmt_vec(xs: &[u64]) -> String {
    let items: Vec<String> = xs.iter().map(u64::to_string).collect();
    format!("[{}]", items.join(","))
}

fn need<T>(value: Option<T>, flag: &str, what: &str) -> anyhow::Result<T> {
    value.with_context(|| format!("--{flag} is required for {what}"))
}

fn construct(a: ConstructArgs, out: &mut dyn Write) -> anyhow::Result<Status> {
    let mut records: Vec<EpochRecord> = Vec::new();
    let (schedule, name): (Schedule, &str) = match (a.variant, a.n) {
        (Variant::Main, 2) => (main_i2(need(a.k, "k", "main with n = 2")?)?, "construct-main"),
        (Variant::Main, n) => {
            let (s, r) = main_dynamic(n, need(a.epochs, "epochs", "main")?)?;
            records = r;
            (s, "construct-main")
        }
        (Variant::Padding, 2) => (
            padding_i2(need(a.k, "k", "padding")?, Orientation::V1Low)?,
            "construct-padding",
        ),
        (Variant::Padding, n) => (padding_in(n, need(a.k, "k", "padding")?)?, "construct-padding"),
        (Variant::Part2, n) => (part2(n, need(a.big_t, "T", "part2")?)?.0, "construct-part2"),
    };
    let end = schedule.replay()?;
    writeln!(out, "steps={}", schedule.len())?;
    writeln!(out, "U={}", fmt_vec(end.u()))?;
    writeln!(out, "V={}", fmt_vec(end.v()))?;
    writeln!(out, "gap={}", end.gap())?;
    if !records.is_empty() {
        writeln!(out, "{:>6} {:>12} {:>12} {:>10} {:>10}", "epoch", "t", "T", "G", "R")?;
        for r in &records {
            writeln!(
                out,
                "{:>6} {:>12} {:>12} {:>10} {:>10}",
                r.index, r.t, r.big_t, r.gap, r.r
            )?;
        }
    }
    if let Some(path) = &a.out {
        let header = TraceHeader::for_matrix(&PayoffMatrix::<num_bigint::BigInt>::identity(a.n), name, None);
        let mut w = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
        write_steps(&mut w, &header, schedule.choices(), schedule.annotations())?;
        w.flush()?;
    }
    Ok(Status::Success)
}

fn simulate(a: SimulateArgs, out: &mut dyn Write) -> anyhow::Result<Status> {
    let mut configs = match &a.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            ConfigFile::parse(&text)
                .with_context(|| format!("parsing {}", path.display()))?
                .into_vec()
        }
        None => vec![ExperimentConfig {
            game: a.game,
            policy: a.policy,
            seed: a.seed.unwrap_or(0),
            steps: a.steps,
            sample_ratio: a.ratio,
            epsilon: a.epsilon,
            trace_out: a.out.clone(),
            csv_out: a.csv.clone(),
        }],
    };
    if let Some(master) = a.seed.filter(|_| a.config.is_some()) {
        let single = configs.len() == 1;
        for (j, c) in configs.iter_mut().enumerate() {
            c.seed = if single { master } else { job_seed(master, j as u64) };
        }
    }
    let chunk = configs.len().div_ceil(a.jobs.max(1)).max(1);
    let mut results: Vec<Option<anyhow::Result<_>>> = (0..configs.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        for (cfgs, slots) in configs.chunks(chunk).zip(results.chunks_mut(chunk)) {
            scope.spawn(move || {
                for (c, slot) in cfgs.iter().zip(slots) {
                    *slot = Some(run_and_write(c));
                }
            });
        }
    });
    for (c, r) in configs.iter().zip(results) {
        let outcome = r.expect("every config runs")?;
        let gap = outcome
            .final_normalized_gap
            .map_or_else(|| "none".to_string(), fmt_float);
        writeln!(
            out,
            "game={} policy={} seed={} steps={} samples={} final_normalized_gap={gap}",
            c.game,
            outcome.trace.header.policy,
            c.seed,
            outcome.trace.len(),
            outcome.series.len()
        )?;
    }
    Ok(Status::Success)
}

fn open(path: &Path) -> anyhow::Result<BufReader<File>> {
    Ok(BufReader::new(
        File::open(path).with_context(|| format!("opening {}", path.display()))?,
    ))
}

fn validate(a: ValidateArgs, out: &mut dyn Write) -> anyhow::Result<Status> {
    let file = read_trace(open(&a.file)?)?;
    let trace = &file.trace;
    let report = if a.float {
        validate_trace(&trace.header.float_matrix(a.epsilon)?, trace)?
    } else {
        validate_trace(&trace.header.rational_matrix()?, trace)?
    };
    if a.json {
        writeln!(out, "{}", report_json(&report))?;
    } else {
        write!(out, "{}", report_text(&report))?;
    }
    Ok(if report.ok {
        Status::Success
    } else {
        Status::ValidationFailed
    })
}

fn parse_sample(s: &str, has_epochs: bool) -> anyhow::Result<SampleAt> {
    Ok(match s {
        "auto" if has_epochs => SampleAt::EpochStarts,
        "auto" => SampleAt::Geometric(1.1),
        "every" => SampleAt::EveryStep,
        "epochs" => SampleAt::EpochStarts,
        other => match other.strip_prefix("geometric:").and_then(|r| r.parse::<f64>().ok()) {
            Some(r) if r > 1.0 => SampleAt::Geometric(r),
            _ => bail!("--sample: expected auto, every, epochs or geometric:R with R > 1, got {other:?}"),
        },
    })
}

fn is_csv(path: &Path) -> anyhow::Result<bool> {
    let mut first = String::new();
    open(path)?.read_line(&mut first)?;
    Ok(first.trim_end() == CSV_HEADER)
}

fn analyze(a: AnalyzeArgs, out: &mut dyn Write) -> anyhow::Result<Status> {
    let (series, envelope_n): (GapSeries, Option<usize>) = if is_csv(&a.file)? {
        (read_gap_csv(open(&a.file)?)?, a.n)
    } else {
        let file = read_trace(open(&a.file)?)?;
        let sample = parse_sample(&a.sample, file.epoch_comments > 0)?;
        let trace = file.trace;
        let series = match &trace.header.matrix {
            MatrixDescriptor::Identity(n) => {
                // Without annotations, epoch starts are the balanced states of the replay.
                schedule_gap_series(&Schedule::from_choices(*n, trace.steps.iter().copied()), &sample)?
            }
            MatrixDescriptor::Inline(_) if a.float => {
                gap_series(&trace.header.float_matrix(a.epsilon)?, &trace, &sample)?
            }
            MatrixDescriptor::Inline(_) => gap_series(&trace.header.rational_matrix()?, &trace, &sample)?,
        };
        let n = a.n.or(match trace.header.matrix {
            MatrixDescriptor::Identity(n) => Some(n),
            MatrixDescriptor::Inline(_) => None,
        });
        (series, n)
    };
    let fit = fit_exponent(&series, a.t_min, a.t_max)?;
    write!(out, "{}", fit_summary(&fit))?;
    if let Some(n) = envelope_n {
        let in_range = GapSeries {
            samples: series.samples.iter().filter(|s| s.t >= n as u64).cloned().collect(),
        };
        let env = rate_envelope(n, &in_range)?;
        if env.zero_gap_excluded > 0 {
            eprintln!(
                "warning: {} zero-gap samples left out of the envelope",
                env.zero_gap_excluded
            );
        }
        write!(out, "{}", envelope_summary(&env))?;
    }
    if let Some(prefix) = &a.plot_out {
        write_plot(prefix, &series, &fit)?;
    }
    Ok(Status::Success)
}

fn write_plot(prefix: &Path, series: &GapSeries, fit: &ExponentFit) -> anyhow::Result<()> {
    let dat = prefix.with_extension("dat");
    let gp = prefix.with_extension("gp");
    let mut w = BufWriter::new(File::create(&dat).with_context(|| format!("creating {}", dat.display()))?);
    writeln!(w, "# t normalized_gap")?;
    for s in &series.samples {
        writeln!(w, "{} {}", s.t, fmt_float(s.normalized_f64()))?;
    }
    w.flush()?;
    let dat_name = dat
        .file_name()
        .map(|f| f.to_string_lossy().into_owned())
        .unwrap_or_default();
    let script = format!(
        "set logscale xy\nset xlabel \"t\"\nset ylabel \"normalized gap\"\n\
         fit_line(x) = exp({}) * x**({})\n\
         plot \"{dat_name}\" using 1:2 with points title \"gap/t\", \\\n     fit_line(x) with lines title \"slope {}\"\n",
        fmt_float(fit.intercept),
        fmt_float(fit.slope),
        format_args!("{:.4}", fit.slope)
    );
    fs::write(&gp, script).with_context(|| format!("writing {}", gp.display()))?;
    Ok(())
}

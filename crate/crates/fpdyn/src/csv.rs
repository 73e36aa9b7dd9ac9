//! Gap series as CSV: `t,gap_num,gap_den,normalized_gap_float`.

use std::io::{self, BufRead, Write};

use fpdyn_core::analysis::{GapSample, GapSeries};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::tracefile::ParseError;

pub const CSV_HEADER: &str = "t,gap_num,gap_den,normalized_gap_float";

/// Fixed-precision float formatting shared by every text output.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.12e}")
}

pub fn write_gap_csv<W: Write>(w: &mut W, series: &GapSeries) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for s in &series.samples {
        writeln!(
            w,
            "{},{},{},{}",
            s.t,
            s.gap.numer(),
            s.gap.denom(),
            fmt_float(s.normalized_f64())
        )?;
    }
    Ok(())
}

pub fn read_gap_csv<R: BufRead>(r: R) -> Result<GapSeries, ParseError> {
    let err = |line: usize, message: String| ParseError::Syntax { line, message };
    let mut lines = r.lines();
    let first = lines.next().ok_or_else(|| err(1, "empty file".into()))??;
    if first != CSV_HEADER {
        return Err(err(1, format!("expected header {CSV_HEADER:?}")));
    }
    let mut samples: Vec<GapSample> = Vec::new();
    for (k, text) in lines.enumerate() {
        let line = k + 2;
        let text = text?;
        let cols: Vec<&str> = text.split(',').collect();
        let [t, num, den, _] = cols[..] else {
            return Err(err(line, "expected 4 columns".into()));
        };
        let t: u64 = t.parse().map_err(|_| err(line, format!("bad t {t:?}")))?;
        let num: BigInt = num.parse().map_err(|_| err(line, format!("bad gap_num {num:?}")))?;
        let den: BigInt = den.parse().map_err(|_| err(line, format!("bad gap_den {den:?}")))?;
        if den.is_zero() {
            return Err(err(line, "zero denominator".into()));
        }
        if t == 0 || samples.last().is_some_and(|s| s.t >= t) {
            return Err(err(line, "t must be positive and strictly increasing".into()));
        }
        samples.push(GapSample::new(t, BigRational::new(num, den)));
    }
    Ok(GapSeries { samples })
}

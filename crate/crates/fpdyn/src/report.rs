//! Human and machine readable summaries. Strategy indices are 1-based here.

use std::collections::BTreeMap;

use fpdyn_core::analysis::{ExponentFit, RateEnvelope};
use fpdyn_core::validator::ValidationReport;
use serde::Serialize;

use crate::csv::fmt_float;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ViolationRecord {
    pub t: u64,
    pub side: String,
    pub chosen_index: usize,
    pub tie_set: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReportRecord {
    pub ok: bool,
    pub steps_checked: u64,
    pub first_violation: Option<ViolationRecord>,
    pub structural_checks: BTreeMap<String, bool>,
}

impl From<&ValidationReport> for ReportRecord {
    fn from(r: &ValidationReport) -> Self {
        Self {
            ok: r.ok,
            steps_checked: r.steps_checked,
            first_violation: r.first_violation.as_ref().map(|v| ViolationRecord {
                t: v.t,
                side: v.side.to_string(),
                chosen_index: v.chosen_index + 1,
                tie_set: v.tie_set.iter().map(|k| k + 1).collect(),
            }),
            structural_checks: r.structural_checks.clone(),
        }
    }
}

pub fn report_json(r: &ValidationReport) -> String {
    serde_json::to_string(&ReportRecord::from(r)).expect("plain data serializes")
}

pub fn report_text(r: &ValidationReport) -> String {
    let rec = ReportRecord::from(r);
    let mut out = format!("ok={}\nsteps_checked={}\n", rec.ok, rec.steps_checked);
    match &rec.first_violation {
        None => out.push_str("first_violation=none\n"),
        Some(v) => {
            let ties: Vec<String> = v.tie_set.iter().map(|k| k.to_string()).collect();
            out.push_str(&format!(
                "first_violation=t={} side={} chosen={} tie_set={{{}}}\n",
                v.t,
                v.side,
                v.chosen_index,
                ties.join(",")
            ));
        }
    }
    for (name, pass) in &rec.structural_checks {
        out.push_str(&format!("check.{name}={}\n", if *pass { "pass" } else { "fail" }));
    }
    out
}

pub fn fit_summary(fit: &ExponentFit) -> String {
    format!(
        "slope={}\nintercept={}\nstderr={}\nt_min={}\nt_max={}\nsample_count={}\n",
        fmt_float(fit.slope),
        fmt_float(fit.intercept),
        fmt_float(fit.stderr),
        fit.t_min,
        fit.t_max,
        fit.sample_count
    )
}

pub fn envelope_summary(env: &RateEnvelope) -> String {
    format!(
        "c_low={}\nc_high={}\nenvelope_samples={}\nzero_gap_excluded={}\n",
        fmt_float(env.c_low),
        fmt_float(env.c_high),
        env.samples_used,
        env.zero_gap_excluded
    )
}

/// Parses `key=value` lines back into a map.
pub fn parse_key_values(text: &str) -> BTreeMap<String, String> {
    text.lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

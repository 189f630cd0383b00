//! Verification reports (JSON) and correlation profiles (CSV).

use std::io::Write;

use ccc_core::correlation::CorrelationProfile;
use ccc_core::verify::{ProbeOutcome, VerifyReport, Violation};
use serde::Serialize;

use crate::error::CliResult;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViolationJson {
    pub k1: usize,
    pub k2: usize,
    pub tau: i64,
    /// Multiplicity of each power of `xi_q` in the correlation value.
    pub counts: Vec<i64>,
    pub re: f64,
    pub im: f64,
    pub magnitude: f64,
}

impl From<&Violation> for ViolationJson {
    fn from(v: &Violation) -> Self {
        let z = v.value.to_complex();
        ViolationJson {
            k1: v.k1,
            k2: v.k2,
            tau: v.tau,
            counts: v.value.counts().to_vec(),
            re: z.re,
            im: z.im,
            magnitude: z.norm(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportJson {
    pub is_ccc: bool,
    pub square: bool,
    pub peak: i64,
    pub mode: &'static str,
    pub shifts_tested: usize,
    pub violation_count: usize,
    pub violations: Vec<ViolationJson>,
}

impl From<&VerifyReport> for ReportJson {
    fn from(r: &VerifyReport) -> Self {
        ReportJson {
            is_ccc: r.is_ccc,
            square: r.square,
            peak: r.peak,
            mode: r.mode.name(),
            shifts_tested: r.shifts_tested,
            violation_count: r.violation_count,
            violations: r.violations.iter().map(ViolationJson::from).collect(),
        }
    }
}

pub fn report_json(r: &VerifyReport) -> String {
    serde_json::to_string_pretty(&ReportJson::from(r)).expect("plain data")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeJson {
    pub corrupted_block: usize,
    pub corrupted_link: usize,
    pub side: String,
    pub found: bool,
    pub at_witness_shift: bool,
    pub cells_scanned: usize,
    pub evidence: Option<ViolationJson>,
}

pub fn probe_json(block: usize, link: usize, side: &str, outcome: &ProbeOutcome) -> String {
    let j = ProbeJson {
        corrupted_block: block,
        corrupted_link: link,
        side: side.into(),
        found: outcome.evidence.is_some(),
        at_witness_shift: outcome.at_witness_shift,
        cells_scanned: outcome.cells_scanned,
        evidence: outcome.evidence.as_ref().map(ViolationJson::from),
    };
    serde_json::to_string_pretty(&j).expect("plain data")
}

/// `tau,count_0,..,count_{q-1},is_zero,re,im,magnitude`, one row per shift.
pub fn write_profile_csv<W: Write>(profile: &CorrelationProfile, out: W) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["tau".to_string()];
    header.extend((0..profile.modulus).map(|j| format!("count_{j}")));
    header.extend(["is_zero", "re", "im", "magnitude"].map(String::from));
    w.write_record(&header)?;
    for e in &profile.entries {
        let mut row = vec![e.tau.to_string()];
        row.extend(e.value.counts().iter().map(|c| c.to_string()));
        row.push(e.is_zero.to_string());
        row.push(e.re.to_string());
        row.push(e.im.to_string());
        row.push(e.magnitude.to_string());
        w.write_record(&row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

//! Text and JSON renderings of check reports.

use serde::Serialize;
use serde_json::Value;

use tpn_core::CheckReport;

/// The stable JSON shape of one report. Timing is left out so that repeated
/// runs print identical bytes.
#[derive(Serialize)]
pub struct ReportRecord {
    pub identity: String,
    pub status: &'static str,
    pub tuples_checked: u64,
    pub counterexample: Option<Vec<usize>>,
    pub residual: Option<Vec<String>>,
}

impl From<&CheckReport> for ReportRecord {
    fn from(r: &CheckReport) -> Self {
        ReportRecord {
            identity: r.identity.to_string(),
            status: r.status.as_str(),
            tuples_checked: r.tuples_checked,
            counterexample: r.counterexample.as_ref().map(|c| c.tuple.clone()),
            residual: r.counterexample.as_ref().map(|c| c.residual.coords().iter().map(|x| x.to_string()).collect()),
        }
    }
}

pub fn reports_to_value(reports: &[CheckReport]) -> Value {
    let records: Vec<ReportRecord> = reports.iter().map(ReportRecord::from).collect();
    serde_json::to_value(records).expect("report records serialize")
}

pub fn render_json(reports: &[CheckReport]) -> String {
    crate::systemfile::to_json_text(&reports_to_value(reports))
}

/// One line per report:
/// `NL       pass  tuples=64`, or with the failing tuple and residual appended.
pub fn render_text(reports: &[CheckReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&format!("{:<8} {:<4}  tuples={}", r.identity.as_str(), r.status.as_str(), r.tuples_checked));
        if let Some(c) = &r.counterexample {
            let tuple: Vec<String> = c.tuple.iter().map(usize::to_string).collect();
            out.push_str(&format!("  at ({})  residual {}", tuple.join(", "), c.residual));
        }
        out.push('\n');
    }
    out
}

use std::path::Path;

use crate::error::{Error, Result};
use crate::verification::ConvergenceReport;

pub const CSV_HEADER: [&str; 6] = ["level", "h", "err_dtE", "err_curl", "rate_dtE", "rate_curl"];

/// One row per level; the rate columns compare a level with the previous one
/// and are empty on the first row. Numbers use the shortest representation
/// that parses back to the same value.
pub fn csv_report_string(report: &ConvergenceReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    let rates = report.rates();
    for (i, level) in report.levels.iter().enumerate() {
        let (rate_dt, rate_curl) = match i.checked_sub(1).map(|j| rates[j]) {
            Some((a, b)) => (format!("{a:e}"), format!("{b:e}")),
            None => (String::new(), String::new()),
        };
        w.write_record([
            level.level.to_string(),
            format!("{:e}", level.h),
            format!("{:e}", level.err_dt_e),
            format!("{:e}", level.err_curl),
            rate_dt,
            rate_curl,
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is ASCII"))
}

pub fn write_csv_report(report: &ConvergenceReport, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, csv_report_string(report)?)?;
    Ok(())
}

//! Checkpoint reports as plain CSV: `step,rel_error_percent,increment_norm,wall_ms`.
//!
//! Floats are written in shortest round-trip form ('.' decimal separator,
//! locale-independent). A zero-truth run has no defined relative error;
//! that column is written as 0 by convention (see the library docs).

use std::fmt::Write as _;
use std::path::Path;

use kmiter::RunReport;

use crate::error::CliError;

pub const CSV_HEADER: &str = "step,rel_error_percent,increment_norm,wall_ms";

pub fn format_report_csv(report: &RunReport) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in &report.records {
        writeln!(
            out,
            "{},{:?},{:?},{:?}",
            r.step,
            r.rel_error_percent.unwrap_or(0.0),
            r.increment_norm,
            r.wall_ms
        )
        .unwrap();
    }
    out
}

pub fn write_report_csv(path: &Path, report: &RunReport) -> Result<(), CliError> {
    std::fs::write(path, format_report_csv(report))
        .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))
}

/// Parse the rows back (used by tests and downstream tooling).
pub fn parse_report_csv(text: &str) -> Result<Vec<(u64, f64, f64, f64)>, CliError> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => {
            return Err(CliError::config(format!(
                "bad CSV header: {other:?} (expected {CSV_HEADER})"
            )))
        }
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 4 {
            return Err(CliError::config(format!("row {i}: expected 4 cells")));
        }
        let parse_f = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| CliError::config(format!("row {i}: {e}")))
        };
        rows.push((
            cells[0]
                .parse::<u64>()
                .map_err(|e| CliError::config(format!("row {i}: {e}")))?,
            parse_f(cells[1])?,
            parse_f(cells[2])?,
            parse_f(cells[3])?,
        ));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use kmiter::{run_experiment, ExperimentConfig, GroundTruth};

    #[test]
    fn csv_shape_and_round_trip() {
        let mut config = ExperimentConfig::reference_parabolic(GroundTruth::SingleMode {
            k: 1,
            m: 1,
            amplitude: 1.0,
        });
        config.checkpoints = vec![10, 100, 1000, 10_000, 100_000];
        let report = run_experiment(&config).unwrap();
        let text = format_report_csv(&report);
        assert!(text.starts_with(CSV_HEADER));
        let rows = parse_report_csv(&text).unwrap();
        assert_eq!(rows.len(), 5);
        assert_eq!(rows[0].0, 10);
        for (row, rec) in rows.iter().zip(&report.records) {
            assert_eq!(row.1, rec.rel_error_percent.unwrap());
            assert_eq!(row.2, rec.increment_norm);
        }
        // No locale separators: only '.', ',', digits, signs, exponents.
        for line in text.lines().skip(1) {
            assert!(line
                .chars()
                .all(|c| c.is_ascii_digit() || ",.eE-+".contains(c)));
        }
    }
}

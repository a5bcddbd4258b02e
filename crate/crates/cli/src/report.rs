//! Report emission: a text report with one section per task and one CSV per
//! task carrying rows of (parameter, value, tolerance).  Output bytes depend
//! only on the scenario and its seed — wall-clock timings stay on the
//! console.

use std::fs;
use std::path::{Path, PathBuf};

use crate::runner::{Report, TaskStatus};

/// Output formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
}

impl Format {
    pub fn parse_list(s: &str) -> Result<Vec<Format>, String> {
        let mut out = Vec::new();
        for part in s.split(',') {
            match part.trim() {
                "text" => out.push(Format::Text),
                "csv" => out.push(Format::Csv),
                other => return Err(format!("unknown format {other:?}")),
            }
        }
        if out.is_empty() {
            return Err("no output format given".into());
        }
        Ok(out)
    }
}

/// Renders the text report (deterministic; no timestamps or timings).
pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    out.push_str(&format!("scenario: {}\n", report.scenario_name));
    for section in &report.sections {
        out.push_str(&format!("\n== {} ==\n", section.task.name()));
        match &section.status {
            TaskStatus::Ok => {}
            TaskStatus::Skipped(reason) => out.push_str(&format!("status: skipped ({reason})\n")),
            TaskStatus::Failed(reason) => out.push_str(&format!("status: failed ({reason})\n")),
        }
        for line in &section.lines {
            out.push_str(line);
            out.push('\n');
        }
        for row in &section.rows {
            out.push_str(&format!(
                "{} = {:.12e} (tolerance {:.3e})\n",
                row.parameter, row.value, row.tolerance
            ));
        }
        for warning in &section.warnings {
            out.push_str(&format!("warning: {warning}\n"));
        }
    }
    out
}

/// Renders one CSV per task with table rows.
pub fn render_csvs(report: &Report) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for section in &report.sections {
        if section.rows.is_empty() {
            continue;
        }
        let mut csv = String::from("parameter,value,tolerance\n");
        for row in &section.rows {
            csv.push_str(&format!(
                "{},{:.12e},{:.12e}\n",
                row.parameter, row.value, row.tolerance
            ));
        }
        out.push((section.task.name().to_string(), csv));
    }
    out
}

/// Writes the requested formats into `out_dir`, returning the files written.
pub fn emit_report(
    report: &Report,
    out_dir: &Path,
    formats: &[Format],
) -> std::io::Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    if formats.contains(&Format::Text) {
        let path = out_dir.join(format!("{}_report.txt", report.scenario_name));
        fs::write(&path, render_text(report))?;
        written.push(path);
    }
    if formats.contains(&Format::Csv) {
        for (task, csv) in render_csvs(report) {
            let path = out_dir.join(format!("{}_{}.csv", report.scenario_name, task));
            fs::write(&path, csv)?;
            written.push(path);
        }
    }
    Ok(written)
}

/// Console summary including wall-clock times (never written to files).
pub fn console_summary(report: &Report) -> String {
    let mut out = String::new();
    for section in &report.sections {
        let status = match &section.status {
            TaskStatus::Ok => "ok".to_string(),
            TaskStatus::Skipped(r) => format!("skipped: {r}"),
            TaskStatus::Failed(r) => format!("FAILED: {r}"),
        };
        out.push_str(&format!(
            "[{}] {} ({} ms)\n",
            section.task.name(),
            status,
            section.wall_ms
        ));
    }
    out
}

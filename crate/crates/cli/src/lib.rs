//! Config-driven front door for the weighted-Sobolev toolkit: scenario
//! parsing, task orchestration, and deterministic report emission.

pub mod config;
pub mod report;
pub mod runner;

pub use config::{emit_config, parse_config, Knobs, Scenario, Task};
pub use report::{console_summary, emit_report, render_csvs, render_text, Format};
pub use runner::{run_scenario, Report, Row, TaskSection, TaskStatus};

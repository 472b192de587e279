//! Scenario files, audits and reports for the `sphertwist` command.

pub mod locate;

pub mod audits;
pub mod catalog;
pub mod doc;
pub mod report;
pub mod run;
pub mod setup;

pub use doc::{parse_scenario, parse_scenario_bytes, serialize_scenario, FormatError, ScenarioDoc};
pub use report::{serialize_report, Format, Report};
pub use run::{run, RunOptions};

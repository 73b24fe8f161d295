//! Config files, report rendering and the run driver behind the `maslovkit`
//! binary.

pub mod config;
pub mod report;
pub mod run;

pub use config::{parse_config, render_config, ConfigError, Format, Mode, RunConfig};
pub use report::{emit_report, Report};
pub use run::{execute, Outcome, Settings};

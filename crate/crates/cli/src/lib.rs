//! Config parsing, report writing and subcommand logic behind the
//! `shotnoise` binary.

pub mod commands;
pub mod config;
pub mod report;

pub use commands::{execute, scheme_listing, summary, Command, Overrides};
pub use config::{parse_config, render_config, ConfigError, ParsedConfig};
pub use report::{emit_report, ReportDocument, RunRow, CSV_HEADER};

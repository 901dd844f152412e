//! Command-line front end: configuration, execution and artifacts.

pub mod cli;
pub mod config;
pub mod run;
pub mod svg;
pub mod table;

pub use config::{parse_config, Command, ExperimentSpec, Job};
pub use run::{execute, run, Artifacts, Outcome};
pub use table::{write_table, Cell, ResultTable};

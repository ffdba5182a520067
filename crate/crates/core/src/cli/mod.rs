//! Declaration files, the command driver and report output.

pub mod driver;
pub mod module;
pub mod report;

pub use driver::{export_prelude, read_module, run, run_in, CliError, Command};
pub use module::{parse_module, print_module, Decl};
pub use report::{emit_report, exit_code, Format, Report, Status};

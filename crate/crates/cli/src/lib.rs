//! The `nugrass` command line: atlas and bundle verification runs that emit
//! deterministic JSON reports.
//!
//! Exit codes: 0 when every checked identity holds, 1 when one fails, 2 for
//! invalid input.

pub mod commands;
pub mod json;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use commands::{Cli, CliError, CommandOutput};

/// Parses `args` (including the program name), runs the command, writes the
/// report to `--output` or `out`, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let output = cli.output().cloned();
    match commands::execute(&cli) {
        Ok(result) => {
            let mut text = serde_json::to_string_pretty(&result.report).expect("reports serialize");
            text.push('\n');
            let written = match &output {
                Some(path) => std::fs::write(path, &text),
                None => out.write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: cannot write the report: {e}");
                return 2;
            }
            if !result.summary.is_empty() {
                let _ = writeln!(err, "{}", result.summary.trim_end());
            }
            if result.success {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

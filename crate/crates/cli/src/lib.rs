//! Command-line front end of `depthkit`: dataset ingestion, depth and region
//! computation, and contour plot emission.

pub mod commands;
pub mod curves;
pub mod dataset;
pub mod document;
pub mod error;

pub use commands::{execute, Cli};
pub use dataset::{eu27, load_dataset, Dataset, LoadOptions};
pub use document::{export_region_svg, ContourDocument};
pub use error::{CliError, CliResult};

use clap::Parser;

/// Parses `args` (including the program name) and runs the command, returning the
/// text it printed.
pub fn run<I, T>(args: I) -> CliResult<String>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Usage(clap_message(&e)))?;
    let mut out = Vec::new();
    execute(&cli, &mut out)?;
    Ok(String::from_utf8(out).expect("utf-8 output"))
}

/// The message paragraph of a clap error on one line, without its `error: ` prefix.
pub fn clap_message(e: &clap::Error) -> String {
    let text = e.to_string();
    let message: Vec<&str> = text
        .lines()
        .take_while(|l| !l.trim().is_empty())
        .map(str::trim)
        .collect();
    let line = message.join(" ");
    line.strip_prefix("error: ").unwrap_or(&line).to_string()
}

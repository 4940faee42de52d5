//! Command-line front end: experiment presets and analytic tables on top of
//! `moran-core`, writing CSV tables and JSON manifests.

pub mod args;
pub mod error;
pub mod limits;
pub mod m0;
pub mod output;
pub mod tau;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

pub use error::{CliError, Result};

use args::{Cli, Command};
use output::Sink;

/// Parses `argv` (program name first) and runs the command. Help and
/// version requests print to `stdout` and succeed.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            return write!(stdout, "{}", e.render()).map_err(|e| CliError::io("<stdout>", e));
        }
        Err(e) => return Err(CliError::Usage(e.render().to_string())),
    };
    let argv: Vec<String> = argv
        .iter()
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    match &cli.command {
        Command::Tau(a) => {
            let mut sink = Sink::new(a.run.out.clone(), a.run.format, stdout, stderr);
            tau::cmd_tau(a, &argv, &mut sink).map(drop)
        }
        Command::Figure(a) => {
            let mut sink = Sink::new(a.run.out.clone(), a.run.format, stdout, stderr);
            tau::cmd_figure(a, &argv, &mut sink).map(drop)
        }
        Command::M0(a) => {
            let mut sink = Sink::new(a.run.out.clone(), a.run.format, stdout, stderr);
            m0::cmd_m0(a, &argv, &mut sink).map(drop)
        }
        Command::Limits { which } => limits::cmd_limits(which, stdout),
    }?;
    stdout.flush().map_err(|e| CliError::io("<stdout>", e))
}

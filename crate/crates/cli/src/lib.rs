//! Command-line driver for the matbeta identity checks.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod grid;

pub use args::{Cli, Command};
pub use config::Settings;
pub use error::{CliError, ExitStatus};

/// Parses `argv`, runs the command and returns the process exit status.
pub fn run<W: std::io::Write, E: std::io::Write>(cli: Cli, out: &mut W, err: &mut E) -> ExitStatus {
    match commands::dispatch(cli, out) {
        Ok(status) => status,
        Err(CliError::Output(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitStatus::Pass,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.status()
        }
    }
}

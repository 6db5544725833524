//! The `germ` command line: session files, command dispatch and reports.

pub mod run;
pub mod session;

pub use run::{run, Cli, CliError, Command, Report};
pub use session::{parse_session, Session, SessionError};

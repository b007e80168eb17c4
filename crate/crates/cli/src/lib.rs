//! Command-line front end: every invocation is reduced to a [`RunConfig`],
//! executed, and written as JSON or CSV.

pub mod args;
pub mod complex;
pub mod config;
pub mod error;
pub mod run;

pub use args::Cli;
pub use config::{Command, EvalFunction, EvalRequest, Format, RunConfig, SpecfunRequest, SpecialFunction};
pub use error::CliError;
pub use run::{execute, run, Outcome};

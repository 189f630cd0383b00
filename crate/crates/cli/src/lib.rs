//! Command-line plumbing for `ccc`: build configs, code-set files, reports,
//! correlation profiles and the (12, 72) reproduction.

pub mod codeset_file;
pub mod commands;
pub mod config;
pub mod error;
pub mod gram;
pub mod report;
pub mod reproduce;

pub use error::{CliError, CliResult};

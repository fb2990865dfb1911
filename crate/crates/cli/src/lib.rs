//! Command-line front end: config parsing, run manifests and the
//! `simulate`, `sweep`, `verify` and `report` subcommands.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod manifest;

pub use config::{parse_config, parse_str, ConfigFile, DesignEntry, Loaded};
pub use error::{CliError, EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE};
pub use manifest::RunManifest;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}

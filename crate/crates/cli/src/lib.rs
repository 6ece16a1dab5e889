//! Command-line front end: configuration, datasets and subcommands.

pub mod commands;
pub mod config;
pub mod dataset;

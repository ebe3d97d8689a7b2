//! Command-line front end: argument parsing, configuration loading, command
//! dispatch and report emission.

pub mod args;
pub mod commands;
pub mod config;
pub mod report;

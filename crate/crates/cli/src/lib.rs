//! Command implementations behind the `superball` binary.
//!
//! Each command is a plain function returning its rendered output, so the
//! binary only parses flags, writes files, and maps errors to exit codes:
//! `0` success, `1` verification failure, `2` usage or I/O error.

pub mod commands;
pub mod curve;
pub mod figure;
pub mod format;
pub mod verify;

pub use commands::CliError;

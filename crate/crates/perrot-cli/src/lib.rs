//! Library half of the `perrot` command-line interface: subcommand
//! runners, output assembly, and the fixture-backed regression runner.
//! The binary in `main.rs` is a thin argument-parsing shell over this
//! crate so the integration tests can drive the same code paths.

pub mod commands;
pub mod output;
pub mod regress;

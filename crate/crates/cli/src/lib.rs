//! Library side of the `cra` command: the spec format and the subcommands.

pub mod commands;
pub mod spec;

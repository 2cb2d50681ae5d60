//! JSON file formats and the command-line front end for `gainswitch-core`.

pub mod cli;
pub mod format;

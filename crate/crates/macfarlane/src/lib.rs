//! File formats, text and SVG output, and the command-line driver for the
//! `macfarlane-core` engine.

pub mod cli;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod svg;
pub mod text;

pub use error::CliError;

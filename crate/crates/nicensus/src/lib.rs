//! Command-line front end and parallel drivers for `nicensus-core`.
//!
//! The binary `nicensus` wraps [`cli::run`]; everything it prints is also
//! reachable from the library, including the verification suites used by
//! the `acceptance` test target.

pub mod cli;
pub mod compare;
pub mod error;
pub mod format;
pub mod json;
pub mod manifest;
pub mod par;
pub mod suites;

pub use error::{CliError, Result};

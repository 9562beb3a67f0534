//! File formats, kernel presets, canonical reports and the command-line
//! driver for `graphon-cheeger`.

pub mod app;
pub mod canonical;
pub mod error;
pub mod io;
pub mod preset;
pub mod report;

pub use app::{run, Cli, EXIT_CHECK_FAILED, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE};
pub use canonical::to_canonical_string;
pub use error::{CliError, Result};
pub use io::{emit_graphon, load_graphon, parse_graphon, Format};
pub use preset::{discretize_preset, KernelPreset};
pub use report::Report;

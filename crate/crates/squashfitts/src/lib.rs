//! File formats, rendering and the command line for `squashfitts-core`.
//!
//! - [`dataset`]: the trial CSV schema, validation and the bundled dataset.
//! - [`report`]: the versioned JSON report and its cross-checks.
//! - [`plot`]: SVG scatter plots and point-series CSV.
//! - [`cli`]: the `squashfitts` subcommands.

use std::path::PathBuf;

pub mod cli;
pub mod dataset;
pub mod plot;
pub mod reference;
pub mod report;

pub use dataset::{
    bundled_table1, parse_csv, parse_csv_with, write_csv, Dataset, ParseOptions, ValidationReport,
};
pub use plot::{emit_series_csv, emit_svg, PlotMapping, PlotStyle};
pub use report::{render_report_json, JsonReport};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] squashfitts_core::Error),
    #[error("dataset has no trials")]
    EmptyDataset,
    #[error("invalid dataset\n{0}")]
    Invalid(ValidationReport),
    #[error("bad plot style: {0}")]
    Style(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl Error {
    /// Process exit status: 1 for data or fit failures, 2 for usage or environment.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Core(e) if e.is_data_error() => 1,
            Error::Core(_) => 2,
            Error::EmptyDataset | Error::Invalid(_) => 1,
            Error::Style(_) | Error::Io { .. } | Error::Usage(_) => 2,
        }
    }
}

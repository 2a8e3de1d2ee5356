//! Run configuration, time-series CSV, and binary snapshots.

pub mod config;
pub mod csv;
pub mod snapshot;

pub use config::{build_initial, parse_config, InitialData, OutputConfig, RunConfig, CONFIG_HELP};
pub use csv::{format_row, parse_row, write_series, SeriesRow, CSV_HEADER};
pub use snapshot::{decode_snapshot, encode_snapshot, read_snapshot, write_snapshot};

//! Parameter scans, point evaluations and oracle verification for the
//! `critmetro` command-line tool.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod output;
pub mod scan;
pub mod verify;

pub use config::{Mode, ScanConfig, Sweep};
pub use scan::{parse_csv, run_scan, scan_closed, scan_dd, to_csv, Table};

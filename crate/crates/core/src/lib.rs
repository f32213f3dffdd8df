//! Ordered fuzzy numbers (OFNs) from windowed time series.
//!
//! The crate turns a window of observations into a trapezoidal OFN, either
//! with the center-of-mass construction in [`ofn`] or with one of the two
//! candlestick-style baselines in [`baselines`], and derives shape statistics
//! (imprecision, skew, direction strength) in [`stats`]. [`report`] renders
//! records as tables, CSV, JSON and SVG and drives the `ofnts` binary.

pub mod averages;
pub mod baselines;
pub mod error;
pub mod ingest;
pub mod ofn;
pub mod report;
pub mod stats;

pub use error::{Error, Result};

//! Code-quality measurement toolkit: source extraction, metric suites,
//! threshold profiles, reports and SVG rendering.

pub mod census;
pub mod cli;
pub mod compare;
pub mod config;
pub mod error;
pub mod evolution;
pub mod interchange;
pub mod number;
pub mod report;
pub mod sources;
pub mod svg;

pub use error::{Error, Result};

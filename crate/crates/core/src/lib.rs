//! Event studies around a dated announcement and regressions of stock
//! returns on public-interest series.
//!
//! The pipeline runs from CSV price files ([`series`]) through event-relative
//! framing ([`frame`]), market-model abnormal returns ([`market_model`]) and
//! HC1-robust regressions ([`inference`]) to publication-style tables
//! ([`reporting`]). [`synth`] generates seeded synthetic bundles and holds
//! an independent extended-precision least-squares solver; [`study`] wires
//! everything behind a TOML study configuration.

pub mod error;
pub mod frame;
pub mod inference;
pub mod market_model;
pub mod reporting;
pub mod series;
pub mod study;
pub mod synth;

pub use error::{Error, ErrorClass, Result};

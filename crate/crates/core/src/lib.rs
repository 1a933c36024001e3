//! Journal citation metrics (Eigenfactor, Article Influence, Impact Factor,
//! Total Citations) together with the correlation, ratio and significance
//! tooling needed to see past a high correlation coefficient.
//!
//! The crate is organised bottom-up:
//!
//! - [`corpus`]: journal tables, citation ledgers, windowed citation matrices
//!   and the embedded Big Mac dataset.
//! - [`metrics`]: column normalisation, the damped power iteration and the
//!   per-journal scores derived from its fixed point.
//! - [`stats`]: Pearson/Spearman correlation, Mann-Whitney U with a log-space
//!   tail, ratio and tercile summaries.
//! - [`spurious`]: Monte-Carlo constructions of correlation induced by a
//!   shared factor, plus the logistic-map counterexample.
//! - [`report`]: rank comparisons and deterministic SVG figures.
//! - [`cli`]: the `eigenrank` command line front end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod corpus;
pub mod error;
pub mod metrics;
pub mod report;
pub mod spurious;
pub mod stats;

pub use error::{Error, Result};

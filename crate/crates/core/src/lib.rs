//! Vague information in analyst reports.
//!
//! The crate is organised around four pieces:
//!
//! - [`roughset`]: finite rough-set algebra (approximations, definability,
//!   tone classification, faithfulness) with exhaustive claim checks.
//! - [`textmetrics`]: sentence segmentation, hedging lexicon and the
//!   report-level Tone / TextOnly% / Hedge% measures.
//! - [`expectations`]: a seeded simulator of analyst panels in which numeric
//!   forecasts only incorporate precise expectations.
//! - [`econometrics`]: variable construction, fixed-effect absorption, OLS
//!   and two-way clustered standard errors.
//!
//! [`replicate`] wires the simulator and the estimators into an end-to-end
//! check of the expected signs.

pub mod econometrics;
pub mod error;
pub mod exec;
pub mod expectations;
pub mod replicate;
pub mod roughset;
pub mod textmetrics;

pub use error::{Error, Result};
pub use exec::Execution;

//! Simulated analyst panels in which numerical forecasts embed only the
//! precise part of each analyst's expectation while report tone tracks the
//! vague part.
//!
//! For every analyst-firm pair the first forecast is `E(π|P) + b(P) + η`;
//! later forecasts follow the partial-updating rule
//! `F_{t+1} = λ v_t + (1 − λ) F_t`, and the precise expectation of period
//! `t` is the one implied by that forecast. Realized outcomes are
//! `π = E(π|P) + v + ε`, so `F − π = −v + b + η − ε` holds row by row.

mod config;
mod model;
mod panel;

use thiserror::Error;

pub use config::{known_keys, Regime, RegimeFlags, SimulationConfig};
pub use model::{
    bias, emit_tone, forecast_error, gen_signals, make_forecast, realize_state,
    revision_identity_residual, update_forecast, ExpectationState,
};
pub use panel::{
    gen_panel, gen_panel_allow_unit_lambda, AuditRow, Panel, PanelRow, AUDIT_HEADER, PANEL_COLUMNS,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("invalid configuration: {}", .0.join("; "))]
    InvalidConfig(Vec<String>),
    #[error("unknown configuration keys: {}", .0.join(", "))]
    UnknownKeys(Vec<String>),
    #[error("configuration: {0}")]
    Config(String),
    #[error("lambda must lie in (0, 1), got {0}")]
    LambdaOutOfRange(f64),
    #[error("expected {expected} covariates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

//! Variable construction and panel estimation: winsorization, median-split
//! indicators, singleton dropping, fixed-effect absorption by alternating
//! projections, OLS and two-way clustered standard errors.

mod cluster;
mod construct;
mod fe;
mod ols;
mod quintile;
mod run;
mod spec;
mod stats;
mod table;

use thiserror::Error;

pub use cluster::{cluster_se, ClusterCovariance};
pub use construct::{
    bold_indicator, construct_variables, ConstructOptions, Constructed, CONSTRUCTED,
};
pub use fe::{
    absorbed_df, demean_fe, densify, drop_singletons, n_groups, DemeanDiagnostics, DemeanOptions,
    FeKey, SingletonReport,
};
pub use ols::{dependent_columns, ols, OlsFit, RANK_TOL};
pub use quintile::{quintile_table, QuintileTable};
pub use run::{
    results_csv, results_markdown, run_spec, run_specs, stars, Coefficient, DroppedTerm,
    RegressionResult, RunOptions, ABSORBED_TOL, RESULTS_HEADER,
};
pub use spec::{interaction_name, parse_specs, CmpOp, Condition, Filter, RegressionSpec};
pub use stats::{
    describe, describe_markdown, median, median_split, quantile_sorted, winsorize, Describe,
};
pub use table::{KeyColumn, ObservationTable, KEY_HEADER};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EconError {
    #[error("unknown column `{0}`")]
    UnknownColumn(String),
    #[error("column `{0}` already exists")]
    DuplicateColumn(String),
    #[error("column `{column}` has {got} rows, expected {expected}")]
    LengthMismatch {
        column: String,
        expected: usize,
        got: usize,
    },
    #[error("csv line {line}: {message}")]
    Csv { line: u64, message: String },
    #[error("{0}")]
    Domain(String),
    #[error("spec: {0}")]
    Spec(String),
    #[error("spec `{spec}`: no observations left after filtering")]
    EmptySample { spec: String },
    #[error("rank deficient design; dependent columns: {}", .columns.join(", "))]
    RankDeficient { columns: Vec<String> },
    #[error("{n} observations cannot identify {k} coefficients")]
    TooFewRows { n: usize, k: usize },
    #[error("demeaning of column {column} did not converge in {iterations} sweeps (last changes {trace:?})")]
    NotConverged {
        column: usize,
        iterations: usize,
        trace: Vec<f64>,
    },
    #[error("{dimension} cluster dimension has a single cluster; variance undefined")]
    SingleCluster { dimension: String },
    #[error("`{column}` has {got} distinct values, {needed} required")]
    TooFewDistinct {
        column: String,
        needed: usize,
        got: usize,
    },
}

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::cluster::cluster_se;
use super::fe::{absorbed_df, demean_fe, drop_singletons, DemeanOptions, FeKey};
use super::ols::{dependent_columns, ols};
use super::spec::RegressionSpec;
use super::table::ObservationTable;
use super::EconError;
use crate::Execution;

/// A column whose demeaned norm falls below this fraction of its raw norm
/// is treated as absorbed by the fixed effects.
pub const ABSORBED_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RunOptions {
    pub demean: DemeanOptions,
    pub exec: Execution,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Coefficient {
    pub term: String,
    pub estimate: f64,
    pub std_error: f64,
    pub t_stat: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DroppedTerm {
    pub term: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionResult {
    pub spec: String,
    pub outcome: String,
    pub fixed_effects: Vec<FeKey>,
    pub cluster: (FeKey, FeKey),
    pub coefficients: Vec<Coefficient>,
    pub dropped: Vec<DroppedTerm>,
    pub n_input: usize,
    pub excluded_filter: usize,
    pub excluded_missing: usize,
    pub singletons_dropped: usize,
    pub n_obs: usize,
    pub r2_within: f64,
    pub adj_r2_within: f64,
    pub r2: f64,
    pub adj_r2: f64,
    /// Share of the outcome's total variation absorbed by the fixed effects.
    pub fe_share: f64,
    pub absorbed_df: usize,
    pub clusters: (usize, usize),
    pub demean_iterations: usize,
    pub psd_repaired: bool,
}

impl RegressionResult {
    pub fn coefficient(&self, term: &str) -> Option<&Coefficient> {
        self.coefficients.iter().find(|c| c.term == term)
    }
}

fn resolve_design(
    spec: &RegressionSpec,
    table: &ObservationTable,
) -> Result<(Vec<f64>, Vec<Vec<f64>>), EconError> {
    let y = table.column(&spec.outcome)?.to_vec();
    let mut x: Vec<Vec<f64>> = spec
        .regressors
        .iter()
        .map(|r| table.column(r).map(<[f64]>::to_vec))
        .collect::<Result<_, _>>()?;
    for (a, b) in &spec.interactions {
        let ia = spec
            .regressors
            .iter()
            .position(|r| r == a)
            .expect("validated spec");
        let ib = spec
            .regressors
            .iter()
            .position(|r| r == b)
            .expect("validated spec");
        let col = x[ia].iter().zip(&x[ib]).map(|(p, q)| p * q).collect();
        x.push(col);
    }
    Ok((y, x))
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Filter, build interactions, drop singletons, absorb fixed effects, fit
/// OLS and compute two-way clustered standard errors.
pub fn run_spec(
    spec: &RegressionSpec,
    table: &ObservationTable,
    opts: &RunOptions,
) -> Result<RegressionResult, EconError> {
    spec.validate()?;
    let mask = spec.filter.mask(table)?;
    let (y_all, x_all) = resolve_design(spec, table)?;
    let n_input = table.len();
    let excluded_filter = mask.iter().filter(|m| !**m).count();
    let rows: Vec<usize> = (0..n_input)
        .filter(|&r| mask[r] && y_all[r].is_finite() && x_all.iter().all(|c| c[r].is_finite()))
        .collect();
    let excluded_missing = n_input - excluded_filter - rows.len();
    if rows.is_empty() {
        return Err(EconError::EmptySample {
            spec: spec.name.clone(),
        });
    }

    let fe_ids: Vec<Vec<u32>> = spec
        .fixed_effects
        .iter()
        .map(|k| k.group_ids(table, &rows))
        .collect();
    let singles = if fe_ids.is_empty() {
        None
    } else {
        Some(drop_singletons(&fe_ids))
    };
    let (rows, fe_ids, singletons_dropped) = match singles {
        None => (rows, fe_ids, 0),
        Some(s) => {
            let kept_rows: Vec<usize> = s.kept.iter().map(|&i| rows[i]).collect();
            let ids = spec
                .fixed_effects
                .iter()
                .map(|k| k.group_ids(table, &kept_rows))
                .collect();
            (kept_rows, ids, s.dropped)
        }
    };
    if rows.is_empty() {
        return Err(EconError::EmptySample {
            spec: spec.name.clone(),
        });
    }
    let n = rows.len();

    let names = spec.design_names();
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(names.len() + 1);
    columns.push(rows.iter().map(|&r| y_all[r]).collect());
    for c in &x_all {
        columns.push(rows.iter().map(|&r| c[r]).collect());
    }
    let raw_norms: Vec<f64> = columns.iter().map(|c| norm(c)).collect();
    let y_mean = columns[0].iter().sum::<f64>() / n as f64;
    let tss = columns[0].iter().map(|v| (v - y_mean).powi(2)).sum::<f64>();
    let diag = demean_fe(&mut columns, &fe_ids, &opts.demean, opts.exec)?;

    let mut dropped = Vec::new();
    let mut keep: Vec<usize> = Vec::new();
    for (j, name) in names.iter().enumerate() {
        let raw = raw_norms[j + 1];
        if raw == 0.0 || norm(&columns[j + 1]) <= ABSORBED_TOL * raw {
            dropped.push(DroppedTerm {
                term: name.clone(),
                reason: if raw == 0.0 {
                    "identically zero".into()
                } else {
                    "absorbed by fixed effects".into()
                },
            });
        } else {
            keep.push(j);
        }
    }
    let build = |keep: &[usize]| DMatrix::from_fn(n, keep.len(), |i, j| columns[keep[j] + 1][i]);
    let mut x = build(&keep);
    let dependent = dependent_columns(&x);
    if !dependent.is_empty() {
        for &d in &dependent {
            dropped.push(DroppedTerm {
                term: names[keep[d]].clone(),
                reason: "collinear with earlier regressors".into(),
            });
        }
        keep = keep
            .iter()
            .enumerate()
            .filter(|(i, _)| !dependent.contains(i))
            .map(|(_, &j)| j)
            .collect();
        x = build(&keep);
    }
    for d in &dropped {
        log::info!("spec {}: dropped {} ({})", spec.name, d.term, d.reason);
    }
    if keep.is_empty() {
        return Err(EconError::RankDeficient { columns: names });
    }
    let kept_names: Vec<String> = keep.iter().map(|&j| names[j].clone()).collect();
    let y = DVector::from_column_slice(&columns[0]);
    let fit = ols(&x, &y, &kept_names)?;
    let k = keep.len();

    let cluster_ids = |key: FeKey| key.group_ids(table, &rows);
    let cov = cluster_se(
        &x,
        &fit.residuals,
        &cluster_ids(spec.cluster.0),
        &cluster_ids(spec.cluster.1),
        k,
    )?;
    let se = cov.std_errors();
    let coefficients = kept_names
        .iter()
        .enumerate()
        .map(|(j, term)| Coefficient {
            term: term.clone(),
            estimate: fit.coefficients[j],
            std_error: se[j],
            t_stat: fit.coefficients[j] / se[j],
        })
        .collect();

    let a = absorbed_df(&fe_ids);
    let tss_within = y.norm_squared();
    let rss = fit.rss;
    let resid_df = n as f64 - k as f64 - a as f64;
    let r2_within = 1.0 - rss / tss_within;
    let adj_r2_within = 1.0 - (rss / resid_df) / (tss_within / (n as f64 - a as f64));
    let r2 = 1.0 - rss / tss;
    let adj_r2 = 1.0 - (rss / resid_df) / (tss / (n as f64 - 1.0));
    let fe_share = if tss > 0.0 {
        1.0 - tss_within / tss
    } else {
        0.0
    };

    Ok(RegressionResult {
        spec: spec.name.clone(),
        outcome: spec.outcome.clone(),
        fixed_effects: spec.fixed_effects.clone(),
        cluster: spec.cluster,
        coefficients,
        dropped,
        n_input,
        excluded_filter,
        excluded_missing,
        singletons_dropped,
        n_obs: n,
        r2_within,
        adj_r2_within,
        r2,
        adj_r2,
        fe_share,
        absorbed_df: a,
        clusters: (cov.clusters_a, cov.clusters_b),
        demean_iterations: diag.max_iterations(),
        psd_repaired: cov.psd_repaired,
    })
}

/// Run independent specs, concurrently under [`Execution::Parallel`]; the
/// output order follows `specs`.
pub fn run_specs(
    specs: &[RegressionSpec],
    table: &ObservationTable,
    opts: &RunOptions,
) -> Vec<Result<RegressionResult, EconError>> {
    let inner = RunOptions {
        exec: Execution::Sequential,
        ..*opts
    };
    opts.exec.map_slice(specs, |s| run_spec(s, table, &inner))
}

pub const RESULTS_HEADER: &str =
    "spec,outcome,term,estimate,std_error,t_stat,n_obs,adj_r2_within,adj_r2,fixed_effects,cluster";

fn fe_label(fe: &[FeKey]) -> String {
    if fe.is_empty() {
        "none".into()
    } else {
        fe.iter().map(|k| k.as_str()).collect::<Vec<_>>().join("+")
    }
}

/// Long-format CSV, one line per coefficient.
pub fn results_csv(results: &[RegressionResult]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(RESULTS_HEADER.split(','))
        .expect("in-memory write");
    for r in results {
        for c in &r.coefficients {
            w.write_record([
                r.spec.clone(),
                r.outcome.clone(),
                c.term.clone(),
                c.estimate.to_string(),
                c.std_error.to_string(),
                c.t_stat.to_string(),
                r.n_obs.to_string(),
                r.adj_r2_within.to_string(),
                r.adj_r2.to_string(),
                fe_label(&r.fixed_effects),
                format!("{}+{}", r.cluster.0, r.cluster.1),
            ])
            .expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8 csv")
}

pub fn stars(t: f64) -> &'static str {
    let a = t.abs();
    if a >= 2.576 {
        "***"
    } else if a >= 1.96 {
        "**"
    } else if a >= 1.645 {
        "*"
    } else {
        ""
    }
}

fn number(x: f64) -> String {
    if x != 0.0 && x.abs() < 1e-3 {
        format!("{x:.3e}")
    } else {
        format!("{x:.4}")
    }
}

/// Coefficients with stars and t-statistics in parentheses, one column per
/// result, followed by sample and fit rows.
pub fn results_markdown(results: &[RegressionResult]) -> String {
    let mut terms: Vec<&str> = Vec::new();
    for r in results {
        for c in &r.coefficients {
            if !terms.contains(&c.term.as_str()) {
                terms.push(&c.term);
            }
        }
    }
    let mut out = String::from("| |");
    for (i, r) in results.iter().enumerate() {
        out.push_str(&format!(" ({}) {} |", i + 1, r.spec));
    }
    out.push_str("\n|---|");
    out.push_str(&"---:|".repeat(results.len()));
    out.push('\n');
    let row = |out: &mut String, label: &str, cells: Vec<String>| {
        out.push_str(&format!("| {label} |"));
        for c in cells {
            out.push_str(&format!(" {c} |"));
        }
        out.push('\n');
    };
    row(
        &mut out,
        "Dependent variable",
        results.iter().map(|r| r.outcome.clone()).collect(),
    );
    for term in terms {
        let coef: Vec<Option<&Coefficient>> = results.iter().map(|r| r.coefficient(term)).collect();
        row(
            &mut out,
            term,
            coef.iter()
                .map(|c| {
                    c.map_or(String::new(), |c| {
                        format!("{}{}", number(c.estimate), stars(c.t_stat))
                    })
                })
                .collect(),
        );
        row(
            &mut out,
            "",
            coef.iter()
                .map(|c| c.map_or(String::new(), |c| format!("({:.2})", c.t_stat)))
                .collect(),
        );
    }
    row(
        &mut out,
        "Fixed effects",
        results.iter().map(|r| fe_label(&r.fixed_effects)).collect(),
    );
    row(
        &mut out,
        "Clusters",
        results
            .iter()
            .map(|r| {
                format!(
                    "{} ({}), {} ({})",
                    r.cluster.0, r.clusters.0, r.cluster.1, r.clusters.1
                )
            })
            .collect(),
    );
    row(
        &mut out,
        "N",
        results.iter().map(|r| r.n_obs.to_string()).collect(),
    );
    row(
        &mut out,
        "Singletons dropped",
        results
            .iter()
            .map(|r| r.singletons_dropped.to_string())
            .collect(),
    );
    row(
        &mut out,
        "Adj. R² (within)",
        results
            .iter()
            .map(|r| format!("{:.4}", r.adj_r2_within))
            .collect(),
    );
    row(
        &mut out,
        "Adj. R² (full)",
        results.iter().map(|r| format!("{:.4}", r.adj_r2)).collect(),
    );
    out.push_str("\nt-statistics in parentheses; * p<0.10, ** p<0.05, *** p<0.01 (normal critical values).\n");
    for r in results {
        for d in &r.dropped {
            out.push_str(&format!(
                "\n- {}: `{}` dropped ({})",
                r.spec, d.term, d.reason
            ));
        }
        if r.psd_repaired {
            out.push_str(&format!(
                "\n- {}: cluster covariance repaired by eigenvalue truncation",
                r.spec
            ));
        }
    }
    if results
        .iter()
        .any(|r| !r.dropped.is_empty() || r.psd_repaired)
    {
        out.push('\n');
    }
    out
}

//! Simulate, construct variables, estimate the regression suite and check
//! every expected sign.

use std::fmt;

use crate::econometrics::{
    construct_variables, quintile_table, results_markdown, run_specs, ConstructOptions,
    Constructed, FeKey, ObservationTable, QuintileTable, RegressionResult, RegressionSpec,
    RunOptions,
};
use crate::expectations::{gen_panel, Panel, SimulationConfig};
use crate::{Error, Execution};

/// Largest tolerated residual of the revision identity.
pub const IDENTITY_TOL: f64 = 1e-12;
/// |t| threshold for significance checks.
pub const T_CRIT: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Simulate,
    Construct,
    Estimate,
    Quintiles,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Simulate => "simulate",
            Stage::Construct => "construct",
            Stage::Estimate => "estimate",
            Stage::Quintiles => "quintiles",
        })
    }
}

fn staged<T, E: Into<Error>>(stage: Stage, r: Result<T, E>) -> Result<T, Error> {
    r.map_err(|e| Error::Stage {
        stage: stage.to_string(),
        source: Box::new(e.into()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub id: &'static str,
    pub claim: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct Replication {
    pub config: SimulationConfig,
    pub null_mode: bool,
    pub observations: Constructed,
    pub results: Vec<RegressionResult>,
    pub failures: Vec<(String, String)>,
    pub quintiles: Option<QuintileTable>,
    pub identity: Option<(f64, usize)>,
    pub checks: Vec<Check>,
}

impl Replication {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn result(&self, spec: &str) -> Option<&RegressionResult> {
        self.results.iter().find(|r| r.spec == spec)
    }

    pub fn report_markdown(&self) -> String {
        let mut out = String::from("# Replication report\n\n");
        if self.null_mode {
            out.push_str("Null mode: no vague signals, so tone carries no information about errors or revisions.\n\n");
        }
        out.push_str("## Checks\n\n");
        for c in &self.checks {
            out.push_str(&format!(
                "- {} {}: {} ({})\n",
                c.status, c.id, c.claim, c.detail
            ));
        }
        out.push_str(&format!(
            "\nOverall: {}\n",
            if self.passed() { "PASS" } else { "FAIL" }
        ));
        out.push_str("\n## Simulation settings\n\n```toml\n");
        out.push_str(&self.config.to_toml());
        out.push_str("```\n\n## Regressions\n\n");
        out.push_str(&results_markdown(&self.results));
        for (spec, err) in &self.failures {
            out.push_str(&format!("\n- {spec}: FAILED ({err})\n"));
        }
        if let Some(q) = &self.quintiles {
            out.push_str(&format!("\n## Mean {} by {} quintile\n\n", q.value, q.by));
            out.push_str(&q.to_markdown());
        }
        if !self.observations.notes.is_empty() || !self.observations.exclusions.is_empty() {
            out.push_str("\n## Variable construction\n\n");
            for n in &self.observations.notes {
                out.push_str(&format!("- {n}\n"));
            }
            for (reason, count) in &self.observations.exclusions {
                out.push_str(&format!("- {count} rows missing: {reason}\n"));
            }
        }
        out
    }
}

pub const FE_SETS: [(&str, &[FeKey]); 3] = [
    ("year", &[FeKey::Year]),
    ("ay", &[FeKey::AnalystYear]),
    ("afy", &[FeKey::AnalystFirm, FeKey::Year]),
];

/// Specs keyed `{name}_{year|ay|afy}`. `error_year` is the headline
/// specification.
pub fn replication_specs(covariates: &[String]) -> Vec<RegressionSpec> {
    let mut base: Vec<&str> = covariates.iter().map(String::as_str).collect();
    base.extend(["horizon", "bold"]);
    let regs = |lead: &[&'static str], extra: &[&'static str]| -> Vec<String> {
        lead.iter()
            .chain(base.iter())
            .chain(extra)
            .map(|s| s.to_string())
            .collect()
    };
    let mut specs = Vec::new();
    for (suffix, fe) in FE_SETS {
        let spec = |eq: &str, outcome: &str, regressors: Vec<String>| {
            let refs: Vec<&str> = regressors.iter().map(String::as_str).collect();
            RegressionSpec::new(&format!("{eq}_{suffix}"), outcome, &refs, fe)
        };
        specs.push(spec("error", "ferror", regs(&["tone"], &[])));
        specs.push(
            spec(
                "error_vagueness",
                "ferror",
                regs(&["tone", "vagueness"], &[]),
            )
            .with_interaction("tone", "vagueness"),
        );
        specs.push(spec("revision", "frev_next", regs(&["tone"], &["frev"])));
        specs.push(
            spec(
                "revision_uncertainty",
                "frev_next",
                regs(&["tone", "uncertainty"], &["frev"]),
            )
            .with_interaction("tone", "uncertainty"),
        );
        specs.push(
            spec("error_busyness", "ferror", regs(&["tone", "busyness"], &[]))
                .with_interaction("tone", "busyness"),
        );
        specs.push(
            spec(
                "revision_busyness",
                "frev_next",
                regs(&["tone", "busyness"], &["frev"]),
            )
            .with_interaction("tone", "busyness"),
        );
    }
    specs
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sign {
    Negative,
    Positive,
    Zero,
}

impl Replication {
    fn sign_check(
        &self,
        id: &'static str,
        claim: &str,
        eq: &str,
        term: &str,
        sign: Sign,
        fe_sets: &[&str],
    ) -> Check {
        let mut details = Vec::new();
        let mut ok = true;
        for suffix in fe_sets {
            let name = format!("{eq}_{suffix}");
            let Some(coef) = self.result(&name).and_then(|r| r.coefficient(term)) else {
                ok = false;
                details.push(format!("{name}: `{term}` not estimated"));
                continue;
            };
            let t = coef.t_stat;
            let good = match sign {
                Sign::Negative => coef.estimate < 0.0 && t.abs() > T_CRIT,
                Sign::Positive => coef.estimate > 0.0 && t.abs() > T_CRIT,
                Sign::Zero => t.abs() < T_CRIT,
            };
            ok &= good;
            details.push(format!(
                "{name}: {term} = {:.4e}, t = {:.2}",
                coef.estimate, t
            ));
        }
        Check {
            id,
            claim: claim.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            detail: details.join("; "),
        }
    }

    fn skip(id: &'static str, claim: &str, why: &str) -> Check {
        Check {
            id,
            claim: claim.into(),
            status: Status::Skip,
            detail: why.into(),
        }
    }

    fn evaluate(&mut self) {
        let all = ["year", "ay", "afy"];
        let mut checks = Vec::new();
        let regimes = self.config.regimes;
        if self.null_mode {
            checks.push(self.sign_check(
                "tone-error",
                "tone unrelated to forecast errors without vague signals",
                "error",
                "tone",
                Sign::Zero,
                &["year"],
            ));
            let rev = self.sign_check(
                "tone-revision",
                "tone and later revisions (informational in null mode)",
                "revision",
                "tone",
                Sign::Zero,
                &["year"],
            );
            checks.push(Check {
                status: Status::Skip,
                ..rev
            });
            for (id, claim) in [
                ("vagueness", "vagueness strengthens the error relation"),
                (
                    "uncertainty",
                    "uncertainty strengthens the revision relation",
                ),
                ("busyness", "busyness strengthens both relations"),
                (
                    "quintile-shape",
                    "forecast errors fall across tone quintiles",
                ),
            ] {
                checks.push(Self::skip(id, claim, "no vague signals in null mode"));
            }
        } else {
            checks.push(self.sign_check(
                "tone-error",
                "tone negatively related to contemporaneous forecast errors",
                "error",
                "tone",
                Sign::Negative,
                &all,
            ));
            checks.push(if regimes.vagueness.is_active() {
                self.sign_check(
                    "vagueness",
                    "tone x vagueness negative in the error regression",
                    "error_vagueness",
                    "tone_x_vagueness",
                    Sign::Negative,
                    &all,
                )
            } else {
                Self::skip(
                    "vagueness",
                    "tone x vagueness negative",
                    "vagueness regime disabled",
                )
            });
            checks.push(self.sign_check(
                "tone-revision",
                "tone positively related to next-period revisions",
                "revision",
                "tone",
                Sign::Positive,
                &all,
            ));
            checks.push(if regimes.uncertainty.is_active() {
                self.sign_check(
                    "uncertainty",
                    "tone x uncertainty positive in the revision regression",
                    "revision_uncertainty",
                    "tone_x_uncertainty",
                    Sign::Positive,
                    &all,
                )
            } else {
                Self::skip(
                    "uncertainty",
                    "tone x uncertainty positive",
                    "uncertainty regime disabled",
                )
            });
            if regimes.busyness.is_active() {
                checks.push(self.sign_check(
                    "busyness-error",
                    "tone x busyness negative in the error regression",
                    "error_busyness",
                    "tone_x_busyness",
                    Sign::Negative,
                    &all,
                ));
                checks.push(self.sign_check(
                    "busyness-revision",
                    "tone x busyness positive in the revision regression",
                    "revision_busyness",
                    "tone_x_busyness",
                    Sign::Positive,
                    &all,
                ));
            } else {
                checks.push(Self::skip(
                    "busyness",
                    "tone x busyness",
                    "busyness regime disabled",
                ));
            }
            checks.push(match &self.quintiles {
                Some(q) => {
                    let m = q.means[0];
                    let ok = q.strictly_decreasing(0) && m[0] > 0.0 && m[4] < 0.0;
                    Check {
                        id: "quintile-shape",
                        claim:
                            "mean forecast error falls strictly from Q1 to Q5 of tone, Q1 > 0 > Q5"
                                .into(),
                        status: if ok { Status::Pass } else { Status::Fail },
                        detail: format!(
                            "means {}",
                            m.iter()
                                .map(|v| format!("{v:.3e}"))
                                .collect::<Vec<_>>()
                                .join(", ")
                        ),
                    }
                }
                None => Self::skip(
                    "quintile-shape",
                    "quintile shape",
                    "quintile table unavailable",
                ),
            });
        }
        checks.push(match self.identity {
            Some((worst, rows)) => Check {
                id: "revision-identity",
                claim: "revision identity holds on every row with two neighbours".into(),
                status: if worst <= IDENTITY_TOL && rows > 0 {
                    Status::Pass
                } else {
                    Status::Fail
                },
                detail: format!("max residual {worst:.3e} over {rows} rows"),
            },
            None => Self::skip(
                "revision-identity",
                "revision identity",
                "latent draws not available",
            ),
        });
        self.checks = checks;
    }
}

/// Full pipeline from a simulated panel.
pub fn replicate(cfg: &SimulationConfig, exec: Execution) -> Result<(Panel, Replication), Error> {
    let panel = staged(Stage::Simulate, gen_panel(cfg, exec))?;
    let table = panel.to_table();
    let mut rep = replicate_table(&table, cfg, exec)?;
    rep.identity = Some(panel.max_revision_identity_residual());
    rep.evaluate();
    Ok((panel, rep))
}

/// Pipeline from an observable panel table (e.g. a panel CSV written
/// earlier). The revision identity needs latent draws and is skipped.
pub fn replicate_table(
    table: &ObservationTable,
    cfg: &SimulationConfig,
    exec: Execution,
) -> Result<Replication, Error> {
    let constructed = staged(
        Stage::Construct,
        construct_variables(table, &ConstructOptions::default()),
    )?;
    let specs = replication_specs(&cfg.covariate_names);
    let opts = RunOptions {
        exec,
        ..RunOptions::default()
    };
    let mut results = Vec::new();
    let mut failures = Vec::new();
    for (spec, res) in specs
        .iter()
        .zip(run_specs(&specs, &constructed.table, &opts))
    {
        match res {
            Ok(r) => results.push(r),
            Err(e) => failures.push((spec.name.clone(), e.to_string())),
        }
    }
    if results.is_empty() {
        let (spec, msg) = failures.first().cloned().unwrap_or_default();
        return Err(Error::Stage {
            stage: Stage::Estimate.to_string(),
            source: Box::new(Error::Message(format!("{spec}: {msg}"))),
        });
    }
    let null_mode = cfg.sigma_vague == 0.0 || cfg.vague_share == 0.0;
    let quintiles = staged(
        Stage::Quintiles,
        quintile_table(&constructed.table, "tone", "ferror", 5),
    )?;
    let mut rep = Replication {
        config: cfg.clone(),
        null_mode,
        observations: constructed,
        results,
        failures,
        quintiles: Some(quintiles),
        identity: None,
        checks: Vec::new(),
    };
    rep.evaluate();
    Ok(rep)
}

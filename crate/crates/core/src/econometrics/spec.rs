use std::fmt;

use serde::Deserialize;

use super::fe::FeKey;
use super::table::ObservationTable;
use super::EconError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    fn as_str(self) -> &'static str {
        match self {
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }

    fn apply(self, a: f64, b: f64) -> bool {
        match self {
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Gt => a > b,
            CmpOp::Ge => a >= b,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    pub column: String,
    pub op: CmpOp,
    pub value: f64,
}

/// Conjunction of `column op number` conditions, written
/// `horizon > 90 && bold == 0`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Filter {
    pub conditions: Vec<Condition>,
}

impl Filter {
    pub fn parse(src: &str) -> Result<Self, EconError> {
        let mut conditions = Vec::new();
        if src.trim().is_empty() {
            return Ok(Filter { conditions });
        }
        for part in src.split("&&") {
            let part = part.trim();
            let (pos, op) = [
                ("<=", CmpOp::Le),
                (">=", CmpOp::Ge),
                ("==", CmpOp::Eq),
                ("!=", CmpOp::Ne),
                ("<", CmpOp::Lt),
                (">", CmpOp::Gt),
            ]
            .iter()
            .find_map(|(tok, op)| part.find(tok).map(|i| ((i, tok.len()), *op)))
            .ok_or_else(|| EconError::Spec(format!("filter term `{part}` has no comparison")))?;
            let column = part[..pos.0].trim();
            let rhs = part[pos.0 + pos.1..].trim();
            if column.is_empty() || !column.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(EconError::Spec(format!(
                    "bad column in filter term `{part}`"
                )));
            }
            let value = rhs
                .parse::<f64>()
                .map_err(|_| EconError::Spec(format!("`{rhs}` in filter is not a number")))?;
            conditions.push(Condition {
                column: column.to_string(),
                op,
                value,
            });
        }
        Ok(Filter { conditions })
    }

    /// Row mask; unknown columns are an error, NaN never passes.
    pub fn mask(&self, table: &ObservationTable) -> Result<Vec<bool>, EconError> {
        let mut mask = vec![true; table.len()];
        for c in &self.conditions {
            let col = table.column(&c.column)?;
            for (m, &v) in mask.iter_mut().zip(col) {
                *m = *m && c.op.apply(v, c.value);
            }
        }
        Ok(mask)
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .conditions
            .iter()
            .map(|c| format!("{} {} {}", c.column, c.op.as_str(), c.value))
            .collect();
        f.write_str(&parts.join(" && "))
    }
}

/// One regression column: outcome, regressors, interactions, absorbed
/// fixed effects, cluster dimensions and a sample filter.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionSpec {
    pub name: String,
    pub outcome: String,
    pub regressors: Vec<String>,
    pub interactions: Vec<(String, String)>,
    pub fixed_effects: Vec<FeKey>,
    pub cluster: (FeKey, FeKey),
    pub filter: Filter,
}

pub fn interaction_name(a: &str, b: &str) -> String {
    format!("{a}_x_{b}")
}

impl RegressionSpec {
    pub fn new(name: &str, outcome: &str, regressors: &[&str], fixed_effects: &[FeKey]) -> Self {
        RegressionSpec {
            name: name.into(),
            outcome: outcome.into(),
            regressors: regressors.iter().map(|s| s.to_string()).collect(),
            interactions: Vec::new(),
            fixed_effects: fixed_effects.to_vec(),
            cluster: (FeKey::Analyst, FeKey::Year),
            filter: Filter::default(),
        }
    }

    pub fn with_interaction(mut self, a: &str, b: &str) -> Self {
        self.interactions.push((a.into(), b.into()));
        self
    }

    pub fn with_filter(mut self, filter: Filter) -> Self {
        self.filter = filter;
        self
    }

    /// Regressor names followed by interaction names, in design order.
    pub fn design_names(&self) -> Vec<String> {
        self.regressors
            .iter()
            .cloned()
            .chain(
                self.interactions
                    .iter()
                    .map(|(a, b)| interaction_name(a, b)),
            )
            .collect()
    }

    pub fn validate(&self) -> Result<(), EconError> {
        let err = |m: String| Err(EconError::Spec(format!("spec `{}`: {m}", self.name)));
        if self.name.trim().is_empty() {
            return Err(EconError::Spec("spec without a name".into()));
        }
        if self.regressors.is_empty() {
            return err("no regressors".into());
        }
        let names = self.design_names();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return err(format!("regressor `{n}` listed twice"));
            }
            if *n == self.outcome {
                return err(format!("outcome `{n}` also used as a regressor"));
            }
        }
        for (a, b) in &self.interactions {
            for c in [a, b] {
                if !self.regressors.contains(c) {
                    return err(format!(
                        "interaction {a} x {b}: `{c}` must also appear as a main effect"
                    ));
                }
            }
        }
        for (i, k) in self.fixed_effects.iter().enumerate() {
            if self.fixed_effects[..i].contains(k) {
                return err(format!("fixed effect `{k}` listed twice"));
            }
        }
        if self.cluster.0 == self.cluster.1 {
            return err("the two cluster dimensions must differ".into());
        }
        Ok(())
    }

    /// Every column the spec reads.
    pub fn required_columns(&self) -> Vec<&str> {
        let mut cols: Vec<&str> = vec![self.outcome.as_str()];
        cols.extend(self.regressors.iter().map(String::as_str));
        cols.extend(self.filter.conditions.iter().map(|c| c.column.as_str()));
        cols
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    name: String,
    outcome: String,
    regressors: Vec<String>,
    #[serde(default)]
    interactions: Vec<(String, String)>,
    #[serde(default)]
    fixed_effects: Vec<String>,
    #[serde(default)]
    cluster: Option<(String, String)>,
    #[serde(default)]
    filter: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    spec: Vec<RawSpec>,
}

/// Parse a TOML document of `[[spec]]` tables.
pub fn parse_specs(src: &str) -> Result<Vec<RegressionSpec>, EconError> {
    let file: SpecFile = toml::from_str(src).map_err(|e| EconError::Spec(e.to_string()))?;
    let mut out = Vec::with_capacity(file.spec.len());
    for raw in file.spec {
        let fixed_effects = raw
            .fixed_effects
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<FeKey>, _>>()?;
        let cluster = match raw.cluster {
            Some((a, b)) => (a.parse()?, b.parse()?),
            None => (FeKey::Analyst, FeKey::Year),
        };
        let spec = RegressionSpec {
            name: raw.name,
            outcome: raw.outcome,
            regressors: raw.regressors,
            interactions: raw.interactions,
            fixed_effects,
            cluster,
            filter: Filter::parse(raw.filter.as_deref().unwrap_or(""))?,
        };
        spec.validate()?;
        out.push(spec);
    }
    for (i, s) in out.iter().enumerate() {
        if out[..i].iter().any(|o| o.name == s.name) {
            return Err(EconError::Spec(format!(
                "spec name `{}` used twice",
                s.name
            )));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filter_parse_and_apply() {
        let f = Filter::parse("x >= 1 && y != 0").unwrap();
        assert_eq!(f.conditions.len(), 2);
        assert_eq!(f.conditions[0].op, CmpOp::Ge);
        assert_eq!(f.to_string(), "x >= 1 && y != 0");
        assert!(Filter::parse("x ~ 1").is_err());
        assert!(Filter::parse("x > abc").is_err());
        assert!(Filter::parse("").unwrap().conditions.is_empty());
    }

    #[test]
    fn spec_file_round() {
        let src = r#"
[[spec]]
name = "base"
outcome = "ferror"
regressors = ["tone", "vagueness", "horizon"]
interactions = [["tone", "vagueness"]]
fixed_effects = ["analyst_firm", "year"]
filter = "horizon > 0"

[[spec]]
name = "rev"
outcome = "frev_next"
regressors = ["tone"]
cluster = ["analyst", "firm"]
"#;
        let specs = parse_specs(src).unwrap();
        assert_eq!(specs.len(), 2);
        assert_eq!(specs[0].design_names()[3], "tone_x_vagueness");
        assert_eq!(
            specs[0].fixed_effects,
            vec![FeKey::AnalystFirm, FeKey::Year]
        );
        assert_eq!(specs[1].cluster, (FeKey::Analyst, FeKey::Firm));
        assert!(specs[1].fixed_effects.is_empty());
    }

    #[test]
    fn spec_validation() {
        let bad = "[[spec]]\nname='a'\noutcome='y'\nregressors=['tone']\ninteractions=[['tone','busy']]\n";
        assert!(matches!(parse_specs(bad), Err(EconError::Spec(m)) if m.contains("main effect")));
        let unknown = "[[spec]]\nname='a'\noutcome='y'\nregressors=['x']\ncolour='red'\n";
        assert!(parse_specs(unknown).is_err());
        let fe = "[[spec]]\nname='a'\noutcome='y'\nregressors=['x']\nfixed_effects=['decade']\n";
        assert!(parse_specs(fe).is_err());
    }
}

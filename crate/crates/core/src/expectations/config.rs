use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use super::SimError;

/// Variance multiplier applied to vague signals inside one regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Regime {
    /// Probability that a unit (row, firm-year or analyst-year) is in the
    /// high regime. Zero disables the regime.
    pub probability: f64,
    pub factor: f64,
}

impl Regime {
    pub const OFF: Regime = Regime {
        probability: 0.0,
        factor: 1.0,
    };

    fn doubling() -> Self {
        Regime {
            probability: 0.5,
            factor: 2.0,
        }
    }

    pub fn is_active(&self) -> bool {
        self.probability > 0.0 && self.factor != 1.0
    }
}

/// Regime generators. Vagueness is drawn per row, uncertainty per
/// firm-year and busyness per analyst-year.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegimeFlags {
    pub vagueness: Regime,
    pub uncertainty: Regime,
    pub busyness: Regime,
}

impl Default for RegimeFlags {
    fn default() -> Self {
        RegimeFlags {
            vagueness: Regime::doubling(),
            uncertainty: Regime::doubling(),
            busyness: Regime::doubling(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub seed: u64,
    pub n_analysts: usize,
    pub n_firms: usize,
    pub n_periods: usize,
    pub sigma_precise: f64,
    pub sigma_vague: f64,
    pub sigma_eps: f64,
    pub sigma_eta: f64,
    pub lambda: f64,
    pub bias_coeffs: Vec<f64>,
    pub covariate_names: Vec<String>,
    pub tone_noise: f64,
    pub vague_share: f64,
    pub regimes: RegimeFlags,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            seed: 20120120,
            n_analysts: 100,
            n_firms: 50,
            n_periods: 20,
            sigma_precise: 1.0,
            sigma_vague: 0.5,
            sigma_eps: 0.5,
            sigma_eta: 0.3,
            lambda: 0.5,
            bias_coeffs: vec![0.05, -0.02, 0.03, 0.01],
            covariate_names: ["prior_car", "ana_gen_exp", "firm_size", "firm_bm"]
                .map(String::from)
                .to_vec(),
            tone_noise: 0.1,
            vague_share: 0.8,
            regimes: RegimeFlags::default(),
        }
    }
}

const TOP_KEYS: &[&str] = &[
    "seed",
    "n_analysts",
    "n_firms",
    "n_periods",
    "sigma_precise",
    "sigma_vague",
    "sigma_eps",
    "sigma_eta",
    "lambda",
    "bias_coeffs",
    "covariate_names",
    "tone_noise",
    "vague_share",
    "regimes",
];
const REGIME_NAMES: &[&str] = &["vagueness", "uncertainty", "busyness"];
const REGIME_KEYS: &[&str] = &["probability", "factor"];

/// Every dotted key accepted in a config file or `--set` override.
pub fn known_keys() -> Vec<String> {
    let mut keys: Vec<String> = TOP_KEYS
        .iter()
        .filter(|k| **k != "regimes")
        .map(|k| k.to_string())
        .collect();
    for r in REGIME_NAMES {
        for k in REGIME_KEYS {
            keys.push(format!("regimes.{r}.{k}"));
        }
    }
    keys
}

fn unknown_keys(table: &Table) -> Vec<String> {
    let mut bad = Vec::new();
    for (k, v) in table {
        if !TOP_KEYS.contains(&k.as_str()) {
            bad.push(k.clone());
            continue;
        }
        if k != "regimes" {
            continue;
        }
        let Some(regimes) = v.as_table() else {
            continue;
        };
        for (name, inner) in regimes {
            if !REGIME_NAMES.contains(&name.as_str()) {
                bad.push(format!("regimes.{name}"));
                continue;
            }
            if let Some(inner) = inner.as_table() {
                bad.extend(
                    inner
                        .keys()
                        .filter(|f| !REGIME_KEYS.contains(&f.as_str()))
                        .map(|f| format!("regimes.{name}.{f}")),
                );
            }
        }
    }
    bad
}

fn defaults_table() -> Table {
    Table::try_from(SimulationConfig::default()).expect("default config serializes")
}

/// Deep merge: tables merge key by key, everything else replaces.
fn merge(base: &mut Table, over: Table) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(Value::Table(b)), Value::Table(o)) => merge(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

fn parse_override_value(raw: &str) -> Value {
    let doc = format!("v = {raw}");
    match doc.parse::<Table>() {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| Value::String(raw.into())),
        Err(_) => Value::String(raw.into()),
    }
}

impl SimulationConfig {
    /// Build from defaults, then an optional TOML document, then
    /// `key=value` overrides. Unknown keys are collected before failing.
    pub fn resolve(file: Option<&str>, overrides: &[String]) -> Result<Self, SimError> {
        let mut table = defaults_table();
        let mut unknown = Vec::new();
        if let Some(src) = file {
            let user: Table = src
                .parse()
                .map_err(|e: toml::de::Error| SimError::Config(e.to_string()))?;
            unknown.extend(unknown_keys(&user));
            merge(&mut table, user);
        }
        for ov in overrides {
            let (key, raw) = ov
                .split_once('=')
                .ok_or_else(|| SimError::Config(format!("override `{ov}` is not key=value")))?;
            let key = key.trim();
            if !known_keys().iter().any(|k| k == key) {
                unknown.push(key.to_string());
                continue;
            }
            let mut patch = Table::new();
            let parts: Vec<&str> = key.split('.').collect();
            let mut leaf = parse_override_value(raw.trim());
            // A bare integer given for a float field is fine; toml keeps it as Integer.
            if let Value::Integer(i) = leaf {
                if !matches!(parts[0], "seed" | "n_analysts" | "n_firms" | "n_periods") {
                    leaf = Value::Float(i as f64);
                }
            }
            let mut value = leaf;
            for p in parts.iter().skip(1).rev() {
                let mut t = Table::new();
                t.insert(p.to_string(), value);
                value = Value::Table(t);
            }
            patch.insert(parts[0].to_string(), value);
            merge(&mut table, patch);
        }
        if !unknown.is_empty() {
            return Err(SimError::UnknownKeys(unknown));
        }
        let cfg: SimulationConfig = table
            .try_into()
            .map_err(|e: toml::de::Error| SimError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), SimError> {
        self.check(false)
    }

    pub(crate) fn check(&self, allow_unit_lambda: bool) -> Result<(), SimError> {
        let mut problems = Vec::new();
        for (name, n) in [
            ("n_analysts", self.n_analysts),
            ("n_firms", self.n_firms),
            ("n_periods", self.n_periods),
        ] {
            if n == 0 {
                problems.push(format!("{name} must be at least 1"));
            }
        }
        if self.n_analysts > u32::MAX as usize || self.n_firms > u32::MAX as usize {
            problems.push("panel dimensions exceed u32".into());
        }
        for (name, s) in [
            ("sigma_precise", self.sigma_precise),
            ("sigma_vague", self.sigma_vague),
            ("sigma_eps", self.sigma_eps),
            ("sigma_eta", self.sigma_eta),
            ("tone_noise", self.tone_noise),
        ] {
            if !(s.is_finite() && s >= 0.0) {
                problems.push(format!("{name} must be finite and non-negative, got {s}"));
            }
        }
        let lambda_ok = if allow_unit_lambda {
            self.lambda > 0.0 && self.lambda <= 1.0
        } else {
            self.lambda > 0.0 && self.lambda < 1.0
        };
        if !lambda_ok {
            problems.push(format!("lambda must lie in (0, 1), got {}", self.lambda));
        }
        if !(0.0..=1.0).contains(&self.vague_share) {
            problems.push(format!(
                "vague_share must lie in [0, 1], got {}",
                self.vague_share
            ));
        }
        if self.bias_coeffs.len() != self.covariate_names.len() {
            problems.push(format!(
                "{} bias_coeffs but {} covariate_names",
                self.bias_coeffs.len(),
                self.covariate_names.len()
            ));
        }
        if self.bias_coeffs.iter().any(|b| !b.is_finite()) {
            problems.push("bias_coeffs must be finite".into());
        }
        for (name, r) in [
            ("vagueness", self.regimes.vagueness),
            ("uncertainty", self.regimes.uncertainty),
            ("busyness", self.regimes.busyness),
        ] {
            if !(0.0..=1.0).contains(&r.probability) {
                problems.push(format!("regimes.{name}.probability must lie in [0, 1]"));
            }
            if !(r.factor.is_finite() && r.factor > 0.0) {
                problems.push(format!("regimes.{name}.factor must be positive"));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(SimError::InvalidConfig(problems))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid_and_round_trip() {
        let cfg = SimulationConfig::default();
        cfg.validate().unwrap();
        assert_eq!(
            SimulationConfig::resolve(Some(&cfg.to_toml()), &[]).unwrap(),
            cfg
        );
    }

    #[test]
    fn unknown_keys_are_listed_together() {
        let src = "sigma_vage = 1.0\nfoo = 2\n[regimes.vagueness]\nprob = 0.1\n";
        match SimulationConfig::resolve(Some(src), &["bar=1".into()]) {
            Err(SimError::UnknownKeys(keys)) => {
                assert_eq!(
                    keys,
                    vec!["foo", "regimes.vagueness.prob", "sigma_vage", "bar"]
                );
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn precedence_overrides_beat_file() {
        let src = "sigma_vague = 0.7\nseed = 5\n";
        let cfg = SimulationConfig::resolve(Some(src), &["sigma_vague=0".into()]).unwrap();
        assert_eq!(cfg.sigma_vague, 0.0);
        assert_eq!(cfg.seed, 5);
        let cfg =
            SimulationConfig::resolve(None, &["regimes.busyness.probability=0".into()]).unwrap();
        assert!(!cfg.regimes.busyness.is_active());
        assert!(cfg.regimes.uncertainty.is_active());
    }

    #[test]
    fn invalid_values_are_reported() {
        let err = SimulationConfig::resolve(None, &["lambda=1.5".into(), "n_firms=0".into()])
            .unwrap_err();
        match err {
            SimError::InvalidConfig(p) => assert_eq!(p.len(), 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(SimulationConfig::resolve(None, &["bias_coeffs=[1.0]".into()]).is_err());
    }
}

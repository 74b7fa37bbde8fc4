use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::config::SimulationConfig;
use super::model::{
    bias, emit_tone, forecast_error, gen_signals, make_forecast, realize_state,
    revision_identity_residual, update_unchecked,
};
use super::SimError;
use crate::econometrics::{KeyColumn, ObservationTable};
use crate::Execution;

const FIRM_STREAM: u64 = 1 << 62;
const ANALYST_STREAM: u64 = 1 << 61;
const DAYS_PER_YEAR: i64 = 365;
const ANNOUNCE_OFFSET: i64 = 380;

/// One observable analyst-firm-period report.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelRow {
    pub analyst_id: u32,
    pub firm_id: u32,
    pub period: u32,
    pub forecast_day: i64,
    pub announce_day: i64,
    pub realized: f64,
    pub forecast: f64,
    pub forecast_error: f64,
    /// Same analyst and firm, next period. `None` in the last period.
    pub next_forecast: Option<f64>,
    pub revision: Option<f64>,
    pub tone: f64,
    pub pos_pct: f64,
    pub neg_pct: f64,
    pub hedge_pct: f64,
    pub text_only_pct: f64,
    pub price_50: f64,
    pub next_price_50: Option<f64>,
    pub covariates: Vec<f64>,
    pub uncertainty_index: f64,
    pub ana_nfirm: f64,
}

/// Latent draws behind a [`PanelRow`], keyed identically.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditRow {
    pub analyst_id: u32,
    pub firm_id: u32,
    pub period: u32,
    pub precise_exp: f64,
    pub vague_exp: f64,
    pub eps: f64,
    pub eta: f64,
    pub bias: f64,
    pub vague_assigned: bool,
    pub vagueness_regime: bool,
    pub uncertainty_regime: bool,
    pub busyness_regime: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub config: SimulationConfig,
    pub rows: Vec<PanelRow>,
    pub audit: Vec<AuditRow>,
    pub warnings: Vec<String>,
}

struct FirmDraws {
    uncertain: Vec<bool>,
    uncertainty_index: Vec<f64>,
    price: Vec<f64>,
}

struct AnalystDraws {
    busy: Vec<bool>,
    n_firms: Vec<f64>,
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

fn firm_draws(cfg: &SimulationConfig, firm: usize) -> FirmDraws {
    let mut rng = stream(cfg.seed, FIRM_STREAM | firm as u64);
    let base = 40.0 * (0.3 * normal(&mut rng)).exp();
    let mut out = FirmDraws {
        uncertain: Vec::with_capacity(cfg.n_periods),
        uncertainty_index: Vec::with_capacity(cfg.n_periods),
        price: Vec::with_capacity(cfg.n_periods),
    };
    for _ in 0..cfg.n_periods {
        let u = rng.random::<f64>() < cfg.regimes.uncertainty.probability;
        out.uncertain.push(u);
        out.uncertainty_index
            .push(u as u8 as f64 + 0.2 * normal(&mut rng));
        out.price.push(base * (0.1 * normal(&mut rng)).exp());
    }
    out
}

fn analyst_draws(cfg: &SimulationConfig, analyst: usize) -> AnalystDraws {
    let mut rng = stream(cfg.seed, ANALYST_STREAM | analyst as u64);
    let mut out = AnalystDraws {
        busy: Vec::with_capacity(cfg.n_periods),
        n_firms: Vec::with_capacity(cfg.n_periods),
    };
    for _ in 0..cfg.n_periods {
        let b = rng.random::<f64>() < cfg.regimes.busyness.probability;
        out.busy.push(b);
        out.n_firms.push(
            (12.0 + 8.0 * b as u8 as f64 + 2.0 * normal(&mut rng))
                .round()
                .max(1.0),
        );
    }
    out
}

fn regime_scale(on: bool, factor: f64) -> f64 {
    if on {
        factor
    } else {
        1.0
    }
}

fn gen_pair(
    cfg: &SimulationConfig,
    analyst: usize,
    firm: usize,
    firms: &FirmDraws,
    analysts: &AnalystDraws,
) -> (Vec<PanelRow>, Vec<AuditRow>) {
    let mut rng = stream(cfg.seed, (analyst * cfg.n_firms + firm) as u64);
    let vague_assigned = rng.random::<f64>() < cfg.vague_share;
    let k = cfg.bias_coeffs.len();
    let mut rows: Vec<PanelRow> = Vec::with_capacity(cfg.n_periods);
    let mut audit: Vec<AuditRow> = Vec::with_capacity(cfg.n_periods);
    let mut prev: Option<(f64, f64)> = None; // (forecast, vague_exp)
    for t in 0..cfg.n_periods {
        let vag = rng.random::<f64>() < cfg.regimes.vagueness.probability;
        let unc = firms.uncertain[t];
        let busy = analysts.busy[t];
        let scale = regime_scale(vag, cfg.regimes.vagueness.factor)
            * regime_scale(unc, cfg.regimes.uncertainty.factor)
            * regime_scale(busy, cfg.regimes.busyness.factor);
        let (p_draw, v) = gen_signals(
            &mut rng,
            cfg.sigma_precise,
            cfg.sigma_vague,
            scale,
            vague_assigned,
        );
        let eps = cfg.sigma_eps * normal(&mut rng);
        let eta = cfg.sigma_eta * normal(&mut rng);
        let x: Vec<f64> = (0..k).map(|_| normal(&mut rng)).collect();
        let b = bias(&cfg.bias_coeffs, &x).expect("validated dimensions");
        let (precise, forecast) = match prev {
            None => {
                let f =
                    make_forecast(p_draw, &cfg.bias_coeffs, &x, eta).expect("validated dimensions");
                (p_draw, f)
            }
            Some((f_prev, v_prev)) => {
                let f = update_unchecked(v_prev, f_prev, cfg.lambda);
                (f - b - eta, f)
            }
        };
        let realized = realize_state(precise, v, eps);
        let tone = emit_tone(v, cfg.tone_noise, &mut rng);
        let neutral = 0.6 * rng.random::<f64>() * (1.0 - tone.abs());
        let day = DAYS_PER_YEAR * t as i64 + rng.random_range(0..DAYS_PER_YEAR);
        let hedge = (0.30 + 0.16 * vag as u8 as f64 + 0.03 * normal(&mut rng)).clamp(0.0, 1.0);
        let text_only = (0.55 + 0.15 * vag as u8 as f64 + 0.05 * normal(&mut rng)).clamp(0.0, 1.0);
        let price_50 = firms.price[t] * (0.02 * normal(&mut rng)).exp();

        if let Some(last) = rows.last_mut() {
            last.next_forecast = Some(forecast);
            last.revision = Some(forecast - last.forecast);
            last.next_price_50 = Some(price_50);
        }
        rows.push(PanelRow {
            analyst_id: analyst as u32,
            firm_id: firm as u32,
            period: t as u32,
            forecast_day: day,
            announce_day: DAYS_PER_YEAR * t as i64 + ANNOUNCE_OFFSET,
            realized,
            forecast,
            forecast_error: forecast_error(forecast, realized),
            next_forecast: None,
            revision: None,
            tone,
            pos_pct: (1.0 - neutral + tone) / 2.0,
            neg_pct: (1.0 - neutral - tone) / 2.0,
            hedge_pct: hedge,
            text_only_pct: text_only,
            price_50,
            next_price_50: None,
            covariates: x,
            uncertainty_index: firms.uncertainty_index[t],
            ana_nfirm: analysts.n_firms[t],
        });
        audit.push(AuditRow {
            analyst_id: analyst as u32,
            firm_id: firm as u32,
            period: t as u32,
            precise_exp: precise,
            vague_exp: v,
            eps,
            eta,
            bias: b,
            vague_assigned,
            vagueness_regime: vag,
            uncertainty_regime: unc,
            busyness_regime: busy,
        });
        prev = Some((forecast, v));
    }
    (rows, audit)
}

fn generate(cfg: &SimulationConfig, exec: Execution) -> Panel {
    let firms = exec.map_range(cfg.n_firms, |f| firm_draws(cfg, f));
    let analysts = exec.map_range(cfg.n_analysts, |a| analyst_draws(cfg, a));
    let pairs = exec.map_range(cfg.n_analysts * cfg.n_firms, |p| {
        let (a, f) = (p / cfg.n_firms, p % cfg.n_firms);
        gen_pair(cfg, a, f, &firms[f], &analysts[a])
    });
    let n = cfg.n_analysts * cfg.n_firms * cfg.n_periods;
    let mut rows = Vec::with_capacity(n);
    let mut audit = Vec::with_capacity(n);
    for (r, a) in pairs {
        rows.extend(r);
        audit.extend(a);
    }
    let mut warnings = Vec::new();
    if cfg.n_periods < 2 {
        let msg = "n_periods = 1: no next-period forecasts, revision rows are empty".to_string();
        log::warn!("{msg}");
        warnings.push(msg);
    }
    Panel {
        config: cfg.clone(),
        rows,
        audit,
        warnings,
    }
}

/// Simulate the full analyst x firm x period panel.
pub fn gen_panel(cfg: &SimulationConfig, exec: Execution) -> Result<Panel, SimError> {
    cfg.validate()?;
    Ok(generate(cfg, exec))
}

/// As [`gen_panel`] but also accepts `lambda = 1`, the full-updating limit.
/// Meant for test harnesses.
pub fn gen_panel_allow_unit_lambda(
    cfg: &SimulationConfig,
    exec: Execution,
) -> Result<Panel, SimError> {
    cfg.check(true)?;
    Ok(generate(cfg, exec))
}

pub const PANEL_COLUMNS: &[&str] = &[
    "forecast_day",
    "announce_day",
    "forecast",
    "actual",
    "next_forecast",
    "price_50",
    "next_price_50",
    "tone",
    "pos_pct",
    "neg_pct",
    "hedge_pct",
    "text_only_pct",
    "uncertainty_index",
    "ana_nfirm",
];

pub const AUDIT_HEADER: &str = "analyst_id,firm_id,year,precise_exp,vague_exp,eps,eta,bias,vague_assigned,vagueness_regime,uncertainty_regime,busyness_regime";

type RowValue = fn(&PanelRow) -> f64;

fn keys<F: Fn(usize) -> u32>(n_rows: usize, n_labels: usize, code: F) -> KeyColumn {
    KeyColumn::from_codes(
        (0..n_rows).map(code).collect(),
        (0..n_labels).map(|i| i.to_string()).collect(),
    )
}

impl Panel {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Observable columns only; latent draws stay in [`Panel::audit`].
    pub fn to_table(&self) -> ObservationTable {
        let n = self.rows.len();
        let rows = &self.rows;
        let mut table = ObservationTable::new(
            keys(n, self.config.n_analysts, |i| rows[i].analyst_id),
            keys(n, self.config.n_firms, |i| rows[i].firm_id),
            rows.iter().map(|r| r.period as i64).collect(),
        )
        .expect("consistent key lengths");
        let cols: [(&str, RowValue); 14] = [
            ("forecast_day", |r| r.forecast_day as f64),
            ("announce_day", |r| r.announce_day as f64),
            ("forecast", |r| r.forecast),
            ("actual", |r| r.realized),
            ("next_forecast", |r| r.next_forecast.unwrap_or(f64::NAN)),
            ("price_50", |r| r.price_50),
            ("next_price_50", |r| r.next_price_50.unwrap_or(f64::NAN)),
            ("tone", |r| r.tone),
            ("pos_pct", |r| r.pos_pct),
            ("neg_pct", |r| r.neg_pct),
            ("hedge_pct", |r| r.hedge_pct),
            ("text_only_pct", |r| r.text_only_pct),
            ("uncertainty_index", |r| r.uncertainty_index),
            ("ana_nfirm", |r| r.ana_nfirm),
        ];
        debug_assert!(cols.iter().map(|c| c.0).eq(PANEL_COLUMNS.iter().copied()));
        for (name, get) in cols {
            table
                .add_column(name, rows.iter().map(get).collect())
                .expect("fresh column");
        }
        for (j, name) in self.config.covariate_names.iter().enumerate() {
            table
                .add_column(name, rows.iter().map(|r| r.covariates[j]).collect())
                .expect("covariate names are distinct from panel columns");
        }
        table
    }

    pub fn panel_csv(&self) -> String {
        self.to_table().to_csv_string()
    }

    pub fn audit_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(AUDIT_HEADER.split(','))
            .expect("in-memory write");
        let flag = |b: bool| if b { "1" } else { "0" }.to_string();
        for a in &self.audit {
            w.write_record([
                a.analyst_id.to_string(),
                a.firm_id.to_string(),
                a.period.to_string(),
                a.precise_exp.to_string(),
                a.vague_exp.to_string(),
                a.eps.to_string(),
                a.eta.to_string(),
                a.bias.to_string(),
                flag(a.vague_assigned),
                flag(a.vagueness_regime),
                flag(a.uncertainty_regime),
                flag(a.busyness_regime),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8 csv")
    }

    /// Largest |F − π + v − b − η + ε| over all rows.
    pub fn max_decomposition_residual(&self) -> f64 {
        self.rows
            .iter()
            .zip(&self.audit)
            .map(|(r, a)| (r.forecast - r.realized + a.vague_exp - a.bias - a.eta + a.eps).abs())
            .fold(0.0, f64::max)
    }

    /// Largest residual of the revision identity over every row that has
    /// both a previous and a next forecast, with the count of such rows.
    pub fn max_revision_identity_residual(&self) -> (f64, usize) {
        let lambda = self.config.lambda;
        let mut worst: f64 = 0.0;
        let mut checked = 0;
        for i in 1..self.rows.len() {
            let (prev, cur) = (&self.rows[i - 1], &self.rows[i]);
            if prev.analyst_id != cur.analyst_id || prev.firm_id != cur.firm_id {
                continue;
            }
            let Some(next) = cur.next_forecast else {
                continue;
            };
            let r = revision_identity_residual(
                [prev.forecast, cur.forecast, next],
                [self.audit[i - 1].vague_exp, self.audit[i].vague_exp],
                lambda,
            );
            worst = worst.max(r.abs());
            checked += 1;
        }
        (worst, checked)
    }

    pub fn summary(&self) -> String {
        let n = self.audit.len().max(1) as f64;
        let share =
            |f: fn(&AuditRow) -> bool| self.audit.iter().filter(|a| f(a)).count() as f64 / n;
        let revisions = self.rows.iter().filter(|r| r.revision.is_some()).count();
        format!(
            "rows: {}\nrows with next-period revision: {}\nvague-assigned share: {:.4}\nvagueness regime share: {:.4}\nuncertainty regime share: {:.4}\nbusyness regime share: {:.4}\n",
            self.rows.len(),
            revisions,
            share(|a| a.vague_assigned),
            share(|a| a.vagueness_regime),
            share(|a| a.uncertainty_regime),
            share(|a| a.busyness_regime),
        )
    }
}

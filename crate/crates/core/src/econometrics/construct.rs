use std::collections::{BTreeMap, HashMap};

use super::stats::{median_split, winsorize};
use super::table::ObservationTable;
use super::EconError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstructOptions {
    pub winsor_lower: f64,
    pub winsor_upper: f64,
    /// Consensus window for Bold: forecasts strictly inside
    /// `(day − window, day)` for the same firm and year.
    pub bold_window_days: f64,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        ConstructOptions {
            winsor_lower: 0.01,
            winsor_upper: 0.99,
            bold_window_days: 30.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constructed {
    pub table: ObservationTable,
    /// Per reason code, the number of rows left missing for that reason.
    pub exclusions: BTreeMap<&'static str, usize>,
    pub notes: Vec<String>,
}

/// Columns added by [`construct_variables`] when their inputs exist.
pub const CONSTRUCTED: &[&str] = &[
    "ferror",
    "frev",
    "frev_next",
    "horizon",
    "bold",
    "bold_undefined",
    "dtone",
    "tone_af_dm",
    "vagueness",
    "vagueness_text",
    "uncertainty",
    "busyness",
];

fn opt<'a>(t: &'a ObservationTable, name: &str) -> Option<&'a [f64]> {
    t.column(name).ok()
}

fn scaled_difference(
    a: &[f64],
    b: &[f64],
    price: &[f64],
    exclusions: &mut BTreeMap<&'static str, usize>,
    prefix: &'static [&'static str; 3],
) -> Vec<f64> {
    a.iter()
        .zip(b)
        .zip(price)
        .map(|((&x, &y), &p)| {
            let reason = if !x.is_finite() {
                Some(prefix[0])
            } else if !y.is_finite() {
                Some(prefix[1])
            } else if !(p.is_finite() && p > 0.0) {
                Some(prefix[2])
            } else {
                None
            };
            match reason {
                Some(r) => {
                    *exclusions.entry(r).or_default() += 1;
                    f64::NAN
                }
                None => (x - y) / p,
            }
        })
        .collect()
}

fn winsorized(values: Vec<f64>, opts: &ConstructOptions) -> Result<Vec<f64>, EconError> {
    if values.iter().all(|v| !v.is_finite()) {
        return Ok(values);
    }
    winsorize(&values, opts.winsor_lower, opts.winsor_upper)
}

type CellKey = (u32, u32, i64);

fn cell_index(t: &ObservationTable) -> (HashMap<CellKey, usize>, usize) {
    let mut idx = HashMap::with_capacity(t.len());
    let mut dups = 0;
    for r in 0..t.len() {
        let key = (t.analyst().codes()[r], t.firm().codes()[r], t.years()[r]);
        if idx.insert(key, r).is_some() {
            dups += 1;
        }
    }
    (idx, dups)
}

/// Value of `col` for the same analyst and firm `lag` years away.
fn shifted(t: &ObservationTable, idx: &HashMap<CellKey, usize>, col: &[f64], lag: i64) -> Vec<f64> {
    (0..t.len())
        .map(|r| {
            let key = (
                t.analyst().codes()[r],
                t.firm().codes()[r],
                t.years()[r] + lag,
            );
            idx.get(&key).map_or(f64::NAN, |&j| col[j])
        })
        .collect()
}

/// Bold indicator and undefined-consensus flag.
pub fn bold_indicator(
    firm: &[u32],
    year: &[i64],
    day: &[f64],
    forecast: &[f64],
    window: f64,
) -> (Vec<f64>, Vec<f64>) {
    let n = forecast.len();
    let mut groups: HashMap<(u32, i64), Vec<usize>> = HashMap::new();
    for r in 0..n {
        if day[r].is_finite() && forecast[r].is_finite() {
            groups.entry((firm[r], year[r])).or_default().push(r);
        }
    }
    let mut bold = vec![f64::NAN; n];
    let mut undefined = vec![f64::NAN; n];
    for rows in groups.values_mut() {
        rows.sort_by(|&a, &b| day[a].total_cmp(&day[b]).then(a.cmp(&b)));
        let mut start = 0;
        for (pos, &r) in rows.iter().enumerate() {
            while day[rows[start]] <= day[r] - window {
                start += 1;
            }
            let prior: Vec<f64> = rows[start..pos]
                .iter()
                .filter(|&&j| day[j] < day[r])
                .map(|&j| forecast[j])
                .collect();
            if prior.len() < 2 {
                bold[r] = 0.0;
                undefined[r] = 1.0;
                continue;
            }
            let m = prior.iter().sum::<f64>() / prior.len() as f64;
            let sd = (prior.iter().map(|x| (x - m).powi(2)).sum::<f64>()
                / (prior.len() - 1) as f64)
                .sqrt();
            bold[r] = ((forecast[r] - m).abs() > 2.0 * sd) as u8 as f64;
            undefined[r] = 0.0;
        }
    }
    (bold, undefined)
}

/// Derive regression variables from raw forecast, price and text columns.
///
/// Requires `forecast`, `actual` and `price_50`. Each further block is
/// built only when its inputs are present: revisions (`next_forecast`,
/// `next_price_50`, or the same analyst-firm row one year on), `horizon`
/// (`forecast_day`, `announce_day`), `bold` (`forecast_day`), tone changes
/// (`tone`), and the median-split indicators (`hedge_pct`, `text_only_pct`
/// per analyst; `uncertainty_index`, `ana_nfirm` over the sample).
pub fn construct_variables(
    input: &ObservationTable,
    opts: &ConstructOptions,
) -> Result<Constructed, EconError> {
    let mut table = input.clone();
    let mut exclusions = BTreeMap::new();
    let mut notes = Vec::new();
    let forecast = input.column("forecast")?;
    let actual = input.column("actual")?;
    let price = input.column("price_50")?;
    let (idx, dups) = cell_index(input);
    if dups > 0 {
        notes.push(format!(
            "{dups} repeated analyst-firm-year cells; lagged lookups use the last occurrence"
        ));
    }

    let ferror = scaled_difference(
        forecast,
        actual,
        price,
        &mut exclusions,
        &[
            "ferror:missing_forecast",
            "ferror:missing_actual",
            "ferror:missing_price",
        ],
    );
    table.set_column("ferror", winsorized(ferror, opts)?)?;

    let (next_f, next_p) = match (opt(input, "next_forecast"), opt(input, "next_price_50")) {
        (Some(f), Some(p)) => (f.to_vec(), p.to_vec()),
        _ => {
            notes.push("next-period forecasts taken from the following year's row".into());
            (
                shifted(input, &idx, forecast, 1),
                shifted(input, &idx, price, 1),
            )
        }
    };
    let frev_next = scaled_difference(
        &next_f,
        forecast,
        &next_p,
        &mut exclusions,
        &[
            "frev_next:no_next_forecast",
            "frev_next:missing_forecast",
            "frev_next:missing_price",
        ],
    );
    table.set_column("frev_next", winsorized(frev_next, opts)?)?;
    let prev_f = shifted(input, &idx, forecast, -1);
    let frev = scaled_difference(
        forecast,
        &prev_f,
        price,
        &mut exclusions,
        &[
            "frev:missing_forecast",
            "frev:no_prior_forecast",
            "frev:missing_price",
        ],
    );
    table.set_column("frev", winsorized(frev, opts)?)?;

    if let Some(day) = opt(input, "forecast_day") {
        if let Some(ann) = opt(input, "announce_day") {
            let h: Vec<f64> = ann.iter().zip(day).map(|(a, d)| a - d).collect();
            table.set_column("horizon", winsorized(h, opts)?)?;
        }
        let (bold, undefined) = bold_indicator(
            input.firm().codes(),
            input.years(),
            day,
            forecast,
            opts.bold_window_days,
        );
        let n_undefined = undefined.iter().filter(|&&u| u == 1.0).count();
        if n_undefined > 0 {
            notes.push(format!(
                "bold: {n_undefined} rows with fewer than two prior consensus forecasts set to 0"
            ));
        }
        table.set_column("bold", bold)?;
        table.set_column("bold_undefined", undefined)?;
    }

    if let Some(tone) = opt(input, "tone") {
        let prev = shifted(input, &idx, tone, -1);
        table.set_column(
            "dtone",
            tone.iter().zip(&prev).map(|(a, b)| a - b).collect(),
        )?;
        let mut sums: HashMap<(u32, u32), (f64, usize)> = HashMap::new();
        let pairs = input.analyst().codes().iter().zip(input.firm().codes());
        for (&v, (&a, &f)) in tone.iter().zip(pairs) {
            if v.is_finite() {
                let e = sums.entry((a, f)).or_default();
                e.0 += v;
                e.1 += 1;
            }
        }
        let dm = (0..input.len())
            .map(|r| {
                let key = (input.analyst().codes()[r], input.firm().codes()[r]);
                match sums.get(&key) {
                    Some((s, n)) => tone[r] - s / *n as f64,
                    None => f64::NAN,
                }
            })
            .collect();
        table.set_column("tone_af_dm", dm)?;
    }

    let by_analyst: Vec<u64> = input.analyst().codes().iter().map(|&c| c as u64).collect();
    let global = vec![0u64; input.len()];
    for (src, dst, groups) in [
        ("hedge_pct", "vagueness", &by_analyst),
        ("text_only_pct", "vagueness_text", &by_analyst),
        ("uncertainty_index", "uncertainty", &global),
        ("ana_nfirm", "busyness", &global),
    ] {
        if let Some(v) = opt(input, src) {
            table.set_column(dst, median_split(v, groups))?;
        }
    }

    Ok(Constructed {
        table,
        exclusions,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::econometrics::KeyColumn;

    #[test]
    fn ferror_arithmetic() {
        let mut t = ObservationTable::new(
            KeyColumn::from_labels(&["a", "a"]),
            KeyColumn::from_labels(&["f", "f"]),
            vec![1, 2],
        )
        .unwrap();
        t.add_column("forecast", vec![2.10, 2.0]).unwrap();
        t.add_column("actual", vec![2.00, 2.0]).unwrap();
        t.add_column("price_50", vec![50.0, 40.0]).unwrap();
        let opts = ConstructOptions {
            winsor_lower: 0.0,
            winsor_upper: 1.0,
            ..Default::default()
        };
        let c = construct_variables(&t, &opts).unwrap();
        let fe = c.table.column("ferror").unwrap();
        assert!((fe[0] - 0.002).abs() < 1e-15);
        assert_eq!(fe[1], 0.0);
        let fr = c.table.column("frev_next").unwrap();
        assert!((fr[0] - (2.0 - 2.10) / 40.0).abs() < 1e-15);
        assert!(fr[1].is_nan());
        assert_eq!(c.exclusions["frev_next:no_next_forecast"], 1);
        assert_eq!(c.exclusions["frev:no_prior_forecast"], 1);
    }

    #[test]
    fn bold_window_is_exclusive() {
        let firm = [0u32; 6];
        let year = [0i64; 6];
        let day = [0.0, 1.0, 2.0, 3.0, 31.0, 33.0];
        let f = [1.0, 1.1, 5.0, 1.0, 1.0, 1.0];
        let (bold, undef) = bold_indicator(&firm, &year, &day, &f, 30.0);
        // Day 31 sees days 2 and 3; day 1 sits on the excluded boundary.
        assert_eq!(undef, vec![1.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(bold, vec![0.0, 0.0, 1.0, 0.0, 0.0, 0.0]);
    }
}

use std::collections::HashMap;

use serde::Serialize;

use super::EconError;

/// Nearest-rank quantile of sorted data: element `ceil(q n) − 1`, clamped
/// to the valid index range.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    let rank = (q * n as f64).ceil() as isize - 1;
    sorted[rank.clamp(0, n as isize - 1) as usize]
}

fn sorted_finite(values: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| x.is_finite()).collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Clip at the nearest-rank `lower_p` and `upper_p` quantiles. Non-finite
/// entries pass through untouched and do not enter the quantiles.
pub fn winsorize(values: &[f64], lower_p: f64, upper_p: f64) -> Result<Vec<f64>, EconError> {
    if !(0.0 <= lower_p && lower_p < upper_p && upper_p <= 1.0) {
        return Err(EconError::Domain(format!(
            "winsorize needs 0 <= lower < upper <= 1, got {lower_p}, {upper_p}"
        )));
    }
    let sorted = sorted_finite(values);
    if sorted.is_empty() {
        return Err(EconError::Domain("winsorize of an empty sample".into()));
    }
    let lo = quantile_sorted(&sorted, lower_p);
    let hi = quantile_sorted(&sorted, upper_p);
    Ok(values
        .iter()
        .map(|&x| if x.is_finite() { x.clamp(lo, hi) } else { x })
        .collect())
}

/// Middle value, or the mean of the two middle values.
pub fn median(values: &[f64]) -> Option<f64> {
    let s = sorted_finite(values);
    let n = s.len();
    match n {
        0 => None,
        _ if n % 2 == 1 => Some(s[n / 2]),
        _ => Some((s[n / 2 - 1] + s[n / 2]) / 2.0),
    }
}

/// 1 when a value strictly exceeds its group median, else 0. `groups`
/// holds one key per value; pass a constant key for a global split. NaN
/// values stay NaN.
pub fn median_split(values: &[f64], groups: &[u64]) -> Vec<f64> {
    assert_eq!(values.len(), groups.len(), "one group key per value");
    let mut members: HashMap<u64, Vec<f64>> = HashMap::new();
    for (&v, &g) in values.iter().zip(groups) {
        members.entry(g).or_default().push(v);
    }
    let medians: HashMap<u64, f64> = members
        .into_iter()
        .filter_map(|(g, v)| median(&v).map(|m| (g, m)))
        .collect();
    values
        .iter()
        .zip(groups)
        .map(|(&v, g)| {
            if v.is_nan() {
                f64::NAN
            } else {
                (v > medians[g]) as u8 as f64
            }
        })
        .collect()
}

/// Summary statistics in the layout of a descriptive-statistics table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Describe {
    pub n: usize,
    pub mean: f64,
    pub sd: f64,
    pub min: f64,
    pub p25: f64,
    pub median: f64,
    pub p75: f64,
    pub max: f64,
}

/// Finite values only. `sd` uses the n − 1 denominator (NaN for n = 1).
pub fn describe(values: &[f64]) -> Option<Describe> {
    let s = sorted_finite(values);
    let n = s.len();
    if n == 0 {
        return None;
    }
    let mean = s.iter().sum::<f64>() / n as f64;
    let sd = if n > 1 {
        (s.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        f64::NAN
    };
    Some(Describe {
        n,
        mean,
        sd,
        min: s[0],
        p25: quantile_sorted(&s, 0.25),
        median: median(&s).expect("non-empty"),
        p75: quantile_sorted(&s, 0.75),
        max: s[n - 1],
    })
}

/// Markdown table of [`describe`] for named columns.
pub fn describe_markdown(columns: &[(&str, &[f64])]) -> String {
    let mut out = String::from("| Variable | N | Mean | SD | Min | P25 | Median | P75 | Max |\n");
    out.push_str("|---|---:|---:|---:|---:|---:|---:|---:|---:|\n");
    for (name, values) in columns {
        match describe(values) {
            Some(d) => out.push_str(&format!(
                "| {name} | {} | {:.4} | {:.4} | {:.4} | {:.4} | {:.4} | {:.4} | {:.4} |\n",
                d.n, d.mean, d.sd, d.min, d.p25, d.median, d.p75, d.max
            )),
            None => out.push_str(&format!("| {name} | 0 | | | | | | | |\n")),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nearest_rank() {
        let s: Vec<f64> = (1..=100).map(f64::from).collect();
        assert_eq!(quantile_sorted(&s, 0.01), 1.0);
        assert_eq!(quantile_sorted(&s, 0.99), 99.0);
        assert_eq!(quantile_sorted(&s, 0.0), 1.0);
        assert_eq!(quantile_sorted(&s, 1.0), 100.0);
        assert_eq!(quantile_sorted(&[1.0, 2.0, 3.0, 4.0], 0.5), 2.0);
    }

    #[test]
    fn winsorize_examples() {
        let x: Vec<f64> = (1..=100).map(f64::from).collect();
        let w = winsorize(&x, 0.01, 0.99).unwrap();
        assert_eq!(w[99], 99.0);
        assert_eq!(w[0], 1.0);
        assert_eq!(&w[1..99], &x[1..99]);
        assert_eq!(winsorize(&[3.0; 5], 0.01, 0.99).unwrap(), vec![3.0; 5]);
        assert_eq!(winsorize(&w, 0.01, 0.99).unwrap(), w);
        assert!(winsorize(&[], 0.01, 0.99).is_err());
        assert!(winsorize(&[1.0], 0.5, 0.5).is_err());
        let with_nan = winsorize(&[f64::NAN, 1.0, 2.0], 0.0, 1.0).unwrap();
        assert!(with_nan[0].is_nan());
    }

    #[test]
    fn median_split_examples() {
        assert_eq!(
            median_split(&[1.0, 2.0, 3.0], &[0, 0, 0]),
            vec![0.0, 0.0, 1.0]
        );
        assert_eq!(median_split(&[4.0; 4], &[7; 4]), vec![0.0; 4]);
        assert_eq!(
            median_split(&[1.0, 2.0, 10.0, 20.0], &[0, 0, 1, 1]),
            vec![0.0, 1.0, 0.0, 1.0]
        );
        assert_eq!(median(&[1.0, 2.0, 3.0, 10.0]), Some(2.5));
    }

    #[test]
    fn describe_basic() {
        let d = describe(&[1.0, 2.0, 3.0, 4.0, f64::NAN]).unwrap();
        assert_eq!(
            (d.n, d.mean, d.min, d.max, d.median),
            (4, 2.5, 1.0, 4.0, 2.5)
        );
        assert!((d.sd - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!(describe(&[]).is_none());
    }
}

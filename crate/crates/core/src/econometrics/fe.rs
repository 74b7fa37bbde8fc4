use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::table::ObservationTable;
use super::EconError;
use crate::Execution;

/// Grouping keys usable as fixed effects or cluster dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeKey {
    Analyst,
    Firm,
    Year,
    AnalystYear,
    AnalystFirm,
    FirmYear,
}

impl FeKey {
    pub const ALL: [FeKey; 6] = [
        FeKey::Analyst,
        FeKey::Firm,
        FeKey::Year,
        FeKey::AnalystYear,
        FeKey::AnalystFirm,
        FeKey::FirmYear,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FeKey::Analyst => "analyst",
            FeKey::Firm => "firm",
            FeKey::Year => "year",
            FeKey::AnalystYear => "analyst_year",
            FeKey::AnalystFirm => "analyst_firm",
            FeKey::FirmYear => "firm_year",
        }
    }

    fn raw(self, t: &ObservationTable, r: usize) -> (u64, u64) {
        let a = t.analyst().codes()[r] as u64;
        let f = t.firm().codes()[r] as u64;
        let y = t.years()[r] as u64;
        match self {
            FeKey::Analyst => (a, 0),
            FeKey::Firm => (f, 0),
            FeKey::Year => (y, 0),
            FeKey::AnalystYear => (a, y),
            FeKey::AnalystFirm => (a, f),
            FeKey::FirmYear => (f, y),
        }
    }

    /// Dense group ids (first-appearance order) for `rows` of `t`.
    pub fn group_ids(self, t: &ObservationTable, rows: &[usize]) -> Vec<u32> {
        let mut seen: HashMap<(u64, u64), u32> = HashMap::new();
        rows.iter()
            .map(|&r| {
                let next = seen.len() as u32;
                *seen.entry(self.raw(t, r)).or_insert(next)
            })
            .collect()
    }
}

impl fmt::Display for FeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FeKey {
    type Err = EconError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_lowercase().replace(['-', ' '], "_");
        FeKey::ALL
            .into_iter()
            .find(|k| k.as_str() == norm)
            .ok_or_else(|| EconError::Spec(format!("unknown grouping key `{s}`")))
    }
}

/// Number of distinct ids in a dense id vector.
pub fn n_groups(ids: &[u32]) -> usize {
    ids.iter().map(|&g| g as usize + 1).max().unwrap_or(0)
}

/// Re-number ids densely, keeping first-appearance order.
pub fn densify(ids: &[u32]) -> Vec<u32> {
    let mut map: HashMap<u32, u32> = HashMap::new();
    ids.iter()
        .map(|&g| {
            let next = map.len() as u32;
            *map.entry(g).or_insert(next)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingletonReport {
    /// Positions (into the input rows) that survive.
    pub kept: Vec<usize>,
    pub dropped: usize,
    pub rounds: usize,
}

/// Remove rows whose group under any key has a single member, repeating
/// until no singleton remains.
pub fn drop_singletons(groups: &[Vec<u32>]) -> SingletonReport {
    let n = groups.first().map_or(0, Vec::len);
    let mut alive = vec![true; n];
    let mut rounds = 0;
    loop {
        let mut changed = false;
        for ids in groups {
            let mut counts = vec![0u32; n_groups(ids)];
            for (i, &g) in ids.iter().enumerate() {
                if alive[i] {
                    counts[g as usize] += 1;
                }
            }
            for (i, &g) in ids.iter().enumerate() {
                if alive[i] && counts[g as usize] == 1 {
                    alive[i] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
        rounds += 1;
    }
    let kept: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
    SingletonReport {
        dropped: n - kept.len(),
        kept,
        rounds,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemeanOptions {
    /// Stop when a full sweep changes no entry by more than `tol` times
    /// the column's largest absolute value.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for DemeanOptions {
    fn default() -> Self {
        DemeanOptions {
            tol: 1e-10,
            max_iter: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DemeanDiagnostics {
    /// Sweeps used per column.
    pub iterations: Vec<usize>,
    /// Final relative change per column.
    pub final_change: Vec<f64>,
}

impl DemeanDiagnostics {
    pub fn max_iterations(&self) -> usize {
        self.iterations.iter().copied().max().unwrap_or(0)
    }
}

struct Groups<'a> {
    ids: &'a [u32],
    counts: Vec<f64>,
}

fn subtract_means(col: &mut [f64], g: &Groups<'_>, sums: &mut Vec<f64>) -> f64 {
    sums.clear();
    sums.resize(g.counts.len(), 0.0);
    for (x, &id) in col.iter().zip(g.ids) {
        sums[id as usize] += x;
    }
    for (s, c) in sums.iter_mut().zip(&g.counts) {
        *s /= c;
    }
    let mut change: f64 = 0.0;
    for (x, &id) in col.iter_mut().zip(g.ids) {
        let m = sums[id as usize];
        *x -= m;
        change = change.max(m.abs());
    }
    change
}

/// Sweep with a trace of relative changes; Err carries the trace.
fn demean_column(
    col: &mut [f64],
    groups: &[Groups<'_>],
    opts: &DemeanOptions,
) -> Result<(usize, f64), (usize, Vec<f64>)> {
    let scale = col.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut sums = Vec::new();
    if scale == 0.0 {
        return Ok((1, 0.0));
    }
    if groups.len() == 1 {
        subtract_means(col, &groups[0], &mut sums);
        return Ok((1, 0.0));
    }
    let mut trace = Vec::new();
    for it in 1..=opts.max_iter {
        let change = groups
            .iter()
            .map(|g| subtract_means(col, g, &mut sums))
            .fold(0.0f64, f64::max)
            / scale;
        if trace.len() == 16 {
            trace.remove(0);
        }
        trace.push(change);
        if change < opts.tol {
            return Ok((it, change));
        }
    }
    Err((opts.max_iter, trace))
}

/// Iterations and final change, or the iteration cap and its trace.
type ColumnOutcome = Result<(usize, f64), (usize, Vec<f64>)>;

/// Within-transform every column in place by alternating projections over
/// the fixed-effect groupings in `fe` (dense ids, one vector per key). An
/// empty `fe` subtracts the global mean. Columns are processed
/// independently, in parallel under [`Execution::Parallel`].
pub fn demean_fe(
    columns: &mut [Vec<f64>],
    fe: &[Vec<u32>],
    opts: &DemeanOptions,
    exec: Execution,
) -> Result<DemeanDiagnostics, EconError> {
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(EconError::Domain(
            "demeaning tolerance must be positive".into(),
        ));
    }
    let n = columns.first().map_or(0, Vec::len);
    if let Some(bad) = columns.iter().find(|c| c.len() != n) {
        return Err(EconError::LengthMismatch {
            column: "design".into(),
            expected: n,
            got: bad.len(),
        });
    }
    let global = vec![0u32; n];
    let id_sets: Vec<&[u32]> = if fe.is_empty() {
        vec![&global]
    } else {
        fe.iter().map(Vec::as_slice).collect()
    };
    let groups: Vec<Groups<'_>> = id_sets
        .into_iter()
        .map(|ids| {
            if ids.len() != n {
                return Err(EconError::LengthMismatch {
                    column: "fixed-effect ids".into(),
                    expected: n,
                    got: ids.len(),
                });
            }
            let mut counts = vec![0.0; n_groups(ids)];
            for &g in ids {
                counts[g as usize] += 1.0;
            }
            Ok(Groups { ids, counts })
        })
        .collect::<Result<_, _>>()?;

    let mut outcomes: Vec<Option<ColumnOutcome>> = vec![None; columns.len()];
    let mut work: Vec<(&mut Vec<f64>, &mut Option<_>)> =
        columns.iter_mut().zip(outcomes.iter_mut()).collect();
    exec.for_each_mut(&mut work, |(col, out)| {
        **out = Some(demean_column(col, &groups, opts));
    });
    let mut diag = DemeanDiagnostics {
        iterations: Vec::with_capacity(columns.len()),
        final_change: Vec::with_capacity(columns.len()),
    };
    for (j, out) in outcomes.into_iter().enumerate() {
        match out.expect("every column processed") {
            Ok((it, change)) => {
                diag.iterations.push(it);
                diag.final_change.push(change);
            }
            Err((iterations, trace)) => {
                return Err(EconError::NotConverged {
                    column: j,
                    iterations,
                    trace,
                })
            }
        }
    }
    Ok(diag)
}

/// Degrees of freedom absorbed by the fixed effects (intercept included).
/// Exact for one or two keys; for more keys, the sum of group counts less
/// one per additional key.
pub fn absorbed_df(fe: &[Vec<u32>]) -> usize {
    match fe {
        [] => 1,
        [one] => n_groups(one),
        [a, b] => {
            let (la, lb) = (n_groups(a), n_groups(b));
            let mut parent: Vec<usize> = (0..la + lb).collect();
            fn find(p: &mut [usize], mut x: usize) -> usize {
                while p[x] != x {
                    p[x] = p[p[x]];
                    x = p[x];
                }
                x
            }
            for (&ga, &gb) in a.iter().zip(b) {
                let (ra, rb) = (
                    find(&mut parent, ga as usize),
                    find(&mut parent, la + gb as usize),
                );
                if ra != rb {
                    parent[ra] = rb;
                }
            }
            let components = (0..la + lb).filter(|&x| find(&mut parent, x) == x).count();
            la + lb - components
        }
        many => many.iter().map(|ids| n_groups(ids)).sum::<usize>() - (many.len() - 1),
    }
}

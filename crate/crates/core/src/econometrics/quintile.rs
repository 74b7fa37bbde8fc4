use std::collections::HashMap;

use super::table::ObservationTable;
use super::EconError;

#[derive(Debug, Clone, PartialEq)]
pub struct QuintileTable {
    pub by: String,
    pub value: String,
    /// `means[h][q]`: mean of `value` at year t + h for quintile q (0 = lowest).
    pub means: Vec<[f64; 5]>,
    pub counts: Vec<[usize; 5]>,
}

impl QuintileTable {
    pub fn horizons(&self) -> usize {
        self.means.len()
    }

    /// Means fall strictly from Q1 to Q5 at horizon `h`.
    pub fn strictly_decreasing(&self, h: usize) -> bool {
        self.means[h].windows(2).all(|w| w[0] > w[1])
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("horizon,q1,q2,q3,q4,q5,n_q1,n_q2,n_q3,n_q4,n_q5\n");
        for (h, (m, c)) in self.means.iter().zip(&self.counts).enumerate() {
            let means: Vec<String> = m.iter().map(|v| v.to_string()).collect();
            let counts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
            out.push_str(&format!("{h},{},{}\n", means.join(","), counts.join(",")));
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!("| {} quintile |", self.by);
        for h in 0..self.horizons() {
            out.push_str(&if h == 0 {
                " t |".to_string()
            } else {
                format!(" t+{h} |")
            });
        }
        out.push_str("\n|---|");
        out.push_str(&"---:|".repeat(self.horizons()));
        out.push('\n');
        for q in 0..5 {
            out.push_str(&format!("| Q{} |", q + 1));
            for h in 0..self.horizons() {
                out.push_str(&format!(" {:.6} |", self.means[h][q]));
            }
            out.push('\n');
        }
        out
    }
}

/// Sort rows by `by` (ties keep row order), cut into five equal-rank groups
/// and average `value` for the same analyst and firm `h` years later,
/// `h = 0..horizons`.
pub fn quintile_table(
    table: &ObservationTable,
    by: &str,
    value: &str,
    horizons: usize,
) -> Result<QuintileTable, EconError> {
    let key = table.column(by)?;
    let val = table.column(value)?;
    let mut rows: Vec<usize> = (0..table.len()).filter(|&r| key[r].is_finite()).collect();
    let mut distinct: Vec<f64> = rows.iter().map(|&r| key[r]).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 5 {
        return Err(EconError::TooFewDistinct {
            column: by.to_string(),
            needed: 5,
            got: distinct.len(),
        });
    }
    rows.sort_by(|&a, &b| key[a].total_cmp(&key[b]));
    let n = rows.len();
    let cell: HashMap<(u32, u32, i64), usize> = (0..table.len())
        .map(|r| {
            (
                (
                    table.analyst().codes()[r],
                    table.firm().codes()[r],
                    table.years()[r],
                ),
                r,
            )
        })
        .collect();
    let mut sums = vec![[0.0; 5]; horizons];
    let mut counts = vec![[0usize; 5]; horizons];
    for (rank, &r) in rows.iter().enumerate() {
        let q = rank * 5 / n;
        let (a, f, y) = (
            table.analyst().codes()[r],
            table.firm().codes()[r],
            table.years()[r],
        );
        for h in 0..horizons {
            let target = if h == 0 {
                Some(&r)
            } else {
                cell.get(&(a, f, y + h as i64))
            };
            if let Some(&j) = target {
                if val[j].is_finite() {
                    sums[h][q] += val[j];
                    counts[h][q] += 1;
                }
            }
        }
    }
    let means = sums
        .iter()
        .zip(&counts)
        .map(|(s, c)| {
            let mut m = [f64::NAN; 5];
            for q in 0..5 {
                if c[q] > 0 {
                    m[q] = s[q] / c[q] as f64;
                }
            }
            m
        })
        .collect();
    Ok(QuintileTable {
        by: by.into(),
        value: value.into(),
        means,
        counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::econometrics::KeyColumn;

    fn table(tone: Vec<f64>, value: Vec<f64>) -> ObservationTable {
        let n = tone.len();
        let mut t = ObservationTable::new(
            KeyColumn::from_labels(&vec!["a"; n]),
            KeyColumn::from_labels(&vec!["f"; n]),
            (0..n as i64).collect(),
        )
        .unwrap();
        t.add_column("tone", tone).unwrap();
        t.add_column("ferror", value).unwrap();
        t
    }

    #[test]
    fn monotone_when_value_tracks_tone() {
        let tone: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let val: Vec<f64> = tone.iter().map(|t| -t).collect();
        let q = quintile_table(&table(tone, val), "tone", "ferror", 2).unwrap();
        assert_eq!(q.means[0], [-0.5, -2.5, -4.5, -6.5, -8.5]);
        assert!(q.strictly_decreasing(0));
        // Horizon 1 reads the next year's value; the last row has none.
        assert_eq!(q.counts[1], [2, 2, 2, 2, 1]);
        assert_eq!(q.means[1][0], -1.5);
    }

    #[test]
    fn constant_value_gives_equal_cells() {
        let tone: Vec<f64> = (0..10).map(|i| (i % 5) as f64).collect();
        let q = quintile_table(&table(tone, vec![0.3; 10]), "tone", "ferror", 1).unwrap();
        assert!(q.means[0].iter().all(|&m| m == 0.3));
    }

    #[test]
    fn too_few_distinct_values() {
        let err = quintile_table(
            &table(vec![1.0, 2.0, 1.0, 2.0], vec![0.0; 4]),
            "tone",
            "ferror",
            1,
        );
        assert!(matches!(err, Err(EconError::TooFewDistinct { got: 2, .. })));
    }
}

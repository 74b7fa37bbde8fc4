use std::collections::HashMap;
use std::io::{Read, Write};

use super::EconError;

/// Interned string key column.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct KeyColumn {
    codes: Vec<u32>,
    labels: Vec<String>,
}

impl KeyColumn {
    pub fn from_labels<S: AsRef<str>>(values: &[S]) -> Self {
        let mut lookup: HashMap<&str, u32> = HashMap::new();
        let mut labels = Vec::new();
        let codes = values
            .iter()
            .map(|v| {
                let v = v.as_ref();
                *lookup.entry(v).or_insert_with(|| {
                    labels.push(v.to_string());
                    (labels.len() - 1) as u32
                })
            })
            .collect();
        KeyColumn { codes, labels }
    }

    /// Codes index into `labels`.
    pub fn from_codes(codes: Vec<u32>, labels: Vec<String>) -> Self {
        assert!(
            codes.iter().all(|&c| (c as usize) < labels.len()),
            "key code out of range"
        );
        KeyColumn { codes, labels }
    }

    pub fn codes(&self) -> &[u32] {
        &self.codes
    }

    pub fn label(&self, row: usize) -> &str {
        &self.labels[self.codes[row] as usize]
    }

    pub fn n_labels(&self) -> usize {
        self.labels.len()
    }

    fn select(&self, rows: &[usize]) -> Self {
        KeyColumn {
            codes: rows.iter().map(|&r| self.codes[r]).collect(),
            labels: self.labels.clone(),
        }
    }
}

/// Column-oriented analyst-firm-year observations. Missing values are NaN.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ObservationTable {
    analyst: KeyColumn,
    firm: KeyColumn,
    year: Vec<i64>,
    names: Vec<String>,
    values: Vec<Vec<f64>>,
}

pub const KEY_HEADER: [&str; 3] = ["analyst_id", "firm_id", "year"];

impl ObservationTable {
    pub fn new(analyst: KeyColumn, firm: KeyColumn, year: Vec<i64>) -> Result<Self, EconError> {
        for (name, len) in [
            ("analyst_id", analyst.codes.len()),
            ("firm_id", firm.codes.len()),
        ] {
            if len != year.len() {
                return Err(EconError::LengthMismatch {
                    column: name.into(),
                    expected: year.len(),
                    got: len,
                });
            }
        }
        Ok(ObservationTable {
            analyst,
            firm,
            year,
            names: Vec::new(),
            values: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.year.len()
    }

    pub fn is_empty(&self) -> bool {
        self.year.is_empty()
    }

    pub fn analyst(&self) -> &KeyColumn {
        &self.analyst
    }

    pub fn firm(&self) -> &KeyColumn {
        &self.firm
    }

    pub fn years(&self) -> &[i64] {
        &self.year
    }

    pub fn column_names(&self) -> &[String] {
        &self.names
    }

    pub fn has_column(&self, name: &str) -> bool {
        self.names.iter().any(|n| n == name)
    }

    pub fn column(&self, name: &str) -> Result<&[f64], EconError> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.values[i].as_slice())
            .ok_or_else(|| EconError::UnknownColumn(name.to_string()))
    }

    pub fn add_column(&mut self, name: &str, values: Vec<f64>) -> Result<(), EconError> {
        if KEY_HEADER.contains(&name) || self.has_column(name) {
            return Err(EconError::DuplicateColumn(name.to_string()));
        }
        self.check_len(name, values.len())?;
        self.names.push(name.to_string());
        self.values.push(values);
        Ok(())
    }

    /// Add or overwrite.
    pub fn set_column(&mut self, name: &str, values: Vec<f64>) -> Result<(), EconError> {
        self.check_len(name, values.len())?;
        match self.names.iter().position(|n| n == name) {
            Some(i) => self.values[i] = values,
            None => return self.add_column(name, values),
        }
        Ok(())
    }

    fn check_len(&self, name: &str, got: usize) -> Result<(), EconError> {
        if got != self.len() {
            return Err(EconError::LengthMismatch {
                column: name.to_string(),
                expected: self.len(),
                got,
            });
        }
        Ok(())
    }

    /// Keep `rows`, in the given order.
    pub fn select(&self, rows: &[usize]) -> Self {
        ObservationTable {
            analyst: self.analyst.select(rows),
            firm: self.firm.select(rows),
            year: rows.iter().map(|&r| self.year[r]).collect(),
            names: self.names.clone(),
            values: self
                .values
                .iter()
                .map(|col| rows.iter().map(|&r| col[r]).collect())
                .collect(),
        }
    }

    /// Read CSV with header `analyst_id,firm_id,year,...`. Lines starting
    /// with `#` are comments; empty, `NA` and `nan` cells are missing.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self, EconError> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let csv_err = |e: csv::Error| EconError::Csv {
            line: e.position().map(|p| p.line()).unwrap_or(0),
            message: e.to_string(),
        };
        let header = rdr.headers().map_err(csv_err)?.clone();
        let cols: Vec<&str> = header.iter().collect();
        if cols.len() < 3 || cols[..3] != KEY_HEADER {
            return Err(EconError::Csv {
                line: 1,
                message: format!("header must start with {}", KEY_HEADER.join(",")),
            });
        }
        let names: Vec<String> = cols[3..].iter().map(|s| s.to_string()).collect();
        if let Some(dup) = names
            .iter()
            .enumerate()
            .find(|(i, n)| names[..*i].contains(n))
        {
            return Err(EconError::DuplicateColumn(dup.1.clone()));
        }
        let mut analyst = Vec::new();
        let mut firm = Vec::new();
        let mut year = Vec::new();
        let mut values = vec![Vec::new(); names.len()];
        for rec in rdr.records() {
            let rec = rec.map_err(csv_err)?;
            let line = rec.position().map(|p| p.line()).unwrap_or(0);
            let bad = |message: String| EconError::Csv { line, message };
            analyst.push(rec[0].to_string());
            firm.push(rec[1].to_string());
            year.push(
                rec[2]
                    .parse::<i64>()
                    .map_err(|_| bad(format!("year `{}` is not an integer", &rec[2])))?,
            );
            for (j, col) in values.iter_mut().enumerate() {
                let cell = &rec[j + 3];
                let v = match cell {
                    "" | "NA" | "nan" | "NaN" => f64::NAN,
                    _ => cell.parse::<f64>().map_err(|_| {
                        bad(format!("column {}: `{cell}` is not a number", names[j]))
                    })?,
                };
                col.push(v);
            }
        }
        let mut table = ObservationTable::new(
            KeyColumn::from_labels(&analyst),
            KeyColumn::from_labels(&firm),
            year,
        )?;
        for (n, v) in names.iter().zip(values) {
            table.add_column(n, v)?;
        }
        Ok(table)
    }

    pub fn from_csv_str(src: &str) -> Result<Self, EconError> {
        Self::read_csv(src.as_bytes())
    }

    /// Write CSV; NaN cells are left empty.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), EconError> {
        let mut w = csv::Writer::from_writer(writer);
        let io = |e: csv::Error| EconError::Csv {
            line: 0,
            message: e.to_string(),
        };
        let header: Vec<&str> = KEY_HEADER
            .iter()
            .copied()
            .chain(self.names.iter().map(String::as_str))
            .collect();
        w.write_record(&header).map_err(io)?;
        let mut rec: Vec<String> = Vec::with_capacity(header.len());
        for r in 0..self.len() {
            rec.clear();
            rec.push(self.analyst.label(r).to_string());
            rec.push(self.firm.label(r).to_string());
            rec.push(self.year[r].to_string());
            for col in &self.values {
                let v = col[r];
                rec.push(if v.is_nan() {
                    String::new()
                } else {
                    v.to_string()
                });
            }
            w.write_record(&rec).map_err(io)?;
        }
        w.flush().map_err(|e| EconError::Csv {
            line: 0,
            message: e.to_string(),
        })
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("in-memory write");
        String::from_utf8(buf).expect("utf8 csv")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_keeps_bits() {
        let src = "# comment\nanalyst_id,firm_id,year,x,y\nA,F1,2010,0.1,\nB,F1,2011,1e-300,3\nA,F2,2010,NA,-2.5\n";
        let t = ObservationTable::from_csv_str(src).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.analyst().codes(), &[0, 1, 0]);
        assert_eq!(t.firm().label(2), "F2");
        assert!(t.column("y").unwrap()[0].is_nan());
        let again = ObservationTable::from_csv_str(&t.to_csv_string()).unwrap();
        assert_eq!(again.column("x").unwrap()[1], 1e-300);
        assert_eq!(again.to_csv_string(), t.to_csv_string());
    }

    #[test]
    fn csv_errors_name_line_and_column() {
        let err =
            ObservationTable::from_csv_str("analyst_id,firm_id,year,x\nA,F,2010,zz\n").unwrap_err();
        match err {
            EconError::Csv { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("column x"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(ObservationTable::from_csv_str("firm,year\n").is_err());
        assert!(matches!(
            ObservationTable::from_csv_str("analyst_id,firm_id,year,x,x\n"),
            Err(EconError::DuplicateColumn(_))
        ));
    }

    #[test]
    fn select_and_unknown_column() {
        let mut t = ObservationTable::new(
            KeyColumn::from_labels(&["a", "b", "c"]),
            KeyColumn::from_labels(&["f", "f", "f"]),
            vec![1, 2, 3],
        )
        .unwrap();
        t.add_column("x", vec![1.0, 2.0, 3.0]).unwrap();
        let s = t.select(&[2, 0]);
        assert_eq!(s.column("x").unwrap(), &[3.0, 1.0]);
        assert_eq!(s.analyst().label(0), "c");
        assert!(matches!(t.column("nope"), Err(EconError::UnknownColumn(_))));
        assert!(t.add_column("x", vec![0.0; 3]).is_err());
        assert!(t.add_column("z", vec![0.0; 2]).is_err());
    }
}

//! CSV input and output of datasets.

use std::io::{Read, Write};

use dagdml::Dataset;
use nalgebra::{DMatrix, DVector};

use crate::CliError;

/// Numeric CSV table with a header row.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl Table {
    pub fn read<R: Read>(input: R) -> Result<Self, CliError> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
        let header: Vec<String> = rdr
            .headers()
            .map_err(|e| CliError::Data(format!("header: {e}")))?
            .iter()
            .map(str::to_string)
            .collect();
        if header.is_empty() || header.iter().all(String::is_empty) {
            return Err(CliError::Data("empty header row".into()));
        }
        let mut columns = vec![Vec::new(); header.len()];
        for (i, rec) in rdr.records().enumerate() {
            let line = i + 2;
            let rec = rec.map_err(|e| CliError::Data(format!("line {line}: {e}")))?;
            for (k, cell) in rec.iter().enumerate() {
                let v: f64 = cell.parse().map_err(|_| {
                    CliError::Data(format!(
                        "line {line}: column `{}` has non-numeric value `{cell}`",
                        header[k]
                    ))
                })?;
                columns[k].push(v);
            }
        }
        Ok(Table { header, columns })
    }

    pub fn column(&self, name: &str) -> Result<&[f64], CliError> {
        self.header
            .iter()
            .position(|h| h == name)
            .map(|k| self.columns[k].as_slice())
            .ok_or_else(|| CliError::Data(format!("column `{name}` not found in header")))
    }

    pub fn n(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }
}

/// Which columns enter the control set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Controls {
    AllOthers,
    Named(Vec<String>),
}

impl Controls {
    /// `all-others` or a comma-separated list; an empty string selects none.
    pub fn parse(s: &str) -> Self {
        match s.trim() {
            "all-others" => Controls::AllOthers,
            "" => Controls::Named(Vec::new()),
            list => Controls::Named(list.split(',').map(|c| c.trim().to_string()).collect()),
        }
    }
}

/// Column roles for the application pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct ApplicationSpec {
    pub outcome: String,
    pub treatment: String,
    pub controls: Controls,
    pub degree: u8,
}

impl ApplicationSpec {
    /// Splits `table` into outcome, treatment and (unexpanded) controls.
    pub fn dataset(&self, table: &Table) -> Result<Dataset, CliError> {
        if self.outcome == self.treatment {
            return Err(CliError::Usage(format!(
                "outcome and treatment are the same column `{}`",
                self.outcome
            )));
        }
        let y = DVector::from_column_slice(table.column(&self.outcome)?);
        let d = DVector::from_column_slice(table.column(&self.treatment)?);
        let names: Vec<String> = match &self.controls {
            Controls::AllOthers => table
                .header
                .iter()
                .filter(|h| **h != self.outcome && **h != self.treatment)
                .cloned()
                .collect(),
            Controls::Named(list) => {
                if let Some(c) = list.iter().find(|c| **c == self.outcome || **c == self.treatment) {
                    return Err(CliError::Usage(format!(
                        "`{c}` cannot be both a control and the outcome or treatment"
                    )));
                }
                list.clone()
            }
        };
        let cols = names
            .iter()
            .map(|c| table.column(c))
            .collect::<Result<Vec<_>, _>>()?;
        let x = DMatrix::from_fn(table.n(), cols.len(), |i, j| cols[j][i]);
        Dataset::new(y, d, x, names).map_err(|e| CliError::Data(e.to_string()))
    }
}

/// Writes `y,d,<controls...>` with shortest round-trip float formatting.
pub fn write_dataset<W: Write>(out: W, data: &Dataset) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["y".to_string(), "d".to_string()];
    header.extend(data.control_names.iter().cloned());
    w.write_record(&header).map_err(CliError::io)?;
    for i in 0..data.n() {
        let mut row = vec![data.y[i].to_string(), data.d[i].to_string()];
        row.extend(data.x.row(i).iter().map(f64::to_string));
        w.write_record(&row).map_err(CliError::io)?;
    }
    w.flush().map_err(CliError::io)
}

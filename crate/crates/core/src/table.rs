//! Flat tables with a checked schema, written as CSV.

use std::io::Write;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Column {
    /// Finite number.
    Number,
    /// Free text; must be nonempty.
    Text,
    /// Number or an empty cell.
    OptionalNumber,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    header: Vec<(&'static str, Column)>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[(&'static str, Column)]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push<S: ToString>(&mut self, row: impl IntoIterator<Item = S>) {
        self.rows.push(row.into_iter().map(|c| c.to_string()).collect());
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn columns(&self) -> Vec<&'static str> {
        self.header.iter().map(|h| h.0).collect()
    }

    /// Every row must match the header width and column kinds.
    pub fn validate(&self) -> Result<()> {
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != self.header.len() {
                return Err(Error::Invariant(format!(
                    "row {i} has {} cells, expected {}",
                    row.len(),
                    self.header.len()
                )));
            }
            for (cell, &(name, kind)) in row.iter().zip(&self.header) {
                let number = || cell.parse::<f64>().is_ok_and(f64::is_finite);
                let ok = match kind {
                    Column::Number => number(),
                    Column::Text => !cell.is_empty(),
                    Column::OptionalNumber => cell.is_empty() || number(),
                };
                if !ok {
                    return Err(Error::Invariant(format!("row {i}: bad {name} cell {cell:?}")));
                }
            }
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        self.validate()?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.columns())?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

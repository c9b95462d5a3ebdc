//! CSV tables: one header row, lowercase snake_case columns, shortest
//! round-trip floats, empty cells for missing values.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Real(f64),
    Text(String),
    Empty,
}

impl Cell {
    pub fn maybe(value: Option<f64>) -> Self {
        value.map_or(Cell::Empty, Cell::Real)
    }

    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            // `Display` for f64 is the shortest string that parses back exactly
            Cell::Real(v) if v.is_finite() => v.to_string(),
            Cell::Real(_) | Cell::Empty => String::new(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: Vec<String>) -> Self {
        debug_assert!(header.iter().all(|h| is_snake_case(h)), "{header:?}");
        Self { header, rows: Vec::new() }
    }

    pub fn with_rows(header: Vec<String>, rows: Vec<Vec<Cell>>) -> Self {
        let mut table = Self::new(header);
        rows.into_iter().for_each(|row| table.push(row));
        table
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn write_to<W: Write>(&self, sink: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(sink);
        writer.write_record(&self.header)?;
        for row in &self.rows {
            writer.write_record(row.iter().map(Cell::render))?;
        }
        writer.flush()?;
        Ok(())
    }

    /// Writes to `path`, or stdout when absent.
    pub fn emit(&self, path: Option<&Path>) -> Result<()> {
        match path {
            Some(path) => {
                let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
                self.write_to(io::BufWriter::new(file))
            }
            None => self.write_to(io::stdout().lock()),
        }
    }
}

pub fn is_snake_case(name: &str) -> bool {
    !name.is_empty()
        && name.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
        && !name.starts_with('_')
}

/// Column-safe rendering of a parameter value: `-10` becomes `m10`, `0.01`
/// becomes `0p01`.
pub fn label(value: f64) -> String {
    value.to_string().replace('-', "m").replace('.', "p")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_shortest_round_trip() {
        let mut table = Table::new(vec!["a".into(), "b_2".into(), "c".into()]);
        table.push(vec![Cell::Real(0.1), Cell::Int(500), Cell::Empty]);
        table.push(vec![Cell::Real(1.0 / 3.0), Cell::Real(f64::NAN), Cell::Real(-2.5e-7)]);
        let mut out = Vec::new();
        table.write_to(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text, "a,b_2,c\n0.1,500,\n0.3333333333333333,,-0.00000025\n");
        let parsed: f64 = "0.3333333333333333".parse().unwrap();
        assert_eq!(parsed, 1.0 / 3.0);
    }

    #[test]
    fn labels() {
        assert_eq!(label(20.0), "20");
        assert_eq!(label(-10.0), "m10");
        assert_eq!(label(0.01), "0p01");
        assert!(is_snake_case(&format!("eta_gamma_{}", label(0.001))));
        assert!(!is_snake_case("Eta"));
    }
}

use std::fs;
use std::path::Path;

use crate::error::Result;

/// A CSV table whose first line is a `# schema vN` comment followed by a
/// header row.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub schema: &'static str,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(schema: &'static str, header: &[&str]) -> Self {
        Self::with_header(schema, header.iter().map(|h| h.to_string()).collect())
    }

    pub fn with_header(schema: &'static str, header: Vec<String>) -> Self {
        Self {
            schema,
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        let body = w.into_inner().map_err(|e| crate::error::Error::Io(e.to_string()))?;
        let mut out = format!("# {}\n", self.schema);
        out.push_str(&String::from_utf8(body).expect("csv output is utf-8"));
        Ok(out)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_csv()?)?;
        Ok(())
    }
}

/// Fixed-precision float cell; non-finite values become empty cells.
pub fn f(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.9}")
    } else {
        String::new()
    }
}

pub fn opt(x: Option<f64>) -> String {
    x.map(f).unwrap_or_default()
}

//! Result tables, their CSV/JSON encodings, and the run manifest.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::{CommandKind, Settings};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Empty,
}

impl Cell {
    pub fn opt(v: Option<f64>) -> Cell {
        v.map_or(Cell::Empty, Cell::Num)
    }

    /// 17 significant digits, locale free.
    fn to_field(&self) -> String {
        match self {
            Cell::Num(v) if v.is_finite() => format!("{v:.16e}"),
            Cell::Num(v) => v.to_string(),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(serde_json::Value::Null, Into::into),
            Cell::Int(v) => (*v).into(),
            Cell::Text(s) => s.clone().into(),
            Cell::Empty => serde_json::Value::Null,
        }
    }
}

/// Rows in grid order, plus the method that produced each row.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub methods: Vec<String>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table { columns: columns.into_iter().map(Into::into).collect(), ..Default::default() }
    }

    pub fn push(&mut self, row: Vec<Cell>, method: impl Into<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
        self.methods.push(method.into());
    }

    pub fn append(&mut self, other: Table) {
        self.rows.extend(other.rows);
        self.methods.extend(other.methods);
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_field))?;
        }
        w.flush()?;
        Ok(())
    }

    /// `{"columns": [...], "rows": [[...], ...]}`.
    pub fn write_json<W: Write>(&self, mut out: W) -> Result<()> {
        let rows: Vec<Vec<serde_json::Value>> =
            self.rows.iter().map(|r| r.iter().map(Cell::to_json).collect()).collect();
        let doc = serde_json::json!({ "columns": self.columns, "rows": rows });
        serde_json::to_writer_pretty(&mut out, &doc)?;
        writeln!(out)?;
        Ok(())
    }

    pub fn write<W: Write>(&self, format: Format, out: W) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }
}

/// Everything needed to regenerate an output file. Passing the manifest
/// back as `--config` replays its `parts`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub recipe_version: u32,
    pub command_line: Vec<String>,
    pub command: CommandKind,
    pub recipe: Option<String>,
    pub format: Format,
    /// Fully resolved settings, one per grid part.
    pub parts: Vec<Settings>,
    pub seed: Option<u64>,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub rows: usize,
    pub skipped: Vec<String>,
    /// Method tag of each output row, in row order.
    pub method_tags: Vec<String>,
}

impl RunManifest {
    pub fn path_for(output: &Path) -> PathBuf {
        let mut name = output.as_os_str().to_owned();
        name.push(".manifest.json");
        PathBuf::from(name)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        serde_json::to_writer_pretty(&mut f, self)?;
        writeln!(f)?;
        f.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_uses_seventeen_digits() {
        let mut t = Table::new(["x", "n", "tag", "gap"]);
        t.push(vec![Cell::Num(0.1), Cell::Int(3), Cell::Text("a".into()), Cell::Empty], "m");
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "x,n,tag,gap\n1.0000000000000001e-1,3,a,\n");
        let back: f64 = "1.0000000000000001e-1".parse().unwrap();
        assert_eq!(back, 0.1);
    }

    #[test]
    fn json_keeps_column_order() {
        let mut t = Table::new(["z", "a"]);
        t.push(vec![Cell::Num(f64::NAN), Cell::Num(2.0)], "m");
        let mut buf = Vec::new();
        t.write_json(&mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["columns"][0], "z");
        assert!(v["rows"][0][0].is_null());
        assert_eq!(v["rows"][0][1], 2.0);
    }

    #[test]
    fn manifest_sits_next_to_output() {
        assert_eq!(RunManifest::path_for(Path::new("out/fig7.csv")), PathBuf::from("out/fig7.csv.manifest.json"));
    }
}

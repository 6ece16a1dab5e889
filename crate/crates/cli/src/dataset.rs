//! Plot-ready tables: a `#`-prefixed JSON metadata line followed by CSV.

use std::io::{BufRead, Write};

use anyhow::{bail, Context, Result};
use qwalk_core::BipartiteInstance;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            // 17 significant digits survive a round trip through text.
            Cell::Num(x) if x.is_finite() => format!("{x:.16e}"),
            Cell::Num(x) if x.is_nan() => "NaN".to_string(),
            Cell::Num(x) if *x > 0.0 => "inf".to_string(),
            Cell::Num(_) => "-inf".to_string(),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn parse(field: &str) -> Cell {
        if let Ok(i) = field.parse::<i64>() {
            return Cell::Int(i);
        }
        match field.parse::<f64>() {
            Ok(x) => Cell::Num(x),
            Err(_) => Cell::Text(field.to_string()),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Int(i) => Some(*i as f64),
            Cell::Text(_) => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub instance: Option<BipartiteInstance>,
    pub command: String,
    pub tool_version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    #[serde(default, skip_serializing_if = "serde_json::Map::is_empty")]
    pub parameters: serde_json::Map<String, serde_json::Value>,
}

impl Metadata {
    pub fn new(command: &str, instance: Option<BipartiteInstance>) -> Self {
        let timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        Metadata {
            instance,
            command: command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp,
            parameters: serde_json::Map::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        let value = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.parameters.insert(key.to_string(), value);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub metadata: Metadata,
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Dataset {
    pub fn new(metadata: Metadata, columns: Vec<String>) -> Self {
        Dataset { metadata, columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.columns.len() {
            bail!("row has {} cells but the table has {} columns", row.len(), self.columns.len());
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[j]).collect())
    }

    pub fn numbers(&self, name: &str) -> Option<Vec<f64>> {
        self.column(name)?.into_iter().map(Cell::as_f64).collect()
    }

    pub fn write_to(&self, out: impl Write) -> Result<()> {
        let mut out = std::io::BufWriter::new(out);
        writeln!(out, "# {}", serde_json::to_string(&self.metadata)?)?;
        let mut csv = csv::Writer::from_writer(out);
        csv.write_record(&self.columns)?;
        for row in &self.rows {
            csv.write_record(row.iter().map(Cell::render))?;
        }
        csv.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_to(&mut buf)?;
        Ok(String::from_utf8(buf)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut reader = std::io::Cursor::new(text);
        let mut first = String::new();
        reader.read_line(&mut first)?;
        let header = first.strip_prefix('#').context("missing metadata line")?;
        let metadata: Metadata = serde_json::from_str(header.trim()).context("bad metadata line")?;
        let mut csv = csv::Reader::from_reader(reader);
        let columns: Vec<String> = csv.headers()?.iter().map(str::to_string).collect();
        let mut data = Dataset::new(metadata, columns);
        for record in csv.records() {
            data.push(record?.iter().map(Cell::parse).collect())?;
        }
        Ok(data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Dataset {
        let meta = Metadata::new("test", Some(BipartiteInstance::canonical())).with("gamma", 0.25);
        let mut d = Dataset::new(meta, vec!["k".into(), "x".into(), "verdict".into()]);
        d.push(vec![3usize.into(), (1.0f64 / 3.0).into(), "adjacency_faster".into()]).unwrap();
        d.push(vec![4usize.into(), f64::INFINITY.into(), "tie, maybe".into()]).unwrap();
        d.push(vec![5usize.into(), 1e-300.into(), "x".into()]).unwrap();
        d
    }

    #[test]
    fn round_trip_is_lossless() {
        let d = sample();
        let text = d.to_csv().unwrap();
        assert!(text.starts_with("# {"));
        assert_eq!(Dataset::parse(&text).unwrap(), d);
    }

    #[test]
    fn seventeen_digits() {
        let text = sample().to_csv().unwrap();
        assert!(text.contains("3.3333333333333331e-1"), "{text}");
    }

    #[test]
    fn integral_floats_stay_floats() {
        let meta = Metadata::new("t", None);
        let mut d = Dataset::new(meta, vec!["x".into()]);
        d.push(vec![2.0f64.into()]).unwrap();
        assert_eq!(Dataset::parse(&d.to_csv().unwrap()).unwrap(), d);
    }

    #[test]
    fn ragged_rows_rejected() {
        let mut d = sample();
        assert!(d.push(vec![1usize.into()]).is_err());
    }

    #[test]
    fn column_access() {
        let d = sample();
        assert_eq!(d.numbers("k").unwrap(), vec![3.0, 4.0, 5.0]);
        assert!(d.numbers("verdict").is_none());
        assert!(d.column("missing").is_none());
    }
}

use demon_core::numeric::format_float;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Bool(bool),
    Int(i64),
    Float(f64),
    Text(String),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Self::Float(x) => Some(x),
            Self::Int(i) => Some(i as f64),
            _ => None,
        }
    }

    /// CSV rendering; floats carry 17 significant digits.
    pub fn render(&self) -> String {
        match self {
            Self::Bool(b) => b.to_string(),
            Self::Int(i) => i.to_string(),
            Self::Float(x) => format_float(*x),
            Self::Text(s) => s.clone(),
        }
    }

    /// Grid axis value from a TOML scalar.
    pub fn from_toml(v: &toml::Value) -> Self {
        match v {
            toml::Value::Boolean(b) => Self::Bool(*b),
            toml::Value::Integer(i) => Self::Int(*i),
            toml::Value::Float(x) => Self::Float(*x),
            toml::Value::String(s) => Self::Text(s.clone()),
            other => Self::Text(other.to_string()),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Self::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Self::Int(x as i64)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Self::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Self::Bool(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Self::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Self::Text(x)
    }
}

pub type Record = Vec<(String, Cell)>;

/// Build a [`Record`] from `name => value` pairs.
#[macro_export]
macro_rules! record {
    ($($k:expr => $v:expr),* $(,)?) => {
        vec![$(($k.to_string(), $crate::table::Cell::from($v))),*]
    };
}

/// Rows sharing one column set, plus the headline metrics of the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Record,
}

impl ResultTable {
    /// Table whose rows all share the columns of the first record.
    pub fn from_records(records: Vec<Record>, summary: Record) -> Self {
        let columns: Vec<String> = records.first().map(|r| r.iter().map(|(k, _)| k.clone()).collect()).unwrap_or_default();
        let rows = records
            .into_iter()
            .map(|r| {
                debug_assert!(r.iter().map(|(k, _)| k).eq(columns.iter()), "records must share columns");
                r.into_iter().map(|(_, v)| v).collect()
            })
            .collect();
        Self { columns, rows, summary }
    }

    /// One-row table whose summary is the row itself.
    pub fn single(record: Record) -> Self {
        Self::from_records(vec![record.clone()], record)
    }

    pub fn summary_value(&self, key: &str) -> Option<&Cell> {
        self.summary.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }
}

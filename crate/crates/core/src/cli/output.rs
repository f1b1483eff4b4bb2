use std::io::{self, Write};

use serde_json::{json, Map, Value};

pub const TOOL: &str = "ohmic-probe";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// One cell of an output table.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Flag(bool),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as u64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Flag(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

/// Shortest decimal string that parses back to the same `f64`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:?}")
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => fmt_num(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Flag(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            // Non-finite numbers have no JSON form.
            Cell::Num(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Int(n) => json!(n),
            Cell::Text(s) => json!(s),
            Cell::Flag(b) => json!(b),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Dataset {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Dataset {
    pub fn new(columns: &[&'static str]) -> Self {
        Dataset {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Ordered `key=value` pairs describing a run; echoed into every output file.
#[derive(Debug, Clone, Default)]
pub struct ConfigEcho {
    pub pairs: Vec<(&'static str, String)>,
}

impl ConfigEcho {
    pub fn add(&mut self, key: &'static str, value: impl Into<String>) {
        self.pairs.push((key, value.into()));
    }

    pub fn add_num(&mut self, key: &'static str, x: f64) {
        self.add(key, fmt_num(x));
    }

    pub fn add_list(&mut self, key: &'static str, xs: &[f64]) {
        self.add(
            key,
            xs.iter().map(|&x| fmt_num(x)).collect::<Vec<_>>().join("|"),
        );
    }

    /// `key=value` pairs joined by `;`, in insertion order.
    pub fn canonical(&self) -> String {
        self.pairs
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }
}

pub fn write_csv(out: &mut dyn Write, config: &ConfigEcho, data: &Dataset) -> io::Result<()> {
    writeln!(out, "# {TOOL} v{VERSION} config={}", config.canonical())?;
    writeln!(out, "{}", data.columns.join(","))?;
    for row in &data.rows {
        let line: Vec<String> = row.iter().map(Cell::csv).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

pub fn write_json(out: &mut dyn Write, config: &ConfigEcho, data: &Dataset) -> io::Result<()> {
    let mut parameters = Map::new();
    for (k, v) in &config.pairs {
        parameters.insert(k.to_string(), json!(v));
    }
    let rows: Vec<Value> = data
        .rows
        .iter()
        .map(|row| {
            let mut obj = Map::new();
            for (name, cell) in data.columns.iter().zip(row) {
                obj.insert(name.to_string(), cell.json());
            }
            Value::Object(obj)
        })
        .collect();
    let doc = json!({
        "metadata": {
            "tool": TOOL,
            "version": VERSION,
            "config": config.canonical(),
            "parameters": parameters,
            "units": "dimensionless, in units of the probe frequency w0 (_w0units)",
            "columns": data.columns,
        },
        "rows": rows,
    });
    serde_json::to_writer_pretty(&mut *out, &doc)?;
    writeln!(out)
}

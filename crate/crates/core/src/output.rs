//! Result tables: CSV with a `#` metadata block, or JSON.

use std::io::Write;

use crate::config::{parse_str, to_toml, ConfigError};
use crate::experiments::{Resolved, Scenario};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

const CONFIG_PREFIX: &str = "# config: ";

/// Nine significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.8e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Free-form `key = value` lines, in order.
    pub metadata: Vec<(String, String)>,
    /// Config text that reproduces the run.
    pub config: String,
}

impl ResultTable {
    pub fn new(name: &str, columns: &[&str], scenario: &Scenario) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            metadata: vec![("scenario".into(), scenario.name.clone())],
            config: to_toml(scenario),
        }
    }

    /// Adds every resolved parameter with its provenance.
    pub fn with_resolved(mut self, r: &Resolved) -> Self {
        for (k, v, p) in r.parameter_table() {
            self.metadata.push((k.to_string(), format!("{} [{}]", fmt_float(v), p)));
        }
        for (k, v) in &r.diagnostics {
            self.metadata.push((k.clone(), format!("{} [diagnostic]", fmt_float(*v))));
        }
        self
    }

    pub fn meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# table: {}", self.name)?;
        writeln!(w, "# tool: plasmon-sim {VERSION}")?;
        for (k, v) in &self.metadata {
            writeln!(w, "# {k} = {v}")?;
        }
        for line in self.config.lines() {
            writeln!(w, "{CONFIG_PREFIX}{line}")?;
        }
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|x| fmt_float(*x)).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8 output")
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Vec<serde_json::Value>> = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| {
                        let rounded: f64 = fmt_float(*x).parse().expect("formatted float");
                        serde_json::Number::from_f64(rounded).map_or(serde_json::Value::Null, serde_json::Value::Number)
                    })
                    .collect()
            })
            .collect();
        let meta: serde_json::Map<String, serde_json::Value> = self
            .metadata
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
            .collect();
        let doc = serde_json::json!({
            "table": self.name,
            "tool": format!("plasmon-sim {VERSION}"),
            "metadata": meta,
            "config": self.config,
            "columns": self.columns,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }
}

/// Rebuilds the scenario embedded in a CSV file's metadata block.
pub fn scenario_from_csv(text: &str) -> Result<Scenario, ConfigError> {
    let config: Vec<&str> = text.lines().filter_map(|l| l.strip_prefix(CONFIG_PREFIX)).collect();
    if config.is_empty() {
        return Err(ConfigError::single("no embedded config in metadata"));
    }
    parse_str(&config.join("\n"))
}

/// Rebuilds the scenario embedded in a JSON result.
pub fn scenario_from_json(text: &str) -> Result<Scenario, ConfigError> {
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| ConfigError::single(format!("invalid JSON result: {e}")))?;
    let config = v
        .get("config")
        .and_then(|c| c.as_str())
        .ok_or_else(|| ConfigError::single("no embedded config in JSON result"))?;
    parse_str(config)
}

/// Metadata value for `key` in a CSV file.
pub fn csv_metadata<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines()
        .filter_map(|l| l.strip_prefix("# "))
        .filter_map(|l| l.split_once(" = "))
        .find(|(k, _)| *k == key)
        .map(|(_, v)| v)
}

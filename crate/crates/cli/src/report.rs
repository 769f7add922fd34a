//! Tabular results and their CSV/JSON renderings.

use serde_json::{Map, Value};

use crate::error::CliError;

/// Library version embedded in every output header.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    /// Run configuration, including `seed`.
    pub config: Map<String, Value>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    /// One-line human summary; not part of the document.
    pub summary: String,
    /// Whether every verification carried out by the command passed.
    pub passed: bool,
}

impl Report {
    pub fn new(command: &str, config: Map<String, Value>, columns: Vec<&'static str>) -> Self {
        Report {
            command: command.to_string(),
            config,
            columns,
            rows: Vec::new(),
            summary: String::new(),
            passed: true,
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    fn header_config(&self) -> Map<String, Value> {
        let mut config = self.config.clone();
        config.insert("version".into(), Value::from(VERSION));
        config
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> =
                    self.columns.iter().zip(row).map(|(c, v)| ((*c).to_string(), v.clone())).collect();
                Value::Object(obj)
            })
            .collect();
        let mut doc = Map::new();
        doc.insert("command".into(), Value::from(self.command.clone()));
        doc.insert("config".into(), Value::Object(self.header_config()));
        doc.insert("rows".into(), Value::Array(rows));
        let mut text = serde_json::to_string_pretty(&Value::Object(doc)).map_err(|e| CliError::Runtime(e.to_string()))?;
        text.push('\n');
        Ok(text)
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let config = Value::Object(self.config.clone());
        let seed = self.config.get("seed").cloned().unwrap_or(Value::Null);
        let mut text = format!(
            "# command: {}\n# config: {}\n# version: {}\n# seed: {}\n",
            self.command, config, VERSION, seed
        );
        let mut writer = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Runtime(e.to_string());
        writer.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            writer.write_record(row.iter().map(cell_text)).map_err(io)?;
        }
        let bytes = writer.into_inner().map_err(|e| CliError::Runtime(e.to_string()))?;
        text.push_str(&String::from_utf8(bytes).map_err(|e| CliError::Runtime(e.to_string()))?);
        Ok(text)
    }
}

fn cell_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut config = Map::new();
        config.insert("seed".into(), Value::from(7));
        let mut r = Report::new("eval", config, vec!["x", "tau", "ok"]);
        r.push(vec![Value::from("0.(01)"), Value::from("2/3"), Value::from(true)]);
        r
    }

    #[test]
    fn csv_layout() {
        let text = sample().to_csv().unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# command: eval");
        assert_eq!(lines[1], "# config: {\"seed\":7}");
        assert!(lines[2].starts_with("# version: "));
        assert_eq!(lines[3], "# seed: 7");
        assert_eq!(lines[4], "x,tau,ok");
        assert_eq!(lines[5], "0.(01),2/3,true");
    }

    #[test]
    fn json_layout() {
        let v: Value = serde_json::from_str(&sample().to_json().unwrap()).unwrap();
        assert_eq!(v["command"], "eval");
        assert_eq!(v["config"]["seed"], 7);
        assert_eq!(v["config"]["version"], VERSION);
        assert_eq!(v["rows"][0]["tau"], "2/3");
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["command", "config", "rows"]);
    }
}

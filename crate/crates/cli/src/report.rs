use serde_json::{json, Map, Value};

pub const SCHEMA: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Everything a command produces. `summary` holds scalar results, `records`
/// one row per listed item.
pub struct Report {
    pub command: &'static str,
    pub config: Value,
    pub summary: Map<String, Value>,
    pub records: Vec<Map<String, Value>>,
}

impl Report {
    pub fn new(command: &'static str, config: Value) -> Self {
        Report { command, config, summary: Map::new(), records: Vec::new() }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.insert(key.to_string(), value.into());
    }

    pub fn push(&mut self, record: Value) {
        match record {
            Value::Object(map) => self.records.push(map),
            other => panic!("record must be an object, got {other}"),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "version": popi_core::VERSION,
            "command": self.command,
            "config": self.config,
            "summary": self.summary,
            "records": self.records,
        })
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>, String> {
        match format {
            Format::Json => {
                let mut out = serde_json::to_vec_pretty(&self.to_json()).map_err(|e| e.to_string())?;
                out.push(b'\n');
                Ok(out)
            }
            Format::Text => Ok(self.render_text().into_bytes()),
            Format::Csv => self.render_csv(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command={} version={} schema={}\n", self.command, popi_core::VERSION, SCHEMA));
        out.push_str(&format!("config={}\n", self.config));
        for (k, v) in &self.summary {
            out.push_str(&format!("{k}={}\n", cell(v)));
        }
        for r in &self.records {
            let line: Vec<String> = r.iter().map(|(k, v)| format!("{k}={}", cell(v))).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Records as rows when there are any, otherwise the summary as one row.
    fn render_csv(&self) -> Result<Vec<u8>, String> {
        let rows: Vec<&Map<String, Value>> =
            if self.records.is_empty() { vec![&self.summary] } else { self.records.iter().collect() };
        let mut header: Vec<&String> = Vec::new();
        for row in &rows {
            for k in row.keys() {
                if !header.contains(&k) {
                    header.push(k);
                }
            }
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&header).map_err(|e| e.to_string())?;
        for row in rows {
            let cells: Vec<String> = header.iter().map(|k| row.get(*k).map(cell).unwrap_or_default()).collect();
            w.write_record(&cells).map_err(|e| e.to_string())?;
        }
        w.flush().map_err(|e| e.to_string())?;
        w.into_inner().map_err(|e| e.to_string())
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

//! Report layout and CSV/JSON serialization.
//!
//! CSV: a `# schema_version: 1` line, `# key: value` lines echoing the
//! inputs, `# warning: ...` lines, then a header row and data rows.
//! JSON: one flat object; table columns become arrays.

use serde_json::{Map, Value as Json};

use crate::args::Format;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    Null,
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Num(v)
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Int(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as u64)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map_or(Value::Null, Into::into)
    }
}

impl Value {
    fn csv(&self) -> String {
        match self {
            Value::Num(x) => format_g(*x),
            Value::Int(n) => n.to_string(),
            Value::Bool(b) => b.to_string(),
            Value::Text(s) => s.clone(),
            Value::Null => String::new(),
        }
    }

    fn json(&self) -> Json {
        match self {
            Value::Num(x) => serde_json::Number::from_f64(*x).map_or(Json::Null, Json::Number),
            Value::Int(n) => Json::from(*n),
            Value::Bool(b) => Json::Bool(*b),
            Value::Text(s) => Json::String(s.clone()),
            Value::Null => Json::Null,
        }
    }
}

/// C `%.10g`: ten significant digits, trailing zeros removed.
pub fn format_g(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.9e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..10).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        trim_zeros(&format!("{x:.prec$}", prec = (9 - exp) as usize)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone)]
pub enum Body {
    Record(Vec<(String, Value)>),
    Table { columns: Vec<String>, rows: Vec<Vec<Value>> },
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub inputs: Vec<(String, Value)>,
    pub body: Body,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn record(command: &'static str) -> Self {
        Self { command, inputs: Vec::new(), body: Body::Record(Vec::new()), warnings: Vec::new() }
    }

    pub fn table(command: &'static str, columns: &[&str]) -> Self {
        Self {
            command,
            inputs: Vec::new(),
            body: Body::Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() },
            warnings: Vec::new(),
        }
    }

    pub fn input(&mut self, name: &str, value: impl Into<Value>) -> &mut Self {
        self.inputs.push((name.to_string(), value.into()));
        self
    }

    pub fn field(&mut self, name: &str, value: impl Into<Value>) -> &mut Self {
        match &mut self.body {
            Body::Record(fields) => fields.push((name.to_string(), value.into())),
            Body::Table { .. } => panic!("field() on a table report"),
        }
        self
    }

    pub fn row(&mut self, values: Vec<Value>) -> &mut Self {
        match &mut self.body {
            Body::Table { columns, rows } => {
                assert_eq!(values.len(), columns.len(), "row width");
                rows.push(values);
            }
            Body::Record(_) => panic!("row() on a record report"),
        }
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("# schema_version: {SCHEMA_VERSION}\n# command: {}\n", self.command);
        for (name, value) in &self.inputs {
            out.push_str(&format!("# {name}: {}\n", value.csv()));
        }
        for w in &self.warnings {
            out.push_str(&format!("# warning: {w}\n"));
        }
        let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        match &self.body {
            Body::Record(fields) => {
                writer.write_record(fields.iter().map(|(n, _)| n.as_str())).expect("in-memory write");
                writer.write_record(fields.iter().map(|(_, v)| v.csv())).expect("in-memory write");
            }
            Body::Table { columns, rows } => {
                writer.write_record(columns).expect("in-memory write");
                for row in rows {
                    writer.write_record(row.iter().map(Value::csv)).expect("in-memory write");
                }
            }
        }
        let bytes = writer.into_inner().expect("in-memory flush");
        out.push_str(std::str::from_utf8(&bytes).expect("utf-8 csv"));
        out
    }

    pub fn to_json(&self) -> String {
        let mut map = Map::new();
        map.insert("schema_version".into(), Json::String(SCHEMA_VERSION.into()));
        map.insert("command".into(), Json::String(self.command.into()));
        for (name, value) in &self.inputs {
            map.insert(name.clone(), value.json());
        }
        match &self.body {
            Body::Record(fields) => {
                for (name, value) in fields {
                    map.insert(name.clone(), value.json());
                }
            }
            Body::Table { columns, rows } => {
                for (i, name) in columns.iter().enumerate() {
                    map.insert(name.clone(), Json::Array(rows.iter().map(|r| r[i].json()).collect()));
                }
            }
        }
        map.insert("warnings".into(), Json::Array(self.warnings.iter().cloned().map(Json::String).collect()));
        let mut text = serde_json::to_string_pretty(&Json::Object(map)).expect("serializable report");
        text.push('\n');
        text
    }
}

//! Deterministic rendering: CSV tables with `# key = value` footers, and
//! JSON with sorted keys and fixed 17-significant-digit float formatting, so
//! identical inputs always produce byte-identical documents.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde_json::Value;

use crate::config::RunConfig;
use crate::{CliError, FormatArg};

/// Round-trip float formatting shared by every emitter.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, Copy)]
pub enum Cell {
    Int(u64),
    Float(f64),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Float(v) => fmt_float(*v),
        }
    }

    fn to_json(self) -> Value {
        match self {
            Cell::Int(n) => Value::from(n),
            Cell::Float(v) => {
                serde_json::Number::from_f64(v).map(Value::Number).unwrap_or(Value::Null)
            }
        }
    }
}

/// A column-ordered table with named scalar footers.
#[derive(Debug, Clone)]
pub struct Table {
    pub command: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub footers: Vec<(String, f64)>,
}

impl Table {
    pub fn new(command: &'static str, columns: Vec<&'static str>) -> Self {
        Self {
            command,
            columns,
            rows: Vec::new(),
            footers: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn push_footer(&mut self, key: String, value: f64) {
        self.footers.push((key, value));
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        for (key, value) in &self.footers {
            let _ = writeln!(out, "# {key} = {}", fmt_float(*value));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let mut doc = serde_json::Map::new();
        doc.insert("schema_version".into(), Value::from("1"));
        doc.insert("command".into(), Value::from(self.command));
        doc.insert(
            "columns".into(),
            Value::from(self.columns.iter().map(|c| Value::from(*c)).collect::<Vec<_>>()),
        );
        doc.insert(
            "rows".into(),
            Value::from(
                self.rows
                    .iter()
                    .map(|r| Value::from(r.iter().map(|c| c.to_json()).collect::<Vec<_>>()))
                    .collect::<Vec<_>>(),
            ),
        );
        let mut footers = serde_json::Map::new();
        for (key, value) in &self.footers {
            footers.insert(
                key.clone(),
                serde_json::Number::from_f64(*value).map(Value::Number).unwrap_or(Value::Null),
            );
        }
        doc.insert("footers".into(), Value::Object(footers));
        Value::Object(doc)
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_scalar(v: &Value, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                let f = n.as_f64().unwrap();
                if f.is_finite() {
                    let _ = write!(out, "{f:.16e}");
                } else {
                    out.push_str("null");
                }
            } else {
                let _ = write!(out, "{n}");
            }
        }
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("string serialization is infallible"));
        }
        _ => unreachable!("containers handled by write_value"),
    }
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    let pad_in = "  ".repeat(indent + 1);
    match v {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(is_scalar) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_scalar(item, out);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad_in);
                write_value(item, indent + 1, out);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, key) in keys.iter().enumerate() {
                out.push_str(&pad_in);
                out.push_str(&serde_json::to_string(key).expect("key serialization"));
                out.push_str(": ");
                write_value(&map[*key], indent + 1, out);
                if i + 1 < keys.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad);
            out.push('}');
        }
        scalar => write_scalar(scalar, out),
    }
}

/// Render a JSON document with sorted keys and fixed float formatting.
pub fn render_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, 0, &mut out);
    out.push('\n');
    out
}

/// Plot metadata emitted alongside figure-reproduction outputs.
pub fn figure_meta(
    command: &str,
    x_label: &str,
    y_label: &str,
    legend: Vec<String>,
) -> Value {
    let mut doc = serde_json::Map::new();
    doc.insert("schema_version".into(), Value::from("1"));
    doc.insert("command".into(), Value::from(command));
    doc.insert("x_label".into(), Value::from(x_label));
    doc.insert("y_label".into(), Value::from(y_label));
    doc.insert(
        "legend".into(),
        Value::from(legend.into_iter().map(Value::from).collect::<Vec<_>>()),
    );
    Value::Object(doc)
}

/// Finished command output: the document body, optional sidecar plot
/// metadata, and the process exit code.
pub struct CommandOutput {
    pub body: String,
    pub meta: Option<Value>,
    pub exit: i32,
}

impl CommandOutput {
    pub fn table(cfg: &RunConfig, table: Table) -> Result<Self, CliError> {
        let body = match cfg.format.unwrap_or(FormatArg::Csv) {
            FormatArg::Csv => table.to_csv(),
            FormatArg::Json => render_json(&table.to_json()),
        };
        Ok(Self {
            body,
            meta: None,
            exit: 0,
        })
    }

    pub fn json(cfg: &RunConfig, doc: &Value) -> Result<Self, CliError> {
        if matches!(cfg.format, Some(FormatArg::Csv)) {
            return Err(CliError::Usage(
                "this command emits JSON only; drop --format csv".into(),
            ));
        }
        Ok(Self {
            body: render_json(doc),
            meta: None,
            exit: 0,
        })
    }

    pub fn with_meta(mut self, meta: Value) -> Self {
        self.meta = Some(meta);
        self
    }

    pub fn with_exit(mut self, exit: i32) -> Self {
        self.exit = exit;
        self
    }
}

fn sidecar_path(out: &std::path::Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

/// Write the document to `--out` (plus its metadata sidecar) or to stdout.
pub fn emit(cfg: &RunConfig, output: CommandOutput) -> Result<i32, CliError> {
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, &output.body).map_err(CliError::Io)?;
            if let Some(meta) = &output.meta {
                std::fs::write(sidecar_path(path), render_json(meta)).map_err(CliError::Io)?;
            }
        }
        None => print!("{}", output.body),
    }
    Ok(output.exit)
}

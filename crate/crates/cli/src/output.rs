//! Rendering of command results as JSON, CSV or plain text.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Rows with a fixed header, used for CSV output and for aligned text.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

/// Result of one subcommand: a JSON document and optionally a table view of it.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub body: Value,
    pub table: Option<Table>,
}

pub const SCHEMA_VERSION: u64 = 1;

/// Formats `v` with `digits` significant digits, switching to exponent form
/// for very large or very small magnitudes.
pub fn sig(v: f64, digits: usize) -> String {
    if !v.is_finite() {
        return if v.is_nan() {
            "NaN".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if v == 0.0 {
        return "0".into();
    }
    let exp = v.abs().log10().floor() as i32;
    if (-5..16).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        let s = format!("{v:.decimals$}");
        trim_zeros(s)
    } else {
        let s = format!("{:.*e}", digits - 1, v);
        let (mant, e) = s.split_once('e').expect("exponent form");
        format!("{}e{}", trim_zeros(mant.to_string()), e)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn json_number(n: &serde_json::Number) -> String {
    if let Some(i) = n.as_i64() {
        i.to_string()
    } else if let Some(u) = n.as_u64() {
        u.to_string()
    } else {
        let f = n.as_f64().expect("number");
        // Non-finite values never reach here: serde_json maps them to null.
        let s = sig(f, 17);
        if s.contains(['.', 'e']) {
            s
        } else {
            format!("{s}.0")
        }
    }
}

/// Compact JSON with every float at 17 significant digits.
pub fn to_json(v: &Value, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => out.push_str(&json_number(n)),
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string")),
        Value::Array(a) => {
            out.push('[');
            for (i, x) in a.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                to_json(x, out);
            }
            out.push(']');
        }
        Value::Object(m) => {
            out.push('{');
            for (i, (k, x)) in m.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(k).expect("key"));
                out.push(':');
                to_json(x, out);
            }
            out.push('}');
        }
    }
}

fn scalar(v: &Value, digits: usize) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match n.as_f64() {
            Some(f) if n.is_f64() => sig(f, digits),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = a.iter().map(|x| scalar(x, digits)).collect();
            format!("[{}]", items.join(" "))
        }
        other => {
            let mut s = String::new();
            to_json(other, &mut s);
            s
        }
    }
}

/// `(dotted.key, value)` pairs for every leaf of `v`.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, Value)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&join(k), x, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&join(&i.to_string()), x, out);
            }
        }
        other => out.push((prefix.to_string(), other.clone())),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn render(report: &Report, format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Json => {
            let mut doc = Map::new();
            doc.insert("schema".into(), Value::from(SCHEMA_VERSION));
            doc.insert("command".into(), Value::from(report.command));
            match &report.body {
                Value::Object(m) => doc.extend(m.clone()),
                other => {
                    doc.insert("result".into(), other.clone());
                }
            }
            to_json(&Value::Object(doc), &mut out);
            out.push('\n');
        }
        Format::Csv => match &report.table {
            Some(t) => {
                out.push_str(&t.header.join(","));
                out.push('\n');
                for row in &t.rows {
                    let cells: Vec<String> = row.iter().map(|c| csv_field(&scalar(c, 17))).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
            }
            None => {
                out.push_str("key,value\n");
                let mut leaves = Vec::new();
                flatten("", &report.body, &mut leaves);
                for (k, v) in leaves {
                    let _ = writeln!(out, "{},{}", csv_field(&k), csv_field(&scalar(&v, 17)));
                }
            }
        },
        Format::Text => match &report.table {
            Some(t) => {
                let cells: Vec<Vec<String>> = t
                    .rows
                    .iter()
                    .map(|r| r.iter().map(|c| scalar(c, 6)).collect())
                    .collect();
                let widths: Vec<usize> = (0..t.header.len())
                    .map(|j| {
                        cells
                            .iter()
                            .map(|r| r[j].len())
                            .chain([t.header[j].len()])
                            .max()
                            .unwrap_or(0)
                    })
                    .collect();
                let line = |items: Vec<&str>| {
                    items
                        .iter()
                        .zip(&widths)
                        .map(|(s, w)| format!("{s:>w$}"))
                        .collect::<Vec<_>>()
                        .join("  ")
                };
                out.push_str(&line(t.header.clone()));
                out.push('\n');
                for r in &cells {
                    out.push_str(&line(r.iter().map(String::as_str).collect()));
                    out.push('\n');
                }
            }
            None => {
                let mut leaves = Vec::new();
                flatten("", &report.body, &mut leaves);
                for (k, v) in leaves {
                    let _ = writeln!(out, "{k}: {}", scalar(&v, 6));
                }
            }
        },
    }
    out
}

//! Output documents `{config, results, diagnostics}` as JSON with every
//! float written to 17 significant digits, or as CSV with one result record
//! per row.

use std::io::{self, Write};

use anyhow::Result;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{Map, Value};

use crate::config::{Format, RunConfig};

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

struct FixedDigits<'a>(PrettyFormatter<'a>);

impl Formatter for FixedDigits<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub struct Document {
    pub config: Value,
    pub results: Vec<Value>,
    pub diagnostics: Value,
}

impl Document {
    pub fn new(cfg: &RunConfig, results: Vec<Value>, diagnostics: Value) -> Result<Self> {
        Ok(Document { config: serde_json::to_value(cfg)?, results, diagnostics })
    }

    pub fn to_json(&self) -> Result<Vec<u8>> {
        let mut doc = Map::new();
        doc.insert("config".into(), self.config.clone());
        doc.insert("results".into(), Value::Array(self.results.clone()));
        doc.insert("diagnostics".into(), self.diagnostics.clone());
        let mut buf = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedDigits(PrettyFormatter::new()));
        Value::Object(doc).serialize(&mut ser)?;
        buf.push(b'\n');
        Ok(buf)
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let rows: Vec<Vec<(String, String)>> = self.results.iter().map(flatten).collect();
        let mut header: Vec<String> = Vec::new();
        for row in &rows {
            for (k, _) in row {
                if !header.contains(k) {
                    header.push(k.clone());
                }
            }
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&header)?;
        for row in &rows {
            let record: Vec<&str> = header
                .iter()
                .map(|h| row.iter().find(|(k, _)| k == h).map(|(_, v)| v.as_str()).unwrap_or(""))
                .collect();
            w.write_record(&record)?;
        }
        Ok(w.into_inner()?)
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>> {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }
}

/// Nested objects become dotted column names; arrays are kept as compact JSON.
fn flatten(v: &Value) -> Vec<(String, String)> {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, x, out);
                }
            }
            other => out.push((prefix.to_string(), cell(other))),
        }
    }
    let mut out = Vec::new();
    walk("", v, &mut out);
    out
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => i.to_string(),
            (_, Some(u)) => u.to_string(),
            _ => fmt_f64(n.as_f64().unwrap_or(f64::NAN)),
        },
        Value::String(s) => s.clone(),
        Value::Array(_) => {
            let mut buf = Vec::new();
            let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedDigits(PrettyFormatter::with_indent(b"")));
            if v.serialize(&mut ser).is_err() {
                return String::new();
            }
            String::from_utf8_lossy(&buf).split_whitespace().collect::<Vec<_>>().join("")
        }
        Value::Object(_) => unreachable!("objects are flattened"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn doc(results: Vec<Value>) -> Document {
        Document { config: json!({"mass": 1.0}), results, diagnostics: json!({}) }
    }

    #[test]
    fn floats_have_seventeen_digits() {
        let s = String::from_utf8(doc(vec![json!({"x": 0.1, "n": 3})]).to_json().unwrap()).unwrap();
        assert!(s.contains("1.0000000000000001e-1"), "{s}");
        assert!(s.contains("\"n\": 3"));
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["results"][0]["x"].as_f64(), Some(0.1));
    }

    #[test]
    fn csv_flattens_nested_records() {
        let d = doc(vec![json!({"e": -0.5, "g": {"re": 1.0, "im": 2.0}, "qn": [[0, 0, 0]]}), json!({"e": -0.1, "g": null})]);
        let s = String::from_utf8(d.to_csv().unwrap()).unwrap();
        let mut lines = s.lines();
        assert_eq!(lines.next(), Some("e,g.re,g.im,qn,g"));
        assert_eq!(lines.next(), Some("-5.0000000000000000e-1,1.0000000000000000e0,2.0000000000000000e0,\"[[0,0,0]]\","));
    }
}

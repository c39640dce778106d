//! Machine-readable report lines: `@kind key=value key=value …`.
//!
//! Values never contain whitespace. Numbers are printed with 12 significant
//! digits by [`fmt_g`](crate::format::fmt_g).

use std::fmt;

use crate::error::{Error, Result};
use crate::format::fmt_g;

#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub kind: String,
    pub fields: Vec<(String, String)>,
}

impl Record {
    pub fn new(kind: impl Into<String>) -> Self {
        Self {
            kind: kind.into(),
            fields: Vec::new(),
        }
    }

    pub fn text(mut self, key: &str, value: impl fmt::Display) -> Self {
        let v: String = value
            .to_string()
            .split_whitespace()
            .collect::<Vec<_>>()
            .join("_");
        self.fields
            .push((key.to_string(), if v.is_empty() { "-".into() } else { v }));
        self
    }

    pub fn num(self, key: &str, value: f64) -> Self {
        self.text(key, fmt_g(value))
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn get_f64(&self, key: &str) -> Option<f64> {
        self.get(key)?.parse().ok()
    }
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "@{}", self.kind)?;
        for (k, v) in &self.fields {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

pub fn parse_record(line: &str) -> Result<Record> {
    let bad = |msg: &str| Error::Parse {
        line: 1,
        column: 1,
        message: msg.to_string(),
    };
    let mut parts = line.split_whitespace();
    let kind = parts
        .next()
        .and_then(|k| k.strip_prefix('@'))
        .filter(|k| !k.is_empty())
        .ok_or_else(|| bad("records start with `@kind`"))?;
    let mut rec = Record::new(kind);
    for p in parts {
        let (k, v) = p.split_once('=').ok_or_else(|| bad("expected key=value"))?;
        rec.fields.push((k.to_string(), v.to_string()));
    }
    Ok(rec)
}

/// Every record line of a report, in order.
pub fn parse_records(text: &str) -> Result<Vec<Record>> {
    text.lines()
        .filter(|l| l.starts_with('@'))
        .map(parse_record)
        .collect()
}

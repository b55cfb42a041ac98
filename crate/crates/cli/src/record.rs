use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use revpinsker::ExtendedReal;
use serde_json::{Map, Value};

use crate::CliError;

/// Significant digits for JSON numbers; enough to round-trip any `f64`.
pub const JSON_DIGITS: usize = 17;
pub const CSV_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotApplicable => "n/a",
        })
    }
}

impl FromStr for Status {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "pass" => Ok(Status::Pass),
            "fail" => Ok(Status::Fail),
            "n/a" => Ok(Status::NotApplicable),
            other => Err(CliError::Parse(format!("unknown status {other:?}"))),
        }
    }
}

/// One command's output: echoed inputs, named results, verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputRecord {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub results: BTreeMap<String, ExtendedReal>,
    pub status: Status,
}

impl OutputRecord {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            results: BTreeMap::new(),
            status: Status::NotApplicable,
        }
    }

    pub fn input(&mut self, key: &str, value: impl fmt::Display) -> &mut Self {
        self.inputs.insert(key.to_string(), value.to_string());
        self
    }

    pub fn result(&mut self, key: &str, value: impl Into<ExtendedReal>) -> &mut Self {
        self.results.insert(key.to_string(), value.into());
        self
    }

    /// Stores `weights` as `{prefix}[0]`, `{prefix}[1]`, ...
    pub fn vector(&mut self, prefix: &str, weights: &[f64]) -> &mut Self {
        for (i, &w) in weights.iter().enumerate() {
            self.results.insert(format!("{prefix}[{i}]"), ExtendedReal::Finite(w));
        }
        self
    }

    pub fn to_json(&self) -> String {
        let inputs: Map<String, Value> = self
            .inputs
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        let results: Map<String, Value> = self
            .results
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(format_extended(*v, JSON_DIGITS))))
            .collect();
        let mut root = Map::new();
        root.insert("command".into(), Value::String(self.command.clone()));
        root.insert("inputs".into(), Value::Object(inputs));
        root.insert("results".into(), Value::Object(results));
        root.insert("status".into(), Value::String(self.status.to_string()));
        serde_json::to_string_pretty(&Value::Object(root)).expect("string map serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let root: Value = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        let field = |name: &str| {
            root.get(name)
                .ok_or_else(|| CliError::Parse(format!("missing field {name:?}")))
        };
        let string = |v: &Value| {
            v.as_str()
                .map(str::to_string)
                .ok_or_else(|| CliError::Parse(format!("expected a string, got {v}")))
        };
        let object = |v: &Value| {
            v.as_object()
                .cloned()
                .ok_or_else(|| CliError::Parse(format!("expected an object, got {v}")))
        };

        let mut record = OutputRecord::new(&string(field("command")?)?);
        record.status = string(field("status")?)?.parse()?;
        for (k, v) in object(field("inputs")?)? {
            record.inputs.insert(k, string(&v)?);
        }
        for (k, v) in object(field("results")?)? {
            record.results.insert(k, parse_extended(&string(&v)?)?);
        }
        Ok(record)
    }

    /// Long-form table `section,key,value`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut row = |a: &str, b: &str, c: &str| w.write_record([a, b, c]).expect("in-memory write");
        row("section", "key", "value");
        row("command", "", &self.command);
        for (k, v) in &self.inputs {
            row("input", k, v);
        }
        for (k, v) in &self.results {
            row("result", k, &format_extended(*v, CSV_DIGITS));
        }
        row("status", "", &self.status.to_string());
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }

    pub fn from_csv(text: &str) -> Result<Self, CliError> {
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let mut record = OutputRecord::new("");
        for row in reader.records() {
            let row = row.map_err(|e| CliError::Parse(e.to_string()))?;
            let (section, key, value) = (&row[0], &row[1], &row[2]);
            match section {
                "command" => record.command = value.to_string(),
                "status" => record.status = value.parse()?,
                "input" => {
                    record.inputs.insert(key.to_string(), value.to_string());
                }
                "result" => {
                    record.results.insert(key.to_string(), parse_extended(value)?);
                }
                other => return Err(CliError::Parse(format!("unknown section {other:?}"))),
            }
        }
        Ok(record)
    }
}

pub fn parse_extended(s: &str) -> Result<ExtendedReal, CliError> {
    s.parse().map_err(|e: revpinsker::Error| CliError::Parse(e.to_string()))
}

/// `x` to `digits` significant digits, in plain decimal unless the exponent is
/// far from zero. Trailing zeros are dropped.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

pub fn format_extended(x: ExtendedReal, digits: usize) -> String {
    match x {
        ExtendedReal::Finite(v) => format_sig(v, digits),
        other => other.to_string(),
    }
}

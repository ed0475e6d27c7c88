//! Report envelope and the three renderers. Floats always carry 17
//! significant digits so every printed value parses back to the same f64.

use std::fmt::Write as _;
use std::io::Write;

use anyhow::{Context, Result};
use chrono::{DateTime, SecondsFormat, Utc};
use serde_json::{Map, Number, Value};

use crate::args::OutputFormat;

pub const TOOL: &str = "osci";
pub const SCHEMA_VERSION: u32 = 1;

/// A command's payload plus, for tabular commands, the array field that
/// becomes the CSV body.
pub struct Report {
    pub command: String,
    pub payload: Value,
    pub table: Option<&'static str>,
}

/// Honors `SOURCE_DATE_EPOCH` so repeated runs can be byte-identical.
fn timestamp() -> Result<String> {
    let when = match std::env::var("SOURCE_DATE_EPOCH") {
        Ok(raw) => {
            let secs: i64 = raw
                .trim()
                .parse()
                .with_context(|| format!("SOURCE_DATE_EPOCH `{raw}` is not an integer"))?;
            DateTime::<Utc>::from_timestamp(secs, 0).context("SOURCE_DATE_EPOCH out of range")?
        }
        Err(_) => Utc::now(),
    };
    Ok(when.to_rfc3339_opts(SecondsFormat::Secs, true))
}

pub fn envelope(report: &Report) -> Result<Value> {
    let mut env = Map::new();
    env.insert("tool".into(), TOOL.into());
    env.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    env.insert("schema_version".into(), SCHEMA_VERSION.into());
    env.insert("command".into(), report.command.clone().into());
    env.insert("timestamp".into(), timestamp()?.into());
    env.insert("payload".into(), report.payload.clone());
    Ok(Value::Object(env))
}

pub fn sig17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0.0" } else { "0.0" }.into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..17).contains(&exp) {
        return format!("{mantissa}e{exp}");
    }
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    if exp >= 0 {
        let (int, frac) = digits.split_at(exp as usize + 1);
        let frac = if frac.is_empty() { "0" } else { frac };
        format!("{sign}{int}.{frac}")
    } else {
        format!("{sign}0.{}{digits}", "0".repeat((-exp - 1) as usize))
    }
}

fn number(n: &Number) -> String {
    match n.as_f64() {
        Some(f) if !(n.is_i64() || n.is_u64()) => sig17(f),
        _ => n.to_string(),
    }
}

fn write_json(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent + 1);
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => out.push_str(&number(n)),
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad);
                write_json(item, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{}]", "  ".repeat(indent));
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                let _ = write!(out, "{pad}{}: ", Value::String(k.clone()));
                write_json(item, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{}}}", "  ".repeat(indent));
        }
    }
}

pub fn to_json_string(v: &Value) -> String {
    let mut out = String::new();
    write_json(v, 0, &mut out);
    out
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => number(n),
        Value::String(s) => s.clone(),
        other => {
            let mut s = String::new();
            write_json(other, 0, &mut s);
            s.split_whitespace().collect::<Vec<_>>().join(" ")
        }
    }
}

/// Dotted-path flattening; scalar arrays are joined with `;`.
fn flatten(prefix: &str, v: &Value, skip: Option<&str>, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, item) in map {
                if prefix.is_empty() && Some(k.as_str()) == skip {
                    continue;
                }
                flatten(&key(k), item, None, out);
            }
        }
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => {
            out.push((prefix.to_string(), items.iter().map(cell).collect::<Vec<_>>().join(";")));
        }
        other => out.push((prefix.to_string(), cell(other))),
    }
}

fn table_rows(report: &Report) -> Option<Vec<Vec<(String, String)>>> {
    let rows = report.payload.get(report.table?)?.as_array()?;
    if rows.is_empty() {
        return None;
    }
    Some(
        rows.iter()
            .map(|r| {
                let mut flat = Vec::new();
                flatten("", r, None, &mut flat);
                flat
            })
            .collect(),
    )
}

fn summary(report: &Report, skip_table: bool) -> Vec<(String, String)> {
    let mut flat = Vec::new();
    let skip = if skip_table { report.table } else { None };
    flatten("", &report.payload, skip, &mut flat);
    flat
}

pub fn render(report: &Report, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => {
            let mut s = to_json_string(&envelope(report)?);
            s.push('\n');
            Ok(s)
        }
        OutputFormat::Csv => {
            let rows = table_rows(report).unwrap_or_else(|| vec![summary(report, true)]);
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(rows[0].iter().map(|(k, _)| k))?;
            for row in &rows {
                w.write_record(row.iter().map(|(_, v)| v))?;
            }
            Ok(String::from_utf8(w.into_inner()?)?)
        }
        OutputFormat::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "{}", report.command);
            let rows = table_rows(report);
            for (k, v) in summary(report, rows.is_some()) {
                let _ = writeln!(s, "  {k}: {v}");
            }
            if let Some(rows) = rows {
                s.push('\n');
                let header: Vec<_> = rows[0].iter().map(|(k, _)| k.as_str()).collect();
                let _ = writeln!(s, "{}", header.join("\t"));
                for row in &rows {
                    let cells: Vec<_> = row.iter().map(|(_, v)| v.as_str()).collect();
                    let _ = writeln!(s, "{}", cells.join("\t"));
                }
            }
            Ok(s)
        }
    }
}

pub fn emit(report: &Report, format: OutputFormat) -> Result<()> {
    let text = render(report, format)?;
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(text.as_bytes())?;
    stdout.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, -4.0, 6.0, 1200.0, 1e-7, 123456.789, 9.865876450376735e-10, 1e300, f64::MIN_POSITIVE] {
            let s = sig17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
            let digits = s
                .split('e')
                .next()
                .unwrap()
                .chars()
                .filter(char::is_ascii_digit)
                .collect::<String>();
            assert!(digits.trim_start_matches('0').len() >= 17, "{s}");
        }
        assert_eq!(sig17(-4.0), "-4.0000000000000000");
        assert_eq!(sig17(0.1), "0.10000000000000001");
        assert_eq!(sig17(0.0), "0.0");
    }

    #[test]
    fn nested_values_flatten() {
        let v = serde_json::json!({"a": 1.5, "b": {"c": true, "d": [1, 2]}, "e": null});
        let mut flat = Vec::new();
        flatten("", &v, None, &mut flat);
        let keys: Vec<_> = flat.iter().map(|(k, _)| k.as_str()).collect();
        assert_eq!(keys, ["a", "b.c", "b.d", "e"]);
        assert_eq!(flat[2].1, "1;2");
        assert_eq!(flat[3].1, "");
    }
}

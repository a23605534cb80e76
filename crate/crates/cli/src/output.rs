use serde::Serialize;
use serde_json::json;

use crate::experiment::{CheckReport, Sweep};

/// A metadata value that renders as itself in JSON and as a `key: value`
/// comment line in CSV.
pub enum MetaValue {
    Str(String),
    Int(u64),
    Float(f64),
}

/// Shortest round-trip float formatting with an explicit exponent;
/// deterministic for identical inputs.
fn fmt_float(x: f64) -> String {
    format!("{x:e}")
}

impl MetaValue {
    fn as_text(&self) -> String {
        match self {
            MetaValue::Str(s) => s.clone(),
            MetaValue::Int(i) => i.to_string(),
            MetaValue::Float(x) => fmt_float(*x),
        }
    }

    fn as_json(&self) -> serde_json::Value {
        match self {
            MetaValue::Str(s) => json!(s),
            MetaValue::Int(i) => json!(i),
            MetaValue::Float(x) => json!(x),
        }
    }
}

pub fn render_csv(sweep: &Sweep) -> String {
    let mut out = String::new();
    for (key, value) in &sweep.meta {
        out.push_str(&format!("# {key}: {}\n", value.as_text()));
    }
    out.push_str("# columns: l,closed_form_probability,oracle_probability,abs_difference\n");
    for row in &sweep.rows {
        match row.oracle {
            Some(oracle) => out.push_str(&format!(
                "{},{},{},{}\n",
                row.l,
                fmt_float(row.closed),
                fmt_float(oracle),
                fmt_float((row.closed - oracle).abs())
            )),
            None => out.push_str(&format!("{},{},,\n", row.l, fmt_float(row.closed))),
        }
    }
    out
}

#[derive(Serialize)]
struct JsonRow {
    l: u64,
    closed_form_probability: f64,
    oracle_probability: Option<f64>,
    abs_difference: Option<f64>,
}

pub fn render_json(sweep: &Sweep) -> String {
    let meta: serde_json::Map<String, serde_json::Value> = sweep
        .meta
        .iter()
        .map(|(k, v)| (k.clone(), v.as_json()))
        .collect();
    let rows: Vec<JsonRow> = sweep
        .rows
        .iter()
        .map(|r| JsonRow {
            l: r.l,
            closed_form_probability: r.closed,
            oracle_probability: r.oracle,
            abs_difference: r.oracle.map(|o| (r.closed - o).abs()),
        })
        .collect();
    let doc = json!({ "meta": meta, "rows": rows });
    let mut text = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    text.push('\n');
    text
}

pub fn render_check_report(report: &CheckReport) -> String {
    let mut out = String::new();
    for (key, value) in &report.meta {
        out.push_str(&format!("# {key}: {}\n", value.as_text()));
    }
    for check in &report.checks {
        out.push_str(&format!(
            "check {}: value {} vs limit {} ... {}\n",
            check.name,
            fmt_float(check.value),
            fmt_float(check.limit),
            if check.pass { "PASS" } else { "FAIL" }
        ));
    }
    out.push_str(&format!(
        "overall: {}\n",
        if report.all_pass() { "PASS" } else { "FAIL" }
    ));
    out
}

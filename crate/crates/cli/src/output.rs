use serde::Serialize;
use serde_json::{json, Value};

use crate::args::Format;

/// A command result before serialization.
pub struct Report {
    pub config: Value,
    pub results: Value,
    pub summary: Value,
    pub text: String,
    /// Header and rows for `--format csv`, when the command has a tabular form.
    pub csv: Option<(Vec<String>, Vec<Vec<String>>)>,
    /// Preformatted CSV that must be emitted verbatim.
    pub raw_csv: Option<String>,
}

impl Report {
    pub fn new(config: Value, results: Value, summary: Value, text: String) -> Self {
        Report {
            config,
            results,
            summary,
            text,
            csv: None,
            raw_csv: None,
        }
    }
}

pub fn to_value(v: &impl Serialize) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

/// Canonical JSON: keys sorted at every level, integers only, one trailing
/// newline.
pub fn canonical_json(report: &Report) -> String {
    let envelope = json!({
        "config": report.config,
        "results": report.results,
        "summary": report.summary,
        "version": env!("CARGO_PKG_VERSION"),
    });
    let mut s = serde_json::to_string_pretty(&envelope).expect("values serialize");
    s.push('\n');
    s
}

pub fn render(report: &Report, format: Format) -> Result<String, String> {
    match format {
        Format::Json => Ok(canonical_json(report)),
        Format::Text => Ok(report.text.clone()),
        Format::Csv => {
            if let Some(raw) = &report.raw_csv {
                return Ok(raw.clone());
            }
            let (header, rows) = report.csv.as_ref().ok_or("csv output is not available for this command")?;
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
            w.write_record(header).map_err(|e| e.to_string())?;
            for r in rows {
                w.write_record(r).map_err(|e| e.to_string())?;
            }
            String::from_utf8(w.into_inner().map_err(|e| e.to_string())?).map_err(|e| e.to_string())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_are_sorted_and_reparse() {
        let r = Report::new(json!({"z": 1, "a": {"y": 2, "b": 3}}), json!([]), json!({}), String::new());
        let s = canonical_json(&r);
        let a = s.find("\"a\"").unwrap();
        let z = s.find("\"z\"").unwrap();
        assert!(a < z);
        assert!(s.find("\"b\"").unwrap() < s.find("\"y\"").unwrap());
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["config"]["a"]["y"], 2);
        assert_eq!(v["results"], json!([]));
    }

    #[test]
    fn csv_needs_a_table() {
        let r = Report::new(json!({}), json!({}), json!({}), String::new());
        assert!(render(&r, Format::Csv).is_err());
    }
}

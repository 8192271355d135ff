//! CSV and JSON encodings of experiment reports.
//!
//! Floating-point fields are written with 17 significant digits in both
//! encodings, so a value read back from either is bit-identical to the one
//! computed. Non-finite values become empty CSV fields and JSON `null`.

use std::io::{self, Write};

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::experiment::{Format, Report, ReportRow};

/// Columns shared by every experiment.
pub const BASE_COLUMNS: [&str; 8] = [
    "experiment",
    "N",
    "n",
    "k_or_t_or_x",
    "measured",
    "reference",
    "slack",
    "pass",
];

/// `1.2345678901234567e0`; empty for NaN and infinities.
pub fn format_number(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        String::new()
    }
}

fn raw_number(v: f64) -> Option<Box<RawValue>> {
    v.is_finite()
        .then(|| RawValue::from_string(format_number(v)).expect("numeric literal is valid JSON"))
}

pub fn csv_header(report: &Report) -> Vec<&'static str> {
    let mut cols = BASE_COLUMNS.to_vec();
    cols.extend_from_slice(report.experiment.extra_columns());
    cols
}

fn csv_fields(row: &ReportRow) -> Vec<String> {
    let mut fields = vec![
        row.experiment.name().to_string(),
        row.dim.to_string(),
        row.n.map(|n| n.to_string()).unwrap_or_default(),
        row.param.map(format_number).unwrap_or_default(),
        format_number(row.measured),
        format_number(row.reference),
        format_number(row.slack),
        row.pass.to_string(),
    ];
    fields.extend(row.extras.iter().map(|&v| format_number(v)));
    fields
}

pub fn write_csv<W: Write>(report: &Report, mut out: W) -> io::Result<()> {
    writeln!(out, "{}", csv_header(report).join(","))?;
    for row in &report.rows {
        writeln!(out, "{}", csv_fields(row).join(","))?;
    }
    Ok(())
}

struct JsonRow<'a>(&'a ReportRow);

impl Serialize for JsonRow<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let row = self.0;
        let extras = row.experiment.extra_columns();
        let mut map = serializer.serialize_map(Some(BASE_COLUMNS.len() + extras.len()))?;
        map.serialize_entry("experiment", row.experiment.name())?;
        map.serialize_entry("N", &row.dim)?;
        map.serialize_entry("n", &row.n)?;
        map.serialize_entry("k_or_t_or_x", &row.param.and_then(raw_number))?;
        map.serialize_entry("measured", &raw_number(row.measured))?;
        map.serialize_entry("reference", &raw_number(row.reference))?;
        map.serialize_entry("slack", &raw_number(row.slack))?;
        map.serialize_entry("pass", &row.pass)?;
        for (name, &v) in extras.iter().zip(&row.extras) {
            map.serialize_entry(name, &raw_number(v))?;
        }
        map.end()
    }
}

struct JsonRows<'a>(Vec<&'a ReportRow>);

impl Serialize for JsonRows<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for row in &self.0 {
            seq.serialize_element(&JsonRow(row))?;
        }
        seq.end()
    }
}

pub fn write_json<W: Write>(report: &Report, mut out: W) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut out, &JsonRows(report.rows.iter().collect()))?;
    writeln!(out)
}

pub fn write_report<W: Write>(report: &Report, format: Format, out: W) -> io::Result<()> {
    match format {
        Format::Csv => write_csv(report, out),
        Format::Json => write_json(report, out),
    }
}

/// One-line JSON summary of the failing rows.
pub fn failure_summary(report: &Report) -> String {
    #[derive(Serialize)]
    struct Summary<'a> {
        experiment: &'static str,
        failed: usize,
        total: usize,
        rows: JsonRows<'a>,
    }
    let summary = Summary {
        experiment: report.experiment.name(),
        failed: report.failures().count(),
        total: report.rows.len(),
        rows: JsonRows(report.failures().collect()),
    };
    serde_json::to_string(&summary).expect("report rows serialize")
}

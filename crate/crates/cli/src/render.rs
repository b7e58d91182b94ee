//! Serialization helpers shared by the commands.

use std::io::Write;

use elastica::expmap::State;
use serde_json::{Map, Value};

use crate::error::Result;

/// JSON number, or the string `"inf"` / `"-inf"` for infinities.
pub fn num(x: f64) -> Value {
    if x.is_infinite() {
        Value::String(if x > 0.0 { "inf" } else { "-inf" }.into())
    } else {
        Value::from(x)
    }
}

/// CSV cell for a float, with the same spelling of infinities as JSON.
pub fn cell(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        x.to_string()
    }
}

pub fn write_json(out: &mut dyn Write, value: &Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

/// A header plus rows of string cells.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Array of objects keyed by the header. Cells that parse as numbers are
    /// emitted as numbers.
    pub fn to_json(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .header
                    .iter()
                    .zip(row)
                    .map(|(h, v)| (h.to_string(), json_cell(v)))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        Value::Array(rows)
    }
}

fn json_cell(v: &str) -> Value {
    match v {
        "true" => Value::Bool(true),
        "false" => Value::Bool(false),
        "inf" | "-inf" => Value::String(v.into()),
        _ => v.parse::<f64>().map(Value::from).unwrap_or_else(|_| Value::String(v.into())),
    }
}

pub const VIEW: f64 = 1000.0;
pub const MARGIN: f64 = 0.05;
pub const STROKE: f64 = 0.002;

/// Polyline as a standalone SVG document. The curve is fitted into a
/// square viewBox with equal scales on both axes, y pointing up.
pub fn svg(points: &[State], title: &str) -> String {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in points {
        x0 = x0.min(p.x);
        x1 = x1.max(p.x);
        y0 = y0.min(p.y);
        y1 = y1.max(p.y);
    }
    let side = (x1 - x0).max(y1 - y0).max(1e-12);
    let scale = VIEW * (1.0 - 2.0 * MARGIN) / side;
    let (cx, cy) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
    let map = |p: &State| (0.5 * VIEW + (p.x - cx) * scale, 0.5 * VIEW - (p.y - cy) * scale);

    let mut d = String::with_capacity(points.len() * 20);
    for (i, p) in points.iter().enumerate() {
        let (u, v) = map(p);
        d.push_str(if i == 0 { "M" } else { " L" });
        d.push_str(&format!("{u:.3} {v:.3}"));
    }
    format!(
        concat!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n",
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 {view} {view}\">\n",
            "  <title>{title}</title>\n",
            "  <path d=\"{d}\" fill=\"none\" stroke=\"black\" stroke-width=\"{stroke}\" stroke-linejoin=\"round\"/>\n",
            "</svg>\n"
        ),
        view = VIEW,
        title = escape(title),
        d = d,
        stroke = VIEW * STROKE,
    )
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use clap::ValueEnum;

use crate::runner::{ResultTable, Row};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// 12 significant digits.
fn number(x: f64) -> String {
    format!("{x:.11e}")
}

fn cells(row: &Row, columns: &[&str]) -> Vec<String> {
    columns
        .iter()
        .map(|&c| {
            let v = match c {
                "t" => Some(row.t),
                "re_a" => Some(row.re_a),
                "im_a" => Some(row.im_a),
                "abs_a" => Some(row.abs_a),
                "purity" => row.purity,
                "coherence" => row.coherence,
                "negativity" => row.negativity,
                _ => None,
            };
            v.map(number).unwrap_or_default()
        })
        .collect()
}

pub fn to_csv(table: &ResultTable) -> String {
    let columns = table.columns();
    let mut out = columns.join(",");
    out.push('\n');
    for row in &table.rows {
        out.push_str(&cells(row, &columns).join(","));
        out.push('\n');
    }
    out
}

pub fn to_json(table: &ResultTable) -> String {
    let mut s = serde_json::to_string_pretty(table).expect("result tables always serialize");
    s.push('\n');
    s
}

pub fn render(table: &ResultTable, format: Format) -> String {
    match format {
        Format::Csv => to_csv(table),
        Format::Json => to_json(table),
    }
}

/// Writes to `destination`, or to standard output when it is `None`.
pub fn emit(table: &ResultTable, format: Format, destination: Option<&Path>) -> io::Result<()> {
    let text = render(table, format);
    match destination {
        Some(path) => fs::write(path, text),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

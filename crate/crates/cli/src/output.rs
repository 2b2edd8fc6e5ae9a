use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use randfib::Rational;
use serde_json::{Map, Value as Json};

pub const CSV_VERSION: &str = "randfib-csv v1";
pub const JSON_VERSION: &str = "randfib-json v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Rows of one command's result with a fixed column order.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Json>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Json>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

fn csv_cell(v: &Json) -> String {
    let raw = match v {
        Json::Null => String::new(),
        Json::String(s) => s.clone(),
        other => other.to_string(),
    };
    if raw.contains([',', '"', '\n']) {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw
    }
}

pub fn render(table: &Table, format: Format, command: &str, config: &Json) -> String {
    match format {
        Format::Csv => {
            let mut out = format!("# {CSV_VERSION}, command={command}, config={config}\n");
            out.push_str(&table.columns.join(","));
            out.push('\n');
            for row in &table.rows {
                let cells: Vec<String> = row.iter().map(csv_cell).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let rows: Vec<Json> = table
                .rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Json> = table
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(k, v)| (k.to_string(), v.clone()))
                        .collect();
                    Json::Object(obj)
                })
                .collect();
            let doc = serde_json::json!({
                "format": JSON_VERSION,
                "command": command,
                "config": config,
                "rows": rows,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("json values always serialize");
            s.push('\n');
            s
        }
    }
}

pub fn write_output(text: &str, path: Option<&Path>) -> io::Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            w.write_all(text.as_bytes())?;
            w.flush()
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())?;
            lock.flush()
        }
    }
}

/// Exact decimal when the denominator divides a power of ten, `p/q` otherwise.
pub fn exact(r: &Rational) -> String {
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut d = r.denom().clone();
    let (mut k2, mut k5) = (0usize, 0usize);
    while (&d % &two).is_zero() {
        d /= &two;
        k2 += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        k5 += 1;
    }
    if !d.is_one() {
        return r.to_string();
    }
    let scale = k2.max(k5);
    if scale == 0 {
        return r.numer().to_string();
    }
    let ten_pow = num_traits::pow(BigInt::from(10), scale);
    let scaled = r.numer().abs() * &ten_pow / r.denom();
    let digits = format!("{:0>width$}", scaled.to_string(), width = scale + 1);
    let (int_part, frac_part) = digits.split_at(digits.len() - scale);
    let sign = if r.is_negative() { "-" } else { "" };
    format!("{sign}{int_part}.{frac_part}")
}

// Copyright 2026 Cryotwin Contributors
// SPDX-License-Identifier: Apache-2.0

//! Result tables and summaries. Floats are written in their shortest
//! round-tripping form so a rerun reproduces files byte for byte.

use std::fmt::Write as _;

use serde::Serialize;

/// Version of the CSV layout.
pub const CSV_SCHEMA: &str = "cryotwin-csv v1";
/// Version of the JSON summary layout.
pub const SUMMARY_SCHEMA: u32 = 1;
pub const TABLE_SCHEMA: &str = "cryotwin-table v1";

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

fn write_cell(out: &mut String, c: &Cell) {
    let _ = match c {
        Cell::Num(v) => write!(out, "{v:?}"),
        Cell::Int(v) => write!(out, "{v}"),
        Cell::Text(s) if s.contains([',', '"', '\n']) => write!(out, "\"{}\"", s.replace('"', "\"\"")),
        Cell::Text(s) => write!(out, "{s}"),
    };
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// CSV with a leading `#` line naming the layout version, kind and seed.
    pub fn to_csv(&self, kind: &str, seed: u64) -> String {
        let mut out = format!("# {CSV_SCHEMA} kind={kind} seed={seed}\n");
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            for (i, c) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_cell(&mut out, c);
            }
            out.push('\n');
        }
        out
    }

    /// The same rows as JSON arrays under a versioned header.
    pub fn to_json(&self, kind: &str, seed: u64) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            schema: &'a str,
            kind: &'a str,
            seed: u64,
            #[serde(flatten)]
            table: &'a Table,
        }
        to_json(&Doc { schema: TABLE_SCHEMA, kind, seed, table: self })
    }
}

/// JSON summary envelope around experiment-specific results.
#[derive(Debug, Clone, Serialize)]
pub struct Summary<T: Serialize> {
    pub schema: u32,
    pub kind: String,
    pub seed: u64,
    pub shots: u32,
    pub result: T,
}

impl<T: Serialize> Summary<T> {
    pub fn new(kind: &str, seed: u64, shots: u32, result: T) -> Self {
        Self { schema: SUMMARY_SCHEMA, kind: kind.to_string(), seed, shots, result }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("result types serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["x", "label", "p"]);
        t.push(vec![0.1.into(), "a,b".into(), 1e-7.into()]);
        t.push(vec![2usize.into(), "XY".into(), 0.5.into()]);
        assert_eq!(t.to_csv("allxy", 3), "# cryotwin-csv v1 kind=allxy seed=3\nx,label,p\n0.1,\"a,b\",1e-7\n2,XY,0.5\n");
        let v: serde_json::Value = serde_json::from_str(&t.to_json("allxy", 3)).unwrap();
        assert_eq!(v["schema"], TABLE_SCHEMA);
        assert_eq!(v["columns"][1], "label");
        assert_eq!(v["rows"][0], serde_json::json!([0.1, "a,b", 1e-7]));
        assert_eq!(v["rows"][1][0], 2);
    }
}

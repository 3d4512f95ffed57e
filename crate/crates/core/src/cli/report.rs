use std::fmt::Write as _;

use crate::logic::Status;

pub const REPORT_FORMAT: &str = "coarse-report/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FAILS: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

/// Result of one `run.<label>` command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub label: String,
    pub command: &'static str,
    pub status: Status,
    /// `(R, W)`: largest scale and window the result was computed at.
    pub stamp: (u64, u64),
    /// One-line human summary.
    pub summary: String,
    /// Flat fields, keyed without the label prefix.
    pub fields: Vec<(String, String)>,
}

impl Entry {
    pub fn field(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub space: String,
    pub window: u64,
    pub seed: u64,
    pub entries: Vec<Entry>,
}

impl Report {
    pub fn entry(&self, label: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.label == label)
    }

    /// Worst status over all commands.
    pub fn status(&self) -> Status {
        self.entries.iter().fold(Status::Holds, |s, e| s.combine(e.status))
    }

    pub fn exit_code(&self) -> i32 {
        match self.status() {
            Status::Holds => EXIT_OK,
            Status::Fails => EXIT_FAILS,
            Status::Inconclusive => EXIT_INCONCLUSIVE,
        }
    }

    /// Human-readable table.
    pub fn table(&self) -> String {
        let header = ["#", "label", "command", "status", "R", "W", "result"];
        let rows: Vec<[String; 7]> = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, e)| {
                [
                    (i + 1).to_string(),
                    e.label.clone(),
                    e.command.to_string(),
                    e.status.to_string(),
                    e.stamp.0.to_string(),
                    e.stamp.1.to_string(),
                    e.summary.clone(),
                ]
            })
            .collect();
        let mut width = header.map(str::len);
        for row in &rows {
            for (w, cell) in width.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let mut out = String::new();
        let _ = writeln!(out, "{REPORT_FORMAT}  space {}  window {}  seed {}", self.space, self.window, self.seed);
        let mut line = |cells: Vec<&str>| {
            let mut s = String::new();
            for (i, (cell, w)) in cells.iter().zip(width).enumerate() {
                if i + 1 == cells.len() {
                    s.push_str(cell);
                } else {
                    let _ = write!(s, "{cell:<w$}  ");
                }
            }
            out.push_str(s.trim_end());
            out.push('\n');
        };
        line(header.to_vec());
        for row in &rows {
            line(row.iter().map(String::as_str).collect());
        }
        let _ = writeln!(out, "overall: {}", self.status());
        out
    }

    /// Flat `key = value` block.
    pub fn key_values(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "format = {REPORT_FORMAT}");
        let _ = writeln!(out, "space = {}", self.space);
        let _ = writeln!(out, "window = {}", self.window);
        let _ = writeln!(out, "seed = {}", self.seed);
        let _ = writeln!(out, "status = {}", self.status());
        let labels: Vec<&str> = self.entries.iter().map(|e| e.label.as_str()).collect();
        let _ = writeln!(out, "commands = {}", labels.join(","));
        for e in &self.entries {
            let _ = writeln!(out, "{}.command = {}", e.label, e.command);
            let _ = writeln!(out, "{}.status = {}", e.label, e.status);
            for (k, v) in &e.fields {
                let _ = writeln!(out, "{}.{k} = {v}", e.label);
            }
        }
        out
    }
}

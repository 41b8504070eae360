use std::fmt;

use serde::Serialize;

/// One result line; `--json` prints it as a JSON object.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Record {
    pub family: String,
    pub n: usize,
    pub m: usize,
    pub mode: String,
    pub length: usize,
    pub bound: usize,
    pub pass: bool,
}

impl Record {
    pub fn render(&self, json: bool) -> String {
        if json {
            serde_json::to_string(self).expect("record serializes")
        } else {
            self.to_string()
        }
    }
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "family={} n={} m={} mode={} length={} bound={} pass={}",
            self.family, self.n, self.m, self.mode, self.length, self.bound, self.pass
        )
    }
}

pub fn general_bound(n: usize) -> usize {
    (13 * n / 3).saturating_sub(4)
}

pub fn terse_bound(n: usize) -> usize {
    2 * n
}

pub fn constmem_bound(n: usize) -> usize {
    (7 * n / 2).saturating_sub(2)
}

//! Text serialization of Latin-square keys.
//!
//! ```text
//! SEBQ-LSQ v1
//! 4
//! 0 1 2 3
//! 1 0 3 2
//! 2 3 0 1
//! 3 2 1 0
//! ```

use std::fmt::Write as _;

use super::LatinSquare;
use crate::error::{Error, Result};

pub const KEY_FILE_HEADER: &str = "SEBQ-LSQ v1";

/// Canonical key-file text: header, order, one space-separated row per line,
/// each line terminated by `\n`.
pub fn write_key_file(square: &LatinSquare) -> String {
    let n = square.order();
    let mut out = String::with_capacity(16 + n * n * 4);
    out.push_str(KEY_FILE_HEADER);
    out.push('\n');
    let _ = writeln!(out, "{n}");
    for r in 0..n {
        let row = square.row(r);
        for (c, s) in row.iter().enumerate() {
            if c > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{s}");
        }
        out.push('\n');
    }
    out
}

pub fn parse_key_file(text: &str) -> Result<LatinSquare> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim_end() == KEY_FILE_HEADER => {}
        _ => return Err(Error::KeyFile(format!("missing header {KEY_FILE_HEADER:?}"))),
    }
    let n: usize = lines
        .next()
        .and_then(|l| l.trim().parse().ok())
        .ok_or_else(|| Error::KeyFile("missing or invalid order line".into()))?;
    let mut rows = Vec::with_capacity(n);
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::KeyFile(format!("row {i}: {e}")))?;
        rows.push(row);
    }
    if rows.len() != n {
        return Err(Error::KeyFile(format!(
            "declared order {n} but found {} rows",
            rows.len()
        )));
    }
    LatinSquare::from_rows(&rows)
}

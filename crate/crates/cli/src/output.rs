use std::fmt::Display;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::CliResult;

pub const CSV_HEADER: &str = "m,n,t,value,extra";

/// Writes `body` to `path`, or to `out` when no path is given.
pub fn emit(out: &mut dyn Write, path: Option<&Path>, body: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, body)?,
        None => out.write_all(body.as_bytes())?,
    }
    Ok(())
}

pub fn json<T: Serialize>(v: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

/// One `m,n,t,value,extra` row.
pub fn csv_row(s: &mut String, m: i64, n: i64, t: f64, value: impl Display, extra: impl Display) {
    use std::fmt::Write as _;
    let _ = writeln!(s, "{m},{n},{t},{value},{extra}");
}

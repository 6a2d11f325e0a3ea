use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use triality::io::{csv_line, format_f64, to_json_string};

use crate::error::{CliError, CliResult};

pub fn wants_csv(out: Option<&Path>) -> bool {
    out.and_then(Path::extension)
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

/// Writes `json` (or the lazily built CSV when `out` ends in `.csv`) to `out` or stdout.
pub fn emit<T, F>(out: Option<&Path>, json: &T, csv: F) -> CliResult<()>
where
    T: Serialize + ?Sized,
    F: FnOnce() -> String,
{
    let text = if wants_csv(out) {
        csv()
    } else {
        to_json_string(json).map_err(|e| CliError::Output(e.to_string()))?
    };
    write_text(out, &text)
}

pub fn write_text(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Output(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Output(format!("stdout: {e}")))
        }
    }
}

/// A CSV table with a header row.
pub struct Table {
    text: String,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            text: csv_line(&header.iter().map(|h| h.to_string()).collect::<Vec<_>>()),
        }
    }

    pub fn row(&mut self, fields: Vec<String>) {
        self.text.push_str(&csv_line(&fields));
    }

    pub fn finish(self) -> String {
        self.text
    }
}

pub fn num(x: f64) -> String {
    if x.is_finite() {
        format_f64(x)
    } else {
        String::new()
    }
}

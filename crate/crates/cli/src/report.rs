//! Run reports and their CSV rendering.
//!
//! The CSV starts with a `#` header block (config echo, timing, tolerances,
//! warnings). Everything from the column line on is the body, which depends
//! only on the config and seed.

use serde::Serialize;
use serde_json::Value;

use triconfig::io::fmt_f64;

#[derive(Debug, Clone, Default, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Deterministic `key value` lines emitted after the rows.
    pub summary: Vec<(String, String)>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), ..Table::default() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.summary.push((key.to_string(), value.to_string()));
    }

    pub fn note_f(&mut self, key: &str, value: f64) {
        self.note(key, fmt_f64(value));
    }

    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let c = self.columns.iter().position(|x| x == name)?;
        Some(self.rows.iter().map(|r| r[c].as_str()).collect())
    }

    pub fn summary_value(&self, key: &str) -> Option<&str> {
        self.summary.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub version: String,
    pub seed: u64,
    pub config: Value,
    pub threads: usize,
    pub parallel: bool,
    pub elapsed_seconds: f64,
    pub warnings: Vec<String>,
    pub tolerances: Vec<(String, f64)>,
    /// False when the command ran but its own checks failed (selftest).
    pub ok: bool,
    pub table: Table,
}

impl RunReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("# triconfig {} {}\n", self.version, self.command));
        s.push_str(&format!("# seed {}\n", self.seed));
        s.push_str(&format!("# config {}\n", self.config));
        s.push_str(&format!("# threads {} parallel {}\n", self.threads, self.parallel));
        s.push_str(&format!("# elapsed_seconds {:.6}\n", self.elapsed_seconds));
        for (k, v) in &self.tolerances {
            s.push_str(&format!("# tolerance {k} {v:e}\n"));
        }
        for w in &self.warnings {
            s.push_str(&format!("# warning {w}\n"));
        }
        s.push_str(&self.body());
        s
    }

    pub fn body(&self) -> String {
        let t = &self.table;
        let mut s = t.columns.join(",");
        s.push('\n');
        for r in &t.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        for (k, v) in &t.summary {
            s.push_str(&format!("#= {k} {v}\n"));
        }
        s
    }
}

/// Everything from the first line that does not start with `#`.
pub fn csv_body(text: &str) -> &str {
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        if !line.starts_with('#') {
            return &text[offset..];
        }
        offset += line.len();
    }
    ""
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn body_excludes_header_only() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["1".into(), "2".into()]);
        t.note("slope", 3);
        let r = RunReport {
            command: "x".into(),
            version: "0".into(),
            seed: 1,
            config: Value::Null,
            threads: 1,
            parallel: false,
            elapsed_seconds: 0.5,
            warnings: vec!["w".into()],
            tolerances: vec![("T".into(), 1e-8)],
            ok: true,
            table: t,
        };
        let csv = r.to_csv();
        assert_eq!(csv_body(&csv), "a,b\n1,2\n#= slope 3\n");
        assert_eq!(r.body(), csv_body(&csv));
        assert!(csv.contains("# tolerance T 1e-8\n"));
    }
}

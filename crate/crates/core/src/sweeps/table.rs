use std::io::Write;

use serde::Serialize;

use super::config::RunConfig;
use crate::error::{Error, Result};

/// Rectangular numeric table with an ordered `key: value` metadata block.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub metadata: Vec<(String, String)>,
}

impl ResultTable {
    /// Empty table whose metadata opens with the crate version, command and
    /// full config.
    pub fn new(cfg: &RunConfig, columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            metadata: vec![
                ("optomech".into(), env!("CARGO_PKG_VERSION").into()),
                ("command".into(), cfg.command.as_str().into()),
                ("config".into(), cfg.to_json_line()),
                (
                    "frequency_interpretation".into(),
                    "omega_* are angular frequencies in rad/s; kappa_per_s is an energy decay rate in 1/s; \
                     scaled time is omega_m * t"
                        .into(),
                ),
            ],
        }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<String>) {
        self.metadata.push((key.into(), value.into()));
    }

    pub fn push(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::Validation(format!(
                "row has {} entries, table has {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn metadata_value(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// `# key: value` lines, then an RFC 4180 header and rows. Floats use the
    /// shortest representation that round-trips.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        for (k, v) in &self.metadata {
            write!(out, "# {k}: {}\r\n", v.replace(['\r', '\n'], " "))?;
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|x| format!("{x:?}")))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweeps::config::Command;

    #[test]
    fn writes_metadata_then_csv() {
        let cfg = RunConfig::defaults(Command::Fig2);
        let mut t = ResultTable::new(&cfg, &["t", "value, quoted"]);
        t.push(vec![0.0, 0.1]).unwrap();
        t.push(vec![1.5, -2e-300]).unwrap();
        assert!(t.push(vec![1.0]).is_err());
        let s = t.to_csv_string().unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert!(lines[0].starts_with("# optomech: "));
        assert!(s.ends_with("\r\n") && s.matches("\r\n").count() == lines.len());
        assert_eq!(lines[4], "t,\"value, quoted\"");
        assert_eq!(lines[6], "1.5,-2e-300");
        assert_eq!(RunConfig::from_metadata(&s).unwrap(), cfg);
        assert_eq!(t.column("t").unwrap(), vec![0.0, 1.5]);
    }
}

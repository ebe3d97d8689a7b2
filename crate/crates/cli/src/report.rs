//! The JSON master report and its CSV / plot side files.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::args::Format;

/// A tabular section, written as `<name>.csv`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Table { name: name.into(), header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push<I, S>(&mut self, row: I)
    where
        I: IntoIterator<Item = S>,
        S: ToString,
    {
        self.rows.push(row.into_iter().map(|c| c.to_string()).collect());
    }
}

/// Two-column `(n, value)` series for plotting, written as `plot_<name>.csv`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Plot {
    pub name: String,
    pub points: Vec<(i64, i64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Echo of the effective configuration.
    pub config: Value,
    pub group: String,
    /// Command results; exact rationals are `"p/q"` strings.
    pub data: Value,
    /// Side files, listed by name; their contents only go to `--out`.
    pub files: Vec<String>,
    pub wall_time_ms: u64,
    pub peak_elements: usize,
    #[serde(skip)]
    pub tables: Vec<Table>,
    #[serde(skip)]
    pub plots: Vec<Plot>,
}

impl Report {
    pub fn new(command: &str, config: Value, group: String) -> Self {
        Report {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config,
            group,
            data: Value::Null,
            files: Vec::new(),
            wall_time_ms: 0,
            peak_elements: 0,
            tables: Vec::new(),
            plots: Vec::new(),
        }
    }

    fn side_files(&self) -> Vec<String> {
        let t = self.tables.iter().map(|t| format!("{}.csv", t.name));
        let p = self.plots.iter().map(|p| format!("plot_{}.csv", p.name));
        t.chain(p).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Report> {
        serde_json::from_str(text)
    }
}

fn write_csv(path: &Path, header: &[String], rows: impl Iterator<Item = Vec<String>>) -> io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()
}

/// Writes the requested formats into `out`, or the JSON report to stdout.
/// Returns the files written.
pub fn emit(report: &mut Report, out: Option<&Path>, formats: &[Format]) -> io::Result<Vec<PathBuf>> {
    let csv = formats.contains(&Format::Csv);
    if csv {
        report.files = report.side_files();
    }
    let Some(dir) = out else {
        println!("{}", report.to_json());
        return Ok(Vec::new());
    };
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    if csv {
        for t in &report.tables {
            let path = dir.join(format!("{}.csv", t.name));
            write_csv(&path, &t.header, t.rows.iter().cloned())?;
            written.push(path);
        }
        for p in &report.plots {
            let path = dir.join(format!("plot_{}.csv", p.name));
            let header = ["n".to_string(), "value".to_string()];
            write_csv(&path, &header, p.points.iter().map(|(n, v)| vec![n.to_string(), v.to_string()]))?;
            written.push(path);
        }
    }
    if formats.contains(&Format::Json) {
        let path = dir.join("report.json");
        fs::write(&path, report.to_json() + "\n")?;
        written.push(path);
    }
    Ok(written)
}

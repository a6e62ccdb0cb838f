//! Delimited-text ingestion.
//!
//! The dialect is comma separated, UTF-8, `.` as decimal point and a header row. A
//! non-numeric first column is taken as the row labels unless told otherwise.

use std::fs::File;
use std::io::Read;
use std::path::{Path, PathBuf};

use depthkit::DataCloud;

use crate::error::{CliError, CliResult};

/// The Table 1 fixture: debt and unemployment (% of GDP, %) of the EU-27 countries, 2011.
pub const EU27_CSV: &str = include_str!("../data/eu27.csv");

/// `--data` value that selects the bundled EU-27 fixture.
pub const EU27_NAME: &str = "@eu27";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumn {
    /// The first column, if its first value is not a number.
    Auto,
    None,
    /// Zero-based column index.
    Index(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadOptions {
    pub delimiter: u8,
    pub has_header: bool,
    pub label_column: LabelColumn,
    /// Report malformed rows and go on instead of failing.
    pub skip_bad: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            delimiter: b',',
            has_header: true,
            label_column: LabelColumn::Auto,
            skip_bad: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedRow {
    /// One-based line number in the file.
    pub row: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParseReport {
    pub rows_read: usize,
    pub skipped: Vec<SkippedRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub cloud: DataCloud,
    pub source: Option<PathBuf>,
    /// Names of the coordinate columns.
    pub columns: Vec<String>,
    pub label_name: Option<String>,
    pub report: ParseReport,
}

impl Dataset {
    pub fn dim(&self) -> usize {
        self.cloud.dim()
    }

    pub fn len(&self) -> usize {
        self.cloud.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cloud.is_empty()
    }

    /// Canonical CSV: header, optional label column first, shortest round-trip numbers.
    pub fn to_canonical_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let labels = self.cloud.labels();
        let mut header = Vec::new();
        if labels.is_some() {
            header.push(self.label_name.clone().unwrap_or_else(|| "label".into()));
        }
        header.extend(self.columns.iter().cloned());
        w.write_record(&header).expect("in-memory write");
        for (i, p) in self.cloud.points().enumerate() {
            let mut rec: Vec<String> = Vec::with_capacity(header.len());
            if let Some(l) = labels {
                rec.push(l[i].clone());
            }
            rec.extend(p.iter().map(|v| format!("{v:?}")));
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }
}

/// Loads a dataset from `path`; [`EU27_NAME`] selects the bundled fixture.
pub fn load_dataset(path: &Path, options: &LoadOptions) -> CliResult<Dataset> {
    if path.as_os_str() == EU27_NAME {
        return parse_dataset(EU27_CSV.as_bytes(), &LoadOptions::default(), EU27_NAME)
            .map(|mut d| {
                d.source = Some(path.to_path_buf());
                d
            });
    }
    let mut text = Vec::new();
    File::open(path)
        .and_then(|mut f| f.read_to_end(&mut text))
        .map_err(|e| CliError::io(path, e))?;
    let mut d = parse_dataset(&text[..], options, &path.display().to_string())?;
    d.source = Some(path.to_path_buf());
    Ok(d)
}

/// The bundled EU-27 fixture.
pub fn eu27() -> Dataset {
    load_dataset(Path::new(EU27_NAME), &LoadOptions::default()).expect("bundled fixture parses")
}

fn parse_value(field: &str) -> Result<f64, String> {
    let v: f64 = field
        .trim()
        .parse()
        .map_err(|_| format!("'{field}' is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{field}' is not finite"))
    }
}

/// Parses delimited text; `name` is used in error messages.
pub fn parse_dataset(input: impl Read, options: &LoadOptions, name: &str) -> CliResult<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(options.delimiter)
        .has_headers(false)
        .flexible(true)
        .from_reader(input);
    let mut records = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| CliError::Parse {
            row: e.position().map_or(0, |p| p.line() as usize),
            column: 0,
            reason: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        // blank lines carry no data
        if rec.len() == 1 && rec[0].trim().is_empty() {
            continue;
        }
        records.push((line, rec));
    }
    let mut iter = records.into_iter().peekable();
    let header = if options.has_header {
        match iter.next() {
            Some((_, h)) => Some(h.iter().map(|s| s.trim().to_string()).collect::<Vec<_>>()),
            None => return Err(CliError::EmptyDataset(name.to_string())),
        }
    } else {
        None
    };
    let width = match (&header, iter.peek()) {
        (Some(h), _) => h.len(),
        (None, Some((_, r))) => r.len(),
        (None, None) => return Err(CliError::EmptyDataset(name.to_string())),
    };
    let label = match options.label_column {
        LabelColumn::None => None,
        LabelColumn::Index(k) if k < width => Some(k),
        LabelColumn::Index(k) => {
            return Err(CliError::Usage(format!(
                "label column {} out of range for {width} columns",
                k + 1
            )))
        }
        LabelColumn::Auto => iter
            .peek()
            .and_then(|(_, r)| r.get(0))
            .filter(|f| f.trim().parse::<f64>().is_err())
            .map(|_| 0),
    };
    let numeric: Vec<usize> = (0..width).filter(|&c| Some(c) != label).collect();
    if numeric.is_empty() {
        return Err(CliError::Usage(format!("{name}: no numeric column")));
    }
    let columns = match &header {
        Some(h) => numeric.iter().map(|&c| h[c].clone()).collect(),
        None => (1..=numeric.len()).map(|k| format!("x{k}")).collect(),
    };
    let label_name = label.map(|c| match &header {
        Some(h) => h[c].clone(),
        None => "label".to_string(),
    });

    let mut report = ParseReport::default();
    let mut coords = Vec::new();
    let mut labels = Vec::new();
    for (line, rec) in iter {
        report.rows_read += 1;
        let parsed = (|| {
            if rec.len() != width {
                return Err((0, format!("expected {width} fields, found {}", rec.len())));
            }
            let row: Vec<f64> = numeric
                .iter()
                .map(|&c| parse_value(&rec[c]).map_err(|r| (c + 1, r)))
                .collect::<Result<_, _>>()?;
            Ok(row)
        })();
        match parsed {
            Ok(row) => {
                coords.extend(row);
                if let Some(c) = label {
                    labels.push(rec[c].trim().to_string());
                }
            }
            Err((column, reason)) if options.skip_bad => {
                let reason = if column > 0 {
                    format!("column {column}: {reason}")
                } else {
                    reason
                };
                report.skipped.push(SkippedRow { row: line, reason });
            }
            Err((column, reason)) => {
                return Err(CliError::Parse {
                    row: line,
                    column,
                    reason,
                })
            }
        }
    }
    if coords.is_empty() {
        return Err(CliError::EmptyDataset(name.to_string()));
    }
    let mut cloud = DataCloud::from_flat(numeric.len(), coords)?;
    if label.is_some() {
        cloud = cloud.with_labels(labels)?;
    }
    Ok(Dataset {
        cloud,
        source: None,
        columns,
        label_name,
        report,
    })
}

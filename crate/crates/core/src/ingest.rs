//! Grade-distribution CSV input and run configuration.
//!
//! Expected header: `id,division,course,year,g1,...,gn`, grade columns
//! ordered best grade first.

use std::io::Read;
use std::path::Path;

use num::BigRational;
use thiserror::Error;

use crate::emd::{EmdError, ProbVector};

pub const FIXED_COLUMNS: [&str; 4] = ["id", "division", "course", "year"];

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {source}")]
    Csv { line: u64, source: csv::Error },
    #[error("line 1: missing column `{0}`")]
    MissingColumn(String),
    #[error("line 1: expected {expected} grade columns, found {found}")]
    GradeColumns { expected: usize, found: usize },
    #[error("line {line}: expected {expected} fields, found {found}")]
    RaggedRow { line: u64, expected: usize, found: usize },
    #[error("line {line}: invalid id `{value}`")]
    InvalidId { line: u64, value: String },
    #[error("line {line}: negative count `{value}` in column {column}")]
    NegativeCount { line: u64, column: String, value: String },
    #[error("line {line}: invalid count `{value}` in column {column}")]
    InvalidCount { line: u64, column: String, value: String },
    #[error("line {line}: zero enrollment")]
    ZeroEnrollment { line: u64 },
    #[error("no records")]
    NoRecords,
    #[error("unknown id {0}")]
    UnknownId(u64),
}

/// One course offering: grade counts, best grade first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistributionRecord {
    pub id: u64,
    pub division: String,
    pub label: String,
    pub year: String,
    pub counts: Vec<u64>,
}

impl DistributionRecord {
    pub fn enrollment(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Exact `counts / enrollment`.
    pub fn to_prob_vector(&self) -> Result<ProbVector, EmdError> {
        ProbVector::from_counts(&self.counts)
    }
}

/// Reads a distribution file. With `n = Some(k)` the file must have exactly
/// `k` grade columns; otherwise the header decides.
pub fn parse_distribution_csv(
    path: impl AsRef<Path>,
    n: Option<usize>,
) -> Result<Vec<DistributionRecord>, IngestError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)
        .map_err(|source| IngestError::Io { path: path.display().to_string(), source })?;
    read_distribution_csv(file, n)
}

/// [`parse_distribution_csv`] over any reader.
pub fn read_distribution_csv<R: Read>(
    input: R,
    n: Option<usize>,
) -> Result<Vec<DistributionRecord>, IngestError> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let header = match reader.headers() {
        Ok(h) => h.clone(),
        Err(source) => return Err(IngestError::Csv { line: 1, source }),
    };
    if header.is_empty() || header.iter().all(str::is_empty) {
        return Err(IngestError::NoRecords);
    }
    for (k, name) in FIXED_COLUMNS.iter().enumerate() {
        if header.get(k).map(str::to_ascii_lowercase).as_deref() != Some(*name) {
            return Err(IngestError::MissingColumn(name.to_string()));
        }
    }
    let grade_names: Vec<String> = header.iter().skip(FIXED_COLUMNS.len()).map(str::to_string).collect();
    let expected_grades = n.unwrap_or(grade_names.len());
    if grade_names.len() < expected_grades {
        return Err(IngestError::MissingColumn(format!("g{}", grade_names.len() + 1)));
    }
    if grade_names.len() != expected_grades || expected_grades == 0 {
        return Err(IngestError::GradeColumns { expected: expected_grades, found: grade_names.len() });
    }
    let width = header.len();

    let mut records = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|source| {
            let line = source.position().map_or(0, |p| p.line());
            IngestError::Csv { line, source }
        })?;
        let line = row.position().map_or(0, |p| p.line());
        if row.len() == 1 && row.get(0) == Some("") {
            continue;
        }
        if row.len() != width {
            return Err(IngestError::RaggedRow { line, expected: width, found: row.len() });
        }
        let id = row[0]
            .parse::<u64>()
            .map_err(|_| IngestError::InvalidId { line, value: row[0].to_string() })?;
        let counts = grade_names
            .iter()
            .zip(row.iter().skip(FIXED_COLUMNS.len()))
            .map(|(column, value)| parse_count(line, column, value))
            .collect::<Result<Vec<u64>, _>>()?;
        if counts.iter().all(|&c| c == 0) {
            return Err(IngestError::ZeroEnrollment { line });
        }
        records.push(DistributionRecord {
            id,
            division: row[1].to_string(),
            label: row[2].to_string(),
            year: row[3].to_string(),
            counts,
        });
    }
    if records.is_empty() {
        return Err(IngestError::NoRecords);
    }
    Ok(records)
}

fn parse_count(line: u64, column: &str, value: &str) -> Result<u64, IngestError> {
    let normalized = value.replace('\u{2212}', "-");
    match normalized.parse::<i128>() {
        Ok(v) if v < 0 => Err(IngestError::NegativeCount {
            line,
            column: column.to_string(),
            value: value.to_string(),
        }),
        Ok(v) => u64::try_from(v).map_err(|_| IngestError::InvalidCount {
            line,
            column: column.to_string(),
            value: value.to_string(),
        }),
        Err(_) => Err(IngestError::InvalidCount {
            line,
            column: column.to_string(),
            value: value.to_string(),
        }),
    }
}

/// Looks a record up by id.
pub fn find_record(records: &[DistributionRecord], id: u64) -> Result<&DistributionRecord, IngestError> {
    records.iter().find(|r| r.id == id).ok_or(IngestError::UnknownId(id))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("grade scale size must be at least 2 (got {0})")]
    ScaleTooSmall(usize),
    #[error("precision must be in 1..=50 (got {0})")]
    Precision(usize),
}

/// Settings shared by the command-line tools.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub grade_scale_size: usize,
    pub thresholds: Vec<BigRational>,
    pub format: OutputFormat,
    pub precision: usize,
    pub seed: u64,
    pub emg_cap: usize,
    pub isoperimetric_cap: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            grade_scale_size: 12,
            thresholds: Vec::new(),
            format: OutputFormat::Csv,
            precision: 6,
            seed: 0,
            emg_cap: crate::graph::DEFAULT_EMG_CAP,
            isoperimetric_cap: crate::graph::DEFAULT_ISOPERIMETRIC_CAP,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.grade_scale_size < 2 {
            return Err(ConfigError::ScaleTooSmall(self.grade_scale_size));
        }
        if !(1..=50).contains(&self.precision) {
            return Err(ConfigError::Precision(self.precision));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read(text: &str, n: Option<usize>) -> Result<Vec<DistributionRecord>, IngestError> {
        read_distribution_csv(text.as_bytes(), n)
    }

    const HEADER: &str = "id,division,course,year,g1,g2,g3,g4,g5\n";

    #[test]
    fn parses_a_row() {
        let recs = read(&format!("{HEADER}1,English,101,2013,0,19,8,2,1\n"), Some(5)).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].counts, vec![0, 19, 8, 2, 1]);
        assert_eq!(recs[0].enrollment(), 30);
        assert_eq!(recs[0].label, "101");
        assert_eq!(recs[0].division, "English");
        assert_eq!(recs[0].to_prob_vector().unwrap().weights()[1], crate::numerics::ratio(19, 30));
    }

    #[test]
    fn negative_count_names_the_line() {
        let err = read(&format!("{HEADER}1,A,1,2013,1,1,1,1,1\n2,A,2,2013,1,-1,1,1,1\n"), None).unwrap_err();
        assert!(matches!(err, IngestError::NegativeCount { line: 3, .. }), "{err}");
        assert!(err.to_string().starts_with("line 3"));
        let err = read(&format!("{HEADER}1,A,1,2013,1,\u{2212}1,1,1,1\n"), None).unwrap_err();
        assert!(matches!(err, IngestError::NegativeCount { line: 2, .. }));
    }

    #[test]
    fn other_errors() {
        assert!(matches!(read("", None), Err(IngestError::NoRecords)));
        assert!(matches!(read(HEADER, None), Err(IngestError::NoRecords)));
        assert!(matches!(
            read("id,division,year,g1\n1,A,2013,4\n", None),
            Err(IngestError::MissingColumn(c)) if c == "course"
        ));
        assert!(matches!(
            read(&format!("{HEADER}1,A,1,2013,0,0,0,0,0\n"), None),
            Err(IngestError::ZeroEnrollment { line: 2 })
        ));
        assert!(matches!(
            read(&format!("{HEADER}1,A,1,2013,1,2,3\n"), None),
            Err(IngestError::RaggedRow { line: 2, expected: 9, found: 7 })
        ));
        assert!(matches!(
            read(&format!("{HEADER}1,A,1,2013,1,x,3,1,1\n"), None),
            Err(IngestError::InvalidCount { line: 2, .. })
        ));
        assert!(matches!(read(HEADER, Some(6)), Err(IngestError::MissingColumn(c)) if c == "g6"));
        assert!(matches!(read(HEADER, Some(4)), Err(IngestError::GradeColumns { expected: 4, found: 5 })));
    }

    #[test]
    fn lookup_by_id() {
        let recs = read(&format!("{HEADER}7,A,1,2013,1,1,1,1,1\n"), None).unwrap();
        assert_eq!(find_record(&recs, 7).unwrap().id, 7);
        assert!(matches!(find_record(&recs, 8), Err(IngestError::UnknownId(8))));
    }

    #[test]
    fn config_validation() {
        assert!(RunConfig::default().validate().is_ok());
        let bad = RunConfig { grade_scale_size: 1, ..RunConfig::default() };
        assert_eq!(bad.validate(), Err(ConfigError::ScaleTooSmall(1)));
        let bad = RunConfig { precision: 51, ..RunConfig::default() };
        assert_eq!(bad.validate(), Err(ConfigError::Precision(51)));
    }
}

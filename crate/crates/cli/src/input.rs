//! Count-file ingestion.

use std::collections::HashSet;
use std::path::Path;

use clap::ValueEnum;
use pyent::{frequency_from_counts, FrequencyVector};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    /// One nonnegative integer per line.
    Lines,
    /// `species,count` with a header row.
    Csv,
}

pub fn read_counts(path: &Path, format: InputFormat) -> Result<FrequencyVector, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_counts(&text, format)
}

pub fn parse_counts(text: &str, format: InputFormat) -> Result<FrequencyVector, CliError> {
    let raw = match format {
        InputFormat::Lines => parse_lines(text)?,
        InputFormat::Csv => parse_csv(text)?,
    };
    frequency_from_counts(&raw).map_err(|e| CliError::Input(e.to_string()))
}

fn parse_count(field: &str, line: usize) -> Result<i64, CliError> {
    field.trim().parse::<i64>().map_err(|_| CliError::Input(format!("line {line}: {:?} is not an integer count", field.trim())))
}

fn parse_lines(text: &str) -> Result<Vec<i64>, CliError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_count(l, i + 1))
        .collect()
}

fn parse_csv(text: &str) -> Result<Vec<i64>, CliError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| CliError::Input(format!("csv header: {e}")))?.clone();
    let column = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let (Some(species), Some(count)) = (column("species"), column("count")) else {
        return Err(CliError::Input("csv input needs a `species,count` header".into()));
    };
    let mut seen = HashSet::new();
    let mut counts = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| CliError::Input(format!("line {line}: {e}")))?;
        let label = record.get(species).unwrap_or_default().to_string();
        if !seen.insert(label.clone()) {
            return Err(CliError::Input(format!("line {line}: duplicate species label {label:?}")));
        }
        counts.push(parse_count(record.get(count).unwrap_or_default(), line)?);
    }
    Ok(counts)
}

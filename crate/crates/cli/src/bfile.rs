//! OEIS b-file ingestion.

use doldkit::seqkit::SeqPrefix;
use doldkit::Int;

use crate::CliError;

/// Ordered `(index, value)` pairs from a b-file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BFile {
    pub entries: Vec<(i64, Int)>,
}

/// Parses `<index> <value>` lines. Blank lines and `#` comments are skipped.
pub fn parse_bfile(text: &str) -> Result<BFile, CliError> {
    let mut entries: Vec<(i64, Int)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let (Some(idx), Some(val), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(CliError::MalformedLine(lineno));
        };
        let idx: i64 = idx.parse().map_err(|_| CliError::MalformedLine(lineno))?;
        let val: Int = val.parse().map_err(|_| CliError::MalformedLine(lineno))?;
        if entries.last().is_some_and(|(prev, _)| *prev >= idx) {
            return Err(CliError::NonMonotoneIndex(lineno));
        }
        entries.push((idx, val));
    }
    Ok(BFile { entries })
}

impl BFile {
    /// The contiguous run a_1, a_2, … and a notice for every dropped entry
    /// below index 1. Entries after the first gap are ignored.
    pub fn window(&self) -> Result<(SeqPrefix, Vec<String>), CliError> {
        let mut notices = Vec::new();
        let mut values = Vec::new();
        for (idx, val) in &self.entries {
            if *idx < 1 {
                notices.push(format!("dropped entry at index {idx}"));
                continue;
            }
            if *idx != values.len() as i64 + 1 {
                if values.is_empty() {
                    return Err(CliError::NoWindow(*idx));
                }
                notices.push(format!("window stops before gap at index {idx}"));
                break;
            }
            values.push(val.clone());
        }
        if values.is_empty() {
            return Err(CliError::NoWindow(1));
        }
        Ok((SeqPrefix::new(values)?, notices))
    }
}

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const ACCIDENT_NUMBER_KEY: &str = "Accident Number";
const FINDINGS_MARKER: &str = "FINDINGS";

/// One `Category: Cause - Reason` row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub category: String,
    pub cause: String,
    pub reason: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.reason.is_empty() {
            write!(f, "{}: {}", self.category, self.cause)
        } else {
            write!(f, "{}: {} - {}", self.category, self.cause, self.reason)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NarrativeParagraph {
    pub heading: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub accident_number: String,
    /// Every header, including the accident number itself.
    pub fields: BTreeMap<String, String>,
    pub findings: Vec<Finding>,
    pub narrative: Vec<NarrativeParagraph>,
}

impl ReportRecord {
    pub fn field(&self, key: &str) -> Option<&str> {
        self.fields.get(key).map(String::as_str)
    }
}

fn parse_heading(line: &str) -> Option<&str> {
    let inner = line.strip_prefix("==")?.strip_suffix("==")?.trim();
    (!inner.is_empty()).then_some(inner)
}

fn parse_finding(line: &str, lineno: usize) -> Result<Finding> {
    let (category, rest) = line
        .split_once(':')
        .ok_or_else(|| Error::parse(lineno, format!("finding row without `Category:` prefix: {line:?}")))?;
    let (cause, reason) = rest.split_once(" - ").unwrap_or((rest, ""));
    let f = Finding { category: category.trim().into(), cause: cause.trim().into(), reason: reason.trim().into() };
    if f.category.is_empty() || f.cause.is_empty() {
        return Err(Error::parse(lineno, format!("finding row needs a category and a cause: {line:?}")));
    }
    Ok(f)
}

enum Section {
    Header,
    Findings,
    Narrative { heading: String, buf: Vec<String> },
}

fn flush(narrative: &mut Vec<NarrativeParagraph>, heading: &str, buf: &mut Vec<String>) {
    if !buf.is_empty() {
        narrative.push(NarrativeParagraph { heading: heading.to_string(), text: buf.join(" ") });
        buf.clear();
    }
}

/// Parses the plain-text report layout: `Key: Value` headers, an optional
/// `FINDINGS` block, then `== Heading ==` sections whose paragraphs are
/// separated by blank lines. Lines inside a paragraph are joined with spaces.
pub fn parse_report(text: &str) -> Result<ReportRecord> {
    let mut fields = BTreeMap::new();
    let mut findings = Vec::new();
    let mut narrative = Vec::new();
    let mut section = Section::Header;

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if let Some(h) = parse_heading(line) {
            if let Section::Narrative { heading, buf } = &mut section {
                flush(&mut narrative, heading, buf);
            }
            section = Section::Narrative { heading: h.to_string(), buf: Vec::new() };
            continue;
        }
        match &mut section {
            Section::Narrative { heading, buf } => {
                if line.is_empty() {
                    flush(&mut narrative, heading, buf);
                } else {
                    buf.push(line.to_string());
                }
            }
            _ if line.is_empty() => {}
            Section::Header if line == FINDINGS_MARKER => section = Section::Findings,
            Section::Header => {
                let (k, v) = line
                    .split_once(':')
                    .ok_or_else(|| Error::parse(lineno, format!("expected `Key: Value` header, got {line:?}")))?;
                let (k, v) = (k.trim(), v.trim());
                if k.is_empty() {
                    return Err(Error::parse(lineno, "header with empty key"));
                }
                if fields.insert(k.to_string(), v.to_string()).is_some() {
                    return Err(Error::parse(lineno, format!("duplicate header `{k}`")));
                }
            }
            Section::Findings => findings.push(parse_finding(line, lineno)?),
        }
    }
    if let Section::Narrative { heading, buf } = &mut section {
        flush(&mut narrative, heading, buf);
    }

    let accident_number = fields
        .iter()
        .find(|(k, _)| k.eq_ignore_ascii_case(ACCIDENT_NUMBER_KEY))
        .map(|(_, v)| v.clone())
        .filter(|v| !v.is_empty())
        .ok_or_else(|| Error::parse(None, format!("missing `{ACCIDENT_NUMBER_KEY}` header")))?;
    Ok(ReportRecord { accident_number, fields, findings, narrative })
}

/// A report file that failed to load.
#[derive(Debug)]
pub struct ReportError {
    pub path: PathBuf,
    pub error: Error,
}

/// Parses every `*.txt` file in `dir`, collecting failures instead of
/// stopping at the first. Records come back sorted by accident number; a
/// repeated accident number is reported as a failure of the later file.
pub fn scan_reports(dir: impl AsRef<Path>) -> Result<(Vec<ReportRecord>, Vec<ReportError>)> {
    let mut paths: Vec<_> = std::fs::read_dir(dir.as_ref())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "txt"))
        .collect();
    paths.sort();
    let mut records = Vec::with_capacity(paths.len());
    let mut failures = Vec::new();
    let mut seen = HashSet::new();
    for path in paths {
        let parsed = std::fs::read_to_string(&path).map_err(Error::from).and_then(|t| parse_report(&t));
        match parsed {
            Ok(rec) if !seen.insert(rec.accident_number.clone()) => failures.push(ReportError {
                error: Error::Validation(format!("duplicate accident number {}", rec.accident_number)),
                path,
            }),
            Ok(rec) => records.push(rec),
            Err(error) => failures.push(ReportError { path, error }),
        }
    }
    records.sort_by(|a, b| a.accident_number.cmp(&b.accident_number));
    Ok((records, failures))
}

/// Strict form of [`scan_reports`]: the first failure becomes the error.
pub fn load_reports(dir: impl AsRef<Path>) -> Result<Vec<ReportRecord>> {
    let (records, failures) = scan_reports(dir)?;
    match failures.into_iter().next() {
        None => Ok(records),
        Some(ReportError { path, error: Error::Parse { line, message } }) => {
            Err(Error::Parse { line, message: format!("{}: {message}", path.display()) })
        }
        Some(ReportError { path, error }) => Err(Error::Validation(format!("{}: {error}", path.display()))),
    }
}

#[cfg(test)]
pub(crate) const SAMPLE_REPORT: &str = "\
Accident Number: ERA02LA047
Date: 2002-03-14
Location: La Belle, FL

FINDINGS
Aircraft Issue: Directional control - Not attained
Personnel Issue: Fuel planning - Inadequate - pilot in command

== Analysis ==
The pilot lost directional control
during the landing roll.

The left main gear collapsed.

== Probable Cause ==
The pilot's failure to maintain directional control.
";

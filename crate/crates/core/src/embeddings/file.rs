use std::collections::HashMap;
use std::path::Path;

use super::{EmbeddingProvider, Vector, DEFAULT_NGRAM};
use crate::error::{Error, Result};

/// Parses `text<TAB>v1 v2 ... vd` lines. Blank lines are skipped; the first
/// entry fixes `d` and any later mismatch is an error at that line.
pub(crate) fn parse_vectors(content: &str) -> Result<(HashMap<String, Vector>, usize)> {
    let mut table = HashMap::new();
    let mut dim: Option<usize> = None;
    for (i, line) in content.lines().enumerate() {
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let (text, nums) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(Some(lineno), "expected `text<TAB>components`"))?;
        let comps = nums
            .split_whitespace()
            .map(|s| s.parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| Error::parse(Some(lineno), format!("bad component: {e}")))?;
        match dim {
            None => dim = Some(comps.len()),
            Some(d) if d != comps.len() => {
                return Err(Error::parse(Some(lineno), format!("ragged vector: expected {d} components, found {}", comps.len())));
            }
            _ => {}
        }
        let v = Vector::new(comps).map_err(|e| Error::parse(Some(lineno), e.to_string()))?;
        table.entry(text.to_string()).or_insert(v);
    }
    let dim = dim.ok_or_else(|| Error::parse(None, "vectors file has no entries"))?;
    Ok((table, dim))
}

/// File-backed provider; texts absent from the file use the hashed embedding
/// at the file's dimension.
pub fn load_vectors(path: impl AsRef<Path>) -> Result<EmbeddingProvider> {
    let (table, dim) = parse_vectors(&std::fs::read_to_string(path)?)?;
    Ok(EmbeddingProvider::FileBacked { table, dim, n: DEFAULT_NGRAM })
}

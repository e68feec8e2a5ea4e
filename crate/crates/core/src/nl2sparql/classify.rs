use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::tokenize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QuestionType {
    List,
    Boolean,
    Count,
}

impl fmt::Display for QuestionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuestionType::List => "list",
            QuestionType::Boolean => "boolean",
            QuestionType::Count => "count",
        })
    }
}

const COUNT_CUES: &[&str] = &["how many", "number of", "count of"];
const BOOLEAN_LEADS: &[&str] = &["is", "are", "was", "were", "do", "does", "did", "can", "could", "has", "have", "had"];

/// Count cues anywhere win; otherwise an auxiliary verb in first position
/// makes a yes/no question; everything else is a list question.
pub fn classify_question(q: &str) -> Result<QuestionType> {
    let toks = tokenize(q);
    let Some(first) = toks.first() else {
        return Err(Error::Validation("empty question".into()));
    };
    let words: Vec<String> = toks.iter().map(|t| t.text.to_lowercase()).collect();
    let joined = words.join(" ");
    let padded = format!(" {joined} ");
    if COUNT_CUES.iter().any(|c| padded.contains(&format!(" {c} "))) {
        return Ok(QuestionType::Count);
    }
    if BOOLEAN_LEADS.contains(&first.text.to_lowercase().as_str()) {
        return Ok(QuestionType::Boolean);
    }
    Ok(QuestionType::List)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rules() {
        assert_eq!(classify_question("How many accidents occurred in 2002?").unwrap(), QuestionType::Count);
        assert_eq!(classify_question("Was the aircraft damaged?").unwrap(), QuestionType::Boolean);
        assert_eq!(
            classify_question("Which accidents involved aircraft operated by Johnny Thornley and manufactured by Subaru?").unwrap(),
            QuestionType::List
        );
        assert_eq!(classify_question("Is the number of  fatalities known?").unwrap(), QuestionType::Count);
        assert_eq!(classify_question("What is the count-of events?").unwrap(), QuestionType::Count);
        assert_eq!(classify_question("Island airports?").unwrap(), QuestionType::List);
    }

    #[test]
    fn empty_is_error() {
        assert!(classify_question("  ?! ").is_err());
    }
}

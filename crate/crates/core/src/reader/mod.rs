//! Turning retrieved passages into answer spans.

mod dlqa;
mod fallback;
mod remote;

use serde::{Deserialize, Serialize};

pub use dlqa::{dlqa_answer, DlAnswer, Dlqa, DlqaConfig, DlqaResult, RetrieverKind, DEFAULT_BUDGET};
pub use fallback::{read_extractive_fallback, split_sentences, DEFAULT_PER_PASSAGE};
pub use remote::{read_remote, ReadRequest, ReadResponse, RemoteReader, WireAnswer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ReaderMode {
    #[default]
    Extractive,
    Abstractive,
}

impl std::str::FromStr for ReaderMode {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "extractive" => Ok(ReaderMode::Extractive),
            "abstractive" => Ok(ReaderMode::Abstractive),
            other => Err(crate::Error::Config(format!("unknown reader mode {other:?}"))),
        }
    }
}

/// An answer with the index of the supplied passage it came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReaderAnswer {
    pub text: String,
    pub passage_index: usize,
    pub score: f64,
}

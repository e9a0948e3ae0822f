//! Document indexing and ranked retrieval under BM25 and tf-idf.

mod corpus;
mod index;
mod search;

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use rust_stemmers::{Algorithm, Stemmer};
use thiserror::Error;

use crate::text::tokens;

pub use corpus::{parse_corpus, TrecDoc};
pub use index::{IndexManifest, InvertedIndex, INDEX_FORMAT, INDEX_VERSION};
pub use search::{run_queries, search, Hit, Model, BM25_B, BM25_K1};

const DEFAULT_STOPWORDS: &str = include_str!("../../data/stopwords.txt");

#[derive(Debug, Error)]
pub enum RetrievalError {
    #[error("corpus document {context}: {message}")]
    Corpus { context: String, message: String },
    #[error("duplicate DOCNO {0}")]
    DuplicateDocno(String),
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("unknown retrieval model {0:?} (expected bm25 or tfidf)")]
    UnknownModel(String),
    #[error("cutoff must be at least 1")]
    InvalidCutoff,
    #[error("weighted query line {line}: {message}")]
    QueryFile { line: usize, message: String },
    #[error("index {path}: {message}")]
    Store { path: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Tokenizer, stopword filter and optional English stemmer.
pub struct Analyzer {
    stopwords: HashSet<String>,
    stemmer: Option<Stemmer>,
}

impl fmt::Debug for Analyzer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Analyzer")
            .field("stopwords", &self.stopwords.len())
            .field("stemming", &self.stemming())
            .finish()
    }
}

impl Analyzer {
    /// The shipped English stopword list.
    pub fn english(stemming: bool) -> Self {
        Self::new(DEFAULT_STOPWORDS.lines(), stemming)
    }

    pub fn new<I, S>(stopwords: I, stemming: bool) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let stopwords = stopwords
            .into_iter()
            .map(|s| s.as_ref().trim().to_lowercase())
            .filter(|s| !s.is_empty())
            .collect();
        Self { stopwords, stemmer: stemming.then(|| Stemmer::create(Algorithm::English)) }
    }

    pub fn stemming(&self) -> bool {
        self.stemmer.is_some()
    }

    /// Sorted stopword list.
    pub fn stopwords(&self) -> Vec<&str> {
        let mut v: Vec<&str> = self.stopwords.iter().map(String::as_str).collect();
        v.sort_unstable();
        v
    }

    /// Tokens with stopwords removed, then stemmed.
    pub fn analyze(&self, text: &str) -> Vec<String> {
        tokens(text)
            .into_iter()
            .filter(|t| !self.stopwords.contains(t))
            .map(|t| match &self.stemmer {
                Some(s) => s.stem(&t).into_owned(),
                None => t,
            })
            .collect()
    }
}

/// Parses weighted queries, one `topic<TAB>weight<TAB>term` per line.
pub fn read_weighted_queries(text: &str) -> Result<BTreeMap<u32, Vec<(String, f64)>>, RetrievalError> {
    let mut out: BTreeMap<u32, Vec<(String, f64)>> = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let bad = |message: &str| RetrievalError::QueryFile { line: i + 1, message: message.to_string() };
        let mut parts = line.splitn(3, '\t');
        let (Some(topic), Some(weight), Some(term)) = (parts.next(), parts.next(), parts.next()) else {
            return Err(bad("expected topic<TAB>weight<TAB>term"));
        };
        let topic: u32 = topic.trim().parse().map_err(|_| bad("topic is not a number"))?;
        let weight: f64 = weight.trim().parse().map_err(|_| bad("weight is not a number"))?;
        if !weight.is_finite() || weight < 0.0 {
            return Err(bad("weight must be finite and non-negative"));
        }
        out.entry(topic).or_default().push((term.to_string(), weight));
    }
    Ok(out)
}

pub fn write_weighted_queries<'a, I>(queries: I) -> String
where
    I: IntoIterator<Item = (u32, &'a [(String, f64)])>,
{
    let mut out = String::new();
    for (topic, terms) in queries {
        for (term, w) in terms {
            out.push_str(&format!("{topic}\t{w:.6}\t{term}\n"));
        }
    }
    out
}

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{InvertedIndex, RetrievalError};
use crate::eval::{Run, RunEntry};

pub const BM25_K1: f64 = 1.2;
pub const BM25_B: f64 = 0.75;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Model {
    Bm25,
    TfIdf,
}

impl Model {
    pub const ALL: [Model; 2] = [Model::Bm25, Model::TfIdf];

    /// Column label in sweep tables.
    pub fn label(self) -> &'static str {
        match self {
            Model::Bm25 => "BM25",
            Model::TfIdf => "Tf-idf",
        }
    }

    /// Score contribution of one term occurring `tf` times in a document of length `dl`.
    pub fn term_score(self, tf: f64, df: f64, dl: f64, n_docs: f64, avg_dl: f64) -> f64 {
        match self {
            Model::Bm25 => {
                let idf = (1.0 + (n_docs - df + 0.5) / (df + 0.5)).ln();
                let norm = if avg_dl > 0.0 { dl / avg_dl } else { 1.0 };
                idf * tf * (BM25_K1 + 1.0) / (tf + BM25_K1 * (1.0 - BM25_B + BM25_B * norm))
            }
            Model::TfIdf => tf * (1.0 + n_docs / df).ln(),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Bm25 => "bm25",
            Model::TfIdf => "tfidf",
        })
    }
}

impl FromStr for Model {
    type Err = RetrievalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bm25" => Ok(Model::Bm25),
            "tfidf" | "tf-idf" => Ok(Model::TfIdf),
            _ => Err(RetrievalError::UnknownModel(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hit {
    pub docno: String,
    pub score: f64,
}

/// Ranks documents for a weighted query. Each query term is analyzed like
/// the documents; a term splitting into several tokens gives each token its
/// weight. Only documents with a positive score are returned, best first,
/// ties by DOCNO.
pub fn search(index: &InvertedIndex, query: &[(String, f64)], model: Model, k: usize) -> Result<Vec<Hit>, RetrievalError> {
    if k == 0 {
        return Err(RetrievalError::InvalidCutoff);
    }
    let mut weights: BTreeMap<String, f64> = BTreeMap::new();
    for (term, w) in query {
        for t in index.analyzer().analyze(term) {
            *weights.entry(t).or_default() += w;
        }
    }
    let n = index.n_docs() as f64;
    let avg = index.avg_doc_length();
    let mut scores: BTreeMap<u32, f64> = BTreeMap::new();
    for (term, w) in &weights {
        let postings = index.postings(term);
        let df = postings.len() as f64;
        for &(doc, tf) in postings {
            let s = model.term_score(tf as f64, df, index.doc_length(doc) as f64, n, avg);
            *scores.entry(doc).or_default() += w * s;
        }
    }
    let mut hits: Vec<Hit> = scores
        .into_iter()
        .filter(|(_, s)| *s > 0.0)
        .map(|(d, score)| Hit { docno: index.docno(d).to_string(), score })
        .collect();
    hits.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.docno.cmp(&b.docno)));
    hits.truncate(k);
    Ok(hits)
}

/// Searches every topic in parallel and collects a run.
pub fn run_queries(
    index: &InvertedIndex,
    queries: &BTreeMap<u32, Vec<(String, f64)>>,
    model: Model,
    k: usize,
) -> Result<Run, RetrievalError> {
    let ranked: Vec<(u32, Vec<Hit>)> = queries
        .par_iter()
        .map(|(t, q)| search(index, q, model, k).map(|h| (*t, h)))
        .collect::<Result<_, _>>()?;
    let topics = ranked
        .into_iter()
        .map(|(t, hits)| (t, hits.into_iter().map(|h| RunEntry { docno: h.docno, score: h.score }).collect()))
        .collect();
    Ok(Run { topics })
}

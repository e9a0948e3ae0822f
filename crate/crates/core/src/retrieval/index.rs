//! Inverted index over a document collection, with a versioned on-disk form:
//!
//! ```text
//! <dir>/manifest.json   format, version, counts, analyzer settings, digests
//! <dir>/docs.tsv        DOCNO<TAB>length, in doc-id order
//! <dir>/postings.tsv    term<TAB>doc:tf doc:tf ..., sorted by term
//! <dir>/stopwords.txt   one stopword per line, sorted
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Analyzer, RetrievalError, TrecDoc};
use crate::digest::sha256_hex;

pub const INDEX_FORMAT: &str = "wwqe-inverted-index";
pub const INDEX_VERSION: u32 = 1;

const MANIFEST_FILE: &str = "manifest.json";
const DOCS_FILE: &str = "docs.tsv";
const POSTINGS_FILE: &str = "postings.tsv";
const STOPWORDS_FILE: &str = "stopwords.txt";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexManifest {
    pub format: String,
    pub version: u32,
    pub n_docs: usize,
    pub n_terms: usize,
    pub total_length: u64,
    pub stemming: bool,
    pub docs_sha256: String,
    pub postings_sha256: String,
    pub stopwords_sha256: String,
}

#[derive(Debug)]
pub struct InvertedIndex {
    analyzer: Analyzer,
    docnos: Vec<String>,
    doc_lengths: Vec<u32>,
    /// term -> (doc id, tf), doc ids ascending.
    postings: BTreeMap<String, Vec<(u32, u32)>>,
    total_length: u64,
}

impl InvertedIndex {
    /// Indexes `docs` in order; doc ids are positions in `docs`.
    pub fn build(docs: &[TrecDoc], analyzer: Analyzer) -> Result<Self, RetrievalError> {
        if docs.is_empty() {
            return Err(RetrievalError::EmptyCorpus);
        }
        let mut seen = HashMap::with_capacity(docs.len());
        for d in docs {
            if seen.insert(d.docno.as_str(), ()).is_some() {
                return Err(RetrievalError::DuplicateDocno(d.docno.clone()));
            }
        }
        let analyzed: Vec<Vec<String>> = docs.par_iter().map(|d| analyzer.analyze(&d.text)).collect();
        let mut postings: BTreeMap<String, Vec<(u32, u32)>> = BTreeMap::new();
        let mut doc_lengths = Vec::with_capacity(docs.len());
        for (id, toks) in analyzed.into_iter().enumerate() {
            doc_lengths.push(toks.len() as u32);
            let mut tf: BTreeMap<String, u32> = BTreeMap::new();
            for t in toks {
                *tf.entry(t).or_default() += 1;
            }
            for (t, c) in tf {
                postings.entry(t).or_default().push((id as u32, c));
            }
        }
        let total_length = doc_lengths.iter().map(|&l| l as u64).sum();
        Ok(Self { analyzer, docnos: docs.iter().map(|d| d.docno.clone()).collect(), doc_lengths, postings, total_length })
    }

    pub fn analyzer(&self) -> &Analyzer {
        &self.analyzer
    }

    pub fn n_docs(&self) -> usize {
        self.docnos.len()
    }

    pub fn n_terms(&self) -> usize {
        self.postings.len()
    }

    pub fn avg_doc_length(&self) -> f64 {
        self.total_length as f64 / self.n_docs() as f64
    }

    pub fn docno(&self, id: u32) -> &str {
        &self.docnos[id as usize]
    }

    pub fn doc_length(&self, id: u32) -> u32 {
        self.doc_lengths[id as usize]
    }

    /// Postings of an analyzed term; empty when unseen.
    pub fn postings(&self, term: &str) -> &[(u32, u32)] {
        self.postings.get(term).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn df(&self, term: &str) -> usize {
        self.postings(term).len()
    }

    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.postings.keys().map(String::as_str)
    }

    pub fn save(&self, dir: &Path) -> Result<IndexManifest, RetrievalError> {
        fs::create_dir_all(dir)?;
        let mut docs = String::new();
        for (d, l) in self.docnos.iter().zip(&self.doc_lengths) {
            docs.push_str(&format!("{d}\t{l}\n"));
        }
        let mut postings = String::new();
        for (term, list) in &self.postings {
            postings.push_str(term);
            postings.push('\t');
            let items: Vec<String> = list.iter().map(|(d, tf)| format!("{d}:{tf}")).collect();
            postings.push_str(&items.join(" "));
            postings.push('\n');
        }
        let mut stopwords = self.analyzer.stopwords().join("\n");
        stopwords.push('\n');
        let manifest = IndexManifest {
            format: INDEX_FORMAT.to_string(),
            version: INDEX_VERSION,
            n_docs: self.n_docs(),
            n_terms: self.n_terms(),
            total_length: self.total_length,
            stemming: self.analyzer.stemming(),
            docs_sha256: sha256_hex(docs.as_bytes()),
            postings_sha256: sha256_hex(postings.as_bytes()),
            stopwords_sha256: sha256_hex(stopwords.as_bytes()),
        };
        fs::write(dir.join(DOCS_FILE), docs)?;
        fs::write(dir.join(POSTINGS_FILE), postings)?;
        fs::write(dir.join(STOPWORDS_FILE), stopwords)?;
        let mut json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        json.push('\n');
        fs::write(dir.join(MANIFEST_FILE), json)?;
        Ok(manifest)
    }

    pub fn load(dir: &Path) -> Result<Self, RetrievalError> {
        let err = |file: &str, message: String| RetrievalError::Store { path: dir.join(file).display().to_string(), message };
        let read = |file: &str| fs::read_to_string(dir.join(file)).map_err(|e| err(file, e.to_string()));
        let manifest: IndexManifest =
            serde_json::from_str(&read(MANIFEST_FILE)?).map_err(|e| err(MANIFEST_FILE, e.to_string()))?;
        if manifest.format != INDEX_FORMAT || manifest.version != INDEX_VERSION {
            return Err(err(MANIFEST_FILE, format!("unsupported format {} v{}", manifest.format, manifest.version)));
        }
        let checked = |file: &str, digest: &str| -> Result<String, RetrievalError> {
            let text = read(file)?;
            if sha256_hex(text.as_bytes()) != digest {
                return Err(err(file, "digest mismatch".into()));
            }
            Ok(text)
        };
        let docs = checked(DOCS_FILE, &manifest.docs_sha256)?;
        let postings_text = checked(POSTINGS_FILE, &manifest.postings_sha256)?;
        let stopwords = checked(STOPWORDS_FILE, &manifest.stopwords_sha256)?;

        let mut docnos = Vec::with_capacity(manifest.n_docs);
        let mut doc_lengths = Vec::with_capacity(manifest.n_docs);
        for (i, line) in docs.lines().enumerate() {
            let parsed = line.split_once('\t').and_then(|(d, l)| Some((d.to_string(), l.parse::<u32>().ok()?)));
            let (d, l) = parsed.ok_or_else(|| err(DOCS_FILE, format!("line {}: expected DOCNO<TAB>length", i + 1)))?;
            docnos.push(d);
            doc_lengths.push(l);
        }
        let mut postings = BTreeMap::new();
        let mut sums = vec![0u64; docnos.len()];
        for (i, line) in postings_text.lines().enumerate() {
            let bad = || err(POSTINGS_FILE, format!("line {}: malformed postings", i + 1));
            let (term, rest) = line.split_once('\t').ok_or_else(bad)?;
            let mut list = Vec::new();
            for item in rest.split(' ') {
                let (d, tf) = item.split_once(':').ok_or_else(bad)?;
                let (d, tf): (u32, u32) = (d.parse().map_err(|_| bad())?, tf.parse().map_err(|_| bad())?);
                if d as usize >= docnos.len() || list.last().is_some_and(|&(p, _): &(u32, u32)| p >= d) {
                    return Err(bad());
                }
                sums[d as usize] += tf as u64;
                list.push((d, tf));
            }
            postings.insert(term.to_string(), list);
        }
        if sums.iter().zip(&doc_lengths).any(|(s, &l)| *s != l as u64) {
            return Err(err(POSTINGS_FILE, "document lengths do not match postings".into()));
        }
        let total_length = doc_lengths.iter().map(|&l| l as u64).sum();
        if docnos.len() != manifest.n_docs || postings.len() != manifest.n_terms || total_length != manifest.total_length {
            return Err(err(MANIFEST_FILE, "counts do not match contents".into()));
        }
        Ok(Self { analyzer: Analyzer::new(stopwords.lines(), manifest.stemming), docnos, doc_lengths, postings, total_length })
    }
}

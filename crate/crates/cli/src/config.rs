//! TOML run configuration. Every key is optional; command-line flags win.
//!
//! ```toml
//! [paths]
//! dump = "enwiki.xml"
//! wordnet = "stores/wordnet"
//! store = "stores/wiki"
//! index = "stores/index"
//! corpus = "corpus.trec"
//! topics = "topics.txt"
//! qrels = "qrels.txt"
//! out = "out"
//!
//! [expansion]
//! n = 100
//! m = 30
//! relations = ["synonym", "hyponym"]
//! expansion_weight = 0.5
//! phrase_boost = 1.0
//! wiki = true
//! wordnet = true
//!
//! [retrieval]
//! model = "bm25"
//! k = 1000
//! stemming = true
//! ```
//!
//! Relative paths are resolved against the directory holding the file.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub paths: Paths,
    #[serde(default)]
    pub expansion: Expansion,
    #[serde(default)]
    pub retrieval: Retrieval,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Paths {
    pub dump: Option<PathBuf>,
    pub wordnet: Option<PathBuf>,
    pub corpus: Option<PathBuf>,
    pub topics: Option<PathBuf>,
    pub qrels: Option<PathBuf>,
    pub store: Option<PathBuf>,
    pub index: Option<PathBuf>,
    pub queries: Option<PathBuf>,
    pub run: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expansion {
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub relations: Option<Vec<String>>,
    pub expansion_weight: Option<f64>,
    pub phrase_boost: Option<f64>,
    pub wiki: Option<bool>,
    pub wordnet: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Retrieval {
    pub model: Option<String>,
    pub k: Option<usize>,
    pub stemming: Option<bool>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg: Config = toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new(""));
        let p = &mut cfg.paths;
        for slot in [
            &mut p.dump,
            &mut p.wordnet,
            &mut p.corpus,
            &mut p.topics,
            &mut p.qrels,
            &mut p.store,
            &mut p.index,
            &mut p.queries,
            &mut p.run,
            &mut p.out,
        ] {
            if let Some(rel) = slot.as_ref().filter(|p| p.is_relative()) {
                *slot = Some(base.join(rel));
            }
        }
        Ok(cfg)
    }
}

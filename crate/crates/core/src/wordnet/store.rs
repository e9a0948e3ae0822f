//! Persisted lexical store: `manifest.json`, `synsets.jsonl`, `senses.tsv`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{LexicalStore, Synset, SynsetId, WordNetError};
use crate::digest::sha256_hex;

pub const LEXICAL_FORMAT: &str = "wwqe-lexical-store";
pub const LEXICAL_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexicalManifest {
    pub format: String,
    pub version: u32,
    pub n_synsets: usize,
    pub n_lemmas: usize,
    pub synsets_sha256: String,
    pub senses_sha256: String,
}

impl LexicalStore {
    pub fn save(&self, dir: &Path) -> Result<LexicalManifest, WordNetError> {
        fs::create_dir_all(dir)?;
        let mut synsets = String::new();
        for s in self.synsets.values() {
            synsets.push_str(&serde_json::to_string(s).expect("synset serializes"));
            synsets.push('\n');
        }
        let mut senses = String::new();
        for lemma in self.lemmas() {
            senses.push_str(lemma);
            for id in &self.lemma_index[lemma] {
                senses.push('\t');
                senses.push_str(&id.to_string());
            }
            senses.push('\n');
        }
        let manifest = LexicalManifest {
            format: LEXICAL_FORMAT.into(),
            version: LEXICAL_VERSION,
            n_synsets: self.synsets.len(),
            n_lemmas: self.lemma_index.len(),
            synsets_sha256: sha256_hex(synsets.as_bytes()),
            senses_sha256: sha256_hex(senses.as_bytes()),
        };
        fs::write(dir.join("synsets.jsonl"), synsets)?;
        fs::write(dir.join("senses.tsv"), senses)?;
        let mut json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        json.push('\n');
        fs::write(dir.join("manifest.json"), json)?;
        Ok(manifest)
    }

    /// Loads a persisted store.
    pub fn load(dir: &Path) -> Result<Self, WordNetError> {
        let err = |message: String| WordNetError::Store { path: dir.display().to_string(), message };
        let manifest: LexicalManifest = serde_json::from_str(
            &fs::read_to_string(dir.join("manifest.json")).map_err(|e| err(e.to_string()))?,
        )
        .map_err(|e| err(e.to_string()))?;
        if manifest.format != LEXICAL_FORMAT || manifest.version != LEXICAL_VERSION {
            return Err(err(format!("unsupported format {} v{}", manifest.format, manifest.version)));
        }
        let synsets = fs::read_to_string(dir.join("synsets.jsonl")).map_err(|e| err(e.to_string()))?;
        let senses = fs::read_to_string(dir.join("senses.tsv")).map_err(|e| err(e.to_string()))?;
        if sha256_hex(synsets.as_bytes()) != manifest.synsets_sha256
            || sha256_hex(senses.as_bytes()) != manifest.senses_sha256
        {
            return Err(err("digest mismatch".into()));
        }
        let parsed = synsets
            .lines()
            .map(serde_json::from_str::<Synset>)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| err(e.to_string()))?;
        let mut order = Vec::new();
        for line in senses.lines() {
            let mut f = line.split('\t');
            let lemma = f.next().unwrap_or_default().to_string();
            let ids = f.map(str::parse::<SynsetId>).collect::<Result<Vec<_>, _>>().map_err(err)?;
            order.push((lemma, ids));
        }
        let store = LexicalStore::with_index(parsed, order);
        if store.len() != manifest.n_synsets || store.lemma_index.len() != manifest.n_lemmas {
            return Err(err("synset or lemma count does not match contents".into()));
        }
        Ok(store)
    }

    /// Loads either a persisted store (directory with `manifest.json`) or a
    /// raw WordNet database directory.
    pub fn open(dir: &Path) -> Result<Self, WordNetError> {
        if dir.join("manifest.json").is_file() {
            Self::load(dir)
        } else {
            Self::load_wordnet(dir)
        }
    }
}

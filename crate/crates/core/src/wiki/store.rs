//! On-disk layout of a [`GraphStore`]:
//!
//! ```text
//! <dir>/manifest.json   format name, version, counts, ingest stats, file digests
//! <dir>/articles.jsonl  one article per line, in id order
//! <dir>/aliases.tsv     alias<TAB>canonical title, sorted by alias
//! ```
//!
//! Output bytes depend only on the store contents.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ArticleRecord, GraphStore, IngestStats, WikiError};
use crate::digest::sha256_hex;

pub const STORE_FORMAT: &str = "wwqe-graph-store";
pub const STORE_VERSION: u32 = 1;

const ARTICLES_FILE: &str = "articles.jsonl";
const ALIASES_FILE: &str = "aliases.tsv";
const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoreManifest {
    pub format: String,
    pub version: u32,
    pub n_articles: usize,
    pub n_aliases: usize,
    pub n_terms: usize,
    pub stats: IngestStats,
    pub articles_sha256: String,
    pub aliases_sha256: String,
}

impl GraphStore {
    /// Writes the store into `dir`, creating it if needed. Returns the manifest.
    pub fn save(&self, dir: &Path) -> Result<StoreManifest, WikiError> {
        fs::create_dir_all(dir)?;
        let mut articles = String::new();
        for a in &self.articles {
            let rec = ArticleRecord {
                title: a.title.clone(),
                display_title: a.display_title.clone(),
                body: a.body.clone(),
                link_targets: a.link_targets.clone(),
            };
            articles.push_str(&serde_json::to_string(&rec).expect("article serializes"));
            articles.push('\n');
        }
        let mut aliases = String::new();
        for (alias, target) in &self.aliases {
            aliases.push_str(alias);
            aliases.push('\t');
            aliases.push_str(target);
            aliases.push('\n');
        }
        let manifest = StoreManifest {
            format: STORE_FORMAT.to_string(),
            version: STORE_VERSION,
            n_articles: self.n_articles(),
            n_aliases: self.aliases.len(),
            n_terms: self.terms.len(),
            stats: self.stats.clone(),
            articles_sha256: sha256_hex(articles.as_bytes()),
            aliases_sha256: sha256_hex(aliases.as_bytes()),
        };
        fs::write(dir.join(ARTICLES_FILE), articles)?;
        fs::write(dir.join(ALIASES_FILE), aliases)?;
        let mut json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        json.push('\n');
        fs::write(dir.join(MANIFEST_FILE), json)?;
        Ok(manifest)
    }

    /// Loads a store written by [`GraphStore::save`], verifying format and digests.
    pub fn load(dir: &Path) -> Result<Self, WikiError> {
        let manifest_path = dir.join(MANIFEST_FILE);
        let err = |path: &Path, message: String| WikiError::Store { path: path.display().to_string(), message };
        let raw = fs::read_to_string(&manifest_path).map_err(|e| err(&manifest_path, e.to_string()))?;
        let manifest: StoreManifest = serde_json::from_str(&raw).map_err(|e| err(&manifest_path, e.to_string()))?;
        if manifest.format != STORE_FORMAT || manifest.version != STORE_VERSION {
            return Err(err(
                &manifest_path,
                format!("unsupported format {} v{}", manifest.format, manifest.version),
            ));
        }

        let articles_path = dir.join(ARTICLES_FILE);
        let articles = fs::read_to_string(&articles_path).map_err(|e| err(&articles_path, e.to_string()))?;
        if sha256_hex(articles.as_bytes()) != manifest.articles_sha256 {
            return Err(err(&articles_path, "digest mismatch".into()));
        }
        let aliases_path = dir.join(ALIASES_FILE);
        let aliases = fs::read_to_string(&aliases_path).map_err(|e| err(&aliases_path, e.to_string()))?;
        if sha256_hex(aliases.as_bytes()) != manifest.aliases_sha256 {
            return Err(err(&aliases_path, "digest mismatch".into()));
        }

        let mut records = Vec::with_capacity(manifest.n_articles);
        for (i, line) in articles.lines().enumerate() {
            let rec: ArticleRecord =
                serde_json::from_str(line).map_err(|e| err(&articles_path, format!("line {}: {e}", i + 1)))?;
            records.push(rec);
        }
        let mut pairs = Vec::with_capacity(manifest.n_aliases);
        for (i, line) in aliases.lines().enumerate() {
            let (a, t) = line
                .split_once('\t')
                .ok_or_else(|| err(&aliases_path, format!("line {}: expected alias<TAB>title", i + 1)))?;
            pairs.push((a.to_string(), t.to_string()));
        }
        let mut store = GraphStore::build(records, pairs, IngestStats::default())?;
        if store.n_articles() != manifest.n_articles || store.aliases.len() != manifest.n_aliases {
            return Err(err(&manifest_path, "article or alias count does not match contents".into()));
        }
        store.stats = manifest.stats;
        Ok(store)
    }
}

//! Lemma-indexed WordNet synset store and two-level synonym/hyponym expansion.

mod parse;
mod store;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::text::normalize_lemma;

pub use store::{LexicalManifest, LEXICAL_FORMAT, LEXICAL_VERSION};

#[derive(Debug, Error)]
pub enum WordNetError {
    #[error("{file}: missing WordNet database file")]
    Missing { file: String },
    #[error("{file}:{line}: {message}")]
    Corrupt { file: String, line: usize, message: String },
    #[error("lexical store {path}: {message}")]
    Store { path: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Pos {
    Noun,
    Verb,
    Adjective,
    Adverb,
}

impl Pos {
    pub const ALL: [Pos; 4] = [Pos::Noun, Pos::Verb, Pos::Adjective, Pos::Adverb];

    /// Suffix of the `index.*` / `data.*` database files.
    pub fn file_suffix(self) -> &'static str {
        match self {
            Pos::Noun => "noun",
            Pos::Verb => "verb",
            Pos::Adjective => "adj",
            Pos::Adverb => "adv",
        }
    }

    pub fn from_symbol(c: &str) -> Option<Pos> {
        match c {
            "n" => Some(Pos::Noun),
            "v" => Some(Pos::Verb),
            "a" | "s" => Some(Pos::Adjective),
            "r" => Some(Pos::Adverb),
            _ => None,
        }
    }

    fn symbol(self) -> char {
        match self {
            Pos::Noun => 'n',
            Pos::Verb => 'v',
            Pos::Adjective => 'a',
            Pos::Adverb => 'r',
        }
    }
}

/// Part of speech plus byte offset in the matching `data.*` file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SynsetId {
    pub pos: Pos,
    pub offset: u64,
}

impl fmt::Display for SynsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{:08}", self.pos.symbol(), self.offset)
    }
}

impl FromStr for SynsetId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (p, o) = s.split_once(':').ok_or_else(|| format!("bad synset id {s:?}"))?;
        let pos = Pos::from_symbol(p).ok_or_else(|| format!("bad part of speech in {s:?}"))?;
        let offset = o.parse().map_err(|_| format!("bad offset in {s:?}"))?;
        Ok(SynsetId { pos, offset })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Synset {
    pub id: SynsetId,
    /// Lemmas as written in the database (underscores for multiword entries).
    pub lemmas: Vec<String>,
    pub gloss: String,
    pub hyponyms: Vec<SynsetId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Relation {
    Synonym,
    Hyponym,
}

impl FromStr for Relation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "synonym" | "synonyms" => Ok(Relation::Synonym),
            "hyponym" | "hyponyms" => Ok(Relation::Hyponym),
            other => Err(format!("unknown relation {other:?}")),
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Synonym => "synonym",
            Relation::Hyponym => "hyponym",
        })
    }
}

#[derive(Debug, Clone, Default)]
pub struct LexicalStore {
    synsets: BTreeMap<SynsetId, Synset>,
    /// normalized lemma -> synsets in sense order
    lemma_index: HashMap<String, Vec<SynsetId>>,
}

impl LexicalStore {
    /// Loads a WordNet database directory (`index.*` and `data.*` for every
    /// part of speech).
    pub fn load_wordnet(dir: &Path) -> Result<Self, WordNetError> {
        parse::load_dir(dir)
    }

    /// Builds a store from synsets; the lemma index follows synset order.
    /// Hyponym pointers to unknown or cross-POS synsets are dropped.
    pub fn from_synsets(synsets: Vec<Synset>) -> Self {
        Self::with_index(synsets, Vec::new())
    }

    /// `sense_order` lists `(lemma, synsets)` entries whose order takes
    /// precedence; every synset lemma is indexed regardless.
    pub(crate) fn with_index(synsets: Vec<Synset>, sense_order: Vec<(String, Vec<SynsetId>)>) -> Self {
        let mut map: BTreeMap<SynsetId, Synset> = synsets.into_iter().map(|s| (s.id, s)).collect();
        let ids: BTreeSet<SynsetId> = map.keys().copied().collect();
        for s in map.values_mut() {
            let pos = s.id.pos;
            s.hyponyms.retain(|h| h.pos == pos && ids.contains(h));
        }
        let mut lemma_index: HashMap<String, Vec<SynsetId>> = HashMap::new();
        for (lemma, senses) in sense_order {
            let entry = lemma_index.entry(normalize_lemma(&lemma)).or_default();
            for id in senses {
                if ids.contains(&id) && !entry.contains(&id) {
                    entry.push(id);
                }
            }
        }
        for s in map.values() {
            for lemma in &s.lemmas {
                let entry = lemma_index.entry(normalize_lemma(lemma)).or_default();
                if !entry.contains(&s.id) {
                    entry.push(s.id);
                }
            }
        }
        lemma_index.retain(|_, v| !v.is_empty());
        Self { synsets: map, lemma_index }
    }

    pub fn len(&self) -> usize {
        self.synsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.synsets.is_empty()
    }

    pub fn synset(&self, id: SynsetId) -> Option<&Synset> {
        self.synsets.get(&id)
    }

    pub fn synsets(&self) -> impl Iterator<Item = &Synset> {
        self.synsets.values()
    }

    /// Every normalized lemma in the index, sorted.
    pub fn lemmas(&self) -> Vec<&str> {
        let mut v: Vec<&str> = self.lemma_index.keys().map(String::as_str).collect();
        v.sort_unstable();
        v
    }

    /// All senses of `unit` across parts of speech; case, underscores and
    /// spacing are ignored.
    pub fn lookup(&self, unit: &str) -> Vec<&Synset> {
        self.lemma_index
            .get(&normalize_lemma(unit))
            .map(|ids| ids.iter().filter_map(|id| self.synsets.get(id)).collect())
            .unwrap_or_default()
    }

    /// Normalized lemmas one `relation` step away from the word `unit`:
    /// lemmas of its synsets (synonym) or of their hyponym synsets (hyponym).
    /// May contain `unit` itself.
    pub fn related(&self, unit: &str, relation: Relation) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for s in self.lookup(unit) {
            match relation {
                Relation::Synonym => out.extend(s.lemmas.iter().map(|l| normalize_lemma(l))),
                Relation::Hyponym => {
                    for h in s.hyponyms.iter().filter_map(|h| self.synsets.get(h)) {
                        out.extend(h.lemmas.iter().map(|l| normalize_lemma(l)));
                    }
                }
            }
        }
        out
    }

    /// Level-one synonyms of `unit`, the unit itself removed.
    pub fn synonyms(&self, unit: &str) -> BTreeSet<String> {
        let mut s = self.related(unit, Relation::Synonym);
        s.remove(&normalize_lemma(unit));
        s
    }

    /// Union of the level-one related terms of `unit` and the level-one
    /// related terms of each of those, with `unit` removed. Multiword lemmas
    /// are returned space-joined and lowercase.
    pub fn two_level_terms(&self, unit: &str, relation: Relation) -> BTreeSet<String> {
        let me = normalize_lemma(unit);
        let mut level1 = self.related(unit, relation);
        level1.remove(&me);
        let mut out = level1.clone();
        for term in &level1 {
            out.extend(self.related(term, relation));
        }
        out.remove(&me);
        out
    }
}

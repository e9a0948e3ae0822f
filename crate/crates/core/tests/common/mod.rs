//! Fixture paths and brute-force reference computations. Nothing here calls
//! the scoring code under test; counts are taken from article text directly.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use wwqe_core::wiki::GraphStore;
use wwqe_core::wordnet::{LexicalStore, Relation};

pub mod checks;
pub mod reference;

/// Core fixtures, reachable from any crate in the workspace.
pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

pub fn load_graph(name: &str) -> GraphStore {
    GraphStore::ingest(BufReader::new(File::open(fixture(name)).unwrap())).unwrap()
}

pub fn load_wordnet() -> LexicalStore {
    LexicalStore::load_wordnet(&fixture("wordnet")).unwrap()
}

/// Lowercased maximal alphanumeric runs.
pub fn oracle_tokens(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in text.chars() {
        if ch.is_alphanumeric() {
            cur.extend(ch.to_lowercase());
        } else if !cur.is_empty() {
            out.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// Brute-force corpus view: title -> token stream.
pub struct OracleCorpus {
    pub docs: BTreeMap<String, Vec<String>>,
}

impl OracleCorpus {
    pub fn from_graph(g: &GraphStore) -> Self {
        let docs = g.articles().iter().map(|a| (a.title.clone(), oracle_tokens(&a.body))).collect();
        Self { docs }
    }

    pub fn n(&self) -> usize {
        self.docs.len()
    }

    /// Occurrences of the (possibly multi-word) term in one article.
    pub fn count(&self, title: &str, term: &str) -> usize {
        let needle = oracle_tokens(term);
        let hay = &self.docs[title];
        if needle.is_empty() || needle.len() > hay.len() {
            return 0;
        }
        let mut c = 0;
        for i in 0..=hay.len() - needle.len() {
            if (0..needle.len()).all(|j| hay[i + j] == needle[j]) {
                c += 1;
            }
        }
        c
    }

    pub fn tf(&self, title: &str, terms: &[&str]) -> usize {
        let distinct: BTreeSet<Vec<String>> = terms.iter().map(|t| oracle_tokens(t)).collect();
        distinct.iter().map(|toks| self.count(title, &toks.join(" "))).sum()
    }

    pub fn df(&self, term: &str) -> usize {
        self.docs.keys().filter(|t| self.count(t, term) > 0).count()
    }

    pub fn idf(&self, term: &str) -> f64 {
        (self.n() as f64 / self.df(term).max(1) as f64).ln()
    }

    /// tf(term, a_t) * ln(T / tf) with T summed over `a_q` titles.
    pub fn weight(&self, term: &str, a_t: &str, a_q: &[&str]) -> f64 {
        let tf = self.count(a_t, term) as f64;
        if tf == 0.0 {
            return 0.0;
        }
        let total: usize = a_q.iter().map(|a| self.count(a, term)).sum();
        tf * (total as f64 / tf).ln()
    }

    pub fn correlation(&self, candidate: &str, units: &[(&str, &str)], a_q: &[&str]) -> f64 {
        let sum: f64 = units
            .iter()
            .map(|(unit, article)| self.weight(unit, article, a_q) * self.weight(candidate, article, a_q))
            .sum();
        sum / units.len() as f64
    }
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    if a == b {
        return true;
    }
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// The fixture database as (lemmas, hyponym row indices), copied by hand.
pub const SYNSETS: &[(&[&str], &[usize])] = &[
    (&["bird", "fowl"], &[2]),
    (&["fowl", "domestic fowl", "poultry"], &[]),
    (&["passerine", "passeriform bird"], &[3]),
    (&["songbird", "songster"], &[]),
    (&["swine", "pig"], &[]),
    (&["pig", "hog", "grunter"], &[]),
    (&["swine flu", "swine influenza"], &[]),
    (&["vaccine", "vaccinum"], &[]),
    (&["influenza", "flu", "grippe"], &[6]),
    (&["bird", "birdwatch"], &[]),
];

pub fn oracle_step(word: &str, rel: Relation) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for (lemmas, hypos) in SYNSETS {
        if !lemmas.contains(&word) {
            continue;
        }
        match rel {
            Relation::Synonym => out.extend(lemmas.iter().map(|s| s.to_string())),
            Relation::Hyponym => {
                for &h in *hypos {
                    out.extend(SYNSETS[h].0.iter().map(|s| s.to_string()));
                }
            }
        }
    }
    out
}

pub fn oracle_two_level(word: &str, rel: Relation) -> BTreeSet<String> {
    let l1: BTreeSet<String> = oracle_step(word, rel).into_iter().filter(|w| w != word).collect();
    let mut all = l1.clone();
    for w in &l1 {
        all.extend(oracle_step(w, rel));
    }
    all.remove(word);
    all
}

/// Level-one synonyms with the word removed.
pub fn oracle_synonyms(word: &str) -> BTreeSet<String> {
    let word = word.to_lowercase();
    oracle_step(&word, Relation::Synonym).into_iter().filter(|w| *w != word).collect()
}

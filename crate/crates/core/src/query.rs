//! Query preprocessing: tokenization, part-of-speech tagging and extraction
//! of individual content terms and contiguous phrases.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Penn Treebank tagset accepted by taggers and pre-tagged input.
pub const PENN_TAGS: &[&str] = &[
    "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "LS", "MD", "NN", "NNS", "NNP", "NNPS", "PDT", "POS",
    "PRP", "PRP$", "RB", "RBR", "RBS", "RP", "SYM", "TO", "UH", "VB", "VBD", "VBG", "VBN", "VBP", "VBZ", "WDT", "WP",
    "WP$", "WRB",
];

const DEFAULT_LEXICON: &str = include_str!("../data/lexicon.txt");

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LexiconError {
    #[error("lexicon line {line}: expected \"word tag\"")]
    Syntax { line: usize },
    #[error("lexicon line {line}: unknown tag {tag:?}")]
    UnknownTag { line: usize, tag: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedToken {
    pub surface: String,
    pub normalized: String,
    pub tag: String,
}

impl TaggedToken {
    pub fn new(surface: &str, tag: &str) -> Self {
        Self { surface: surface.to_string(), normalized: surface.to_lowercase(), tag: tag.to_string() }
    }

    /// Nouns, adjectives, verbs and cardinal numbers.
    pub fn is_content(&self) -> bool {
        let t = self.tag.as_str();
        t.starts_with("NN") || t.starts_with("JJ") || t.starts_with("VB") || t == "CD"
    }
}

/// Order-preserving split on whitespace and punctuation.
pub fn tokenize(text: &str) -> Vec<String> {
    crate::text::words(text).map(str::to_string).collect()
}

pub trait Tagger {
    /// Assigns exactly one tag to each token.
    fn tag(&self, tokens: &[String]) -> Vec<TaggedToken>;
}

/// Lexicon lookup with suffix-rule fallback for unknown words.
#[derive(Debug, Clone, Default)]
pub struct LexiconTagger {
    lexicon: HashMap<String, String>,
}

impl LexiconTagger {
    /// Tagger over the bundled English lexicon.
    pub fn english() -> Self {
        Self::from_lexicon(DEFAULT_LEXICON).expect("bundled lexicon is valid")
    }

    /// Parses a plain-text lexicon: one `word tag` pair per line, `#` comments.
    pub fn from_lexicon(text: &str) -> Result<Self, LexiconError> {
        let mut lexicon = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut f = line.split_whitespace();
            let (Some(word), Some(tag), None) = (f.next(), f.next(), f.next()) else {
                return Err(LexiconError::Syntax { line: i + 1 });
            };
            if !PENN_TAGS.contains(&tag) {
                return Err(LexiconError::UnknownTag { line: i + 1, tag: tag.to_string() });
            }
            lexicon.insert(word.to_lowercase(), tag.to_string());
        }
        Ok(Self { lexicon })
    }

    /// Adds or replaces entries from another lexicon text.
    pub fn extend_from(&mut self, text: &str) -> Result<(), LexiconError> {
        let other = Self::from_lexicon(text)?;
        self.lexicon.extend(other.lexicon);
        Ok(())
    }

    fn guess(word: &str) -> &'static str {
        if word.chars().all(|c| c.is_numeric()) {
            return "CD";
        }
        if word.chars().next().is_some_and(char::is_uppercase) {
            return "NNP";
        }
        let w = word.to_lowercase();
        let n = w.chars().count();
        if n > 4 && w.ends_with("ing") {
            "VBG"
        } else if n > 3 && w.ends_with("ed") {
            "VBN"
        } else if n > 3 && w.ends_with("ly") {
            "RB"
        } else if ["ous", "ful", "ive", "able", "ible", "less", "ical", "ic", "al"].iter().any(|s| n > s.len() + 2 && w.ends_with(s)) {
            "JJ"
        } else if n > 3 && w.ends_with('s') && !w.ends_with("ss") {
            "NNS"
        } else {
            "NN"
        }
    }
}

impl Tagger for LexiconTagger {
    fn tag(&self, tokens: &[String]) -> Vec<TaggedToken> {
        tokens
            .iter()
            .map(|t| {
                let tag = self.lexicon.get(&t.to_lowercase()).map(String::as_str).unwrap_or_else(|| Self::guess(t));
                TaggedToken::new(t, tag)
            })
            .collect()
    }
}

/// Parses `word_TAG word_TAG ...`. Returns `None` unless every token carries a
/// Penn tag.
pub fn parse_pretagged(text: &str) -> Option<Vec<TaggedToken>> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    if parts.is_empty() {
        return None;
    }
    parts
        .iter()
        .map(|p| {
            let (word, tag) = p.rsplit_once('_')?;
            (!word.is_empty() && PENN_TAGS.contains(&tag)).then(|| TaggedToken::new(word, tag))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UnitKind {
    Individual,
    Phrase,
}

/// One keyword unit: a content term or a phrase of 2+ consecutive content terms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Unit {
    pub text: String,
    pub kind: UnitKind,
    /// Index of the first word among the query tokens.
    pub start: usize,
    pub len: usize,
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeywordSet {
    pub individuals: Vec<String>,
    pub phrases: Vec<String>,
    /// Individuals and phrases in document order: by end position, shorter first.
    pub all_units: Vec<Unit>,
}

impl KeywordSet {
    pub fn is_empty(&self) -> bool {
        self.all_units.is_empty()
    }

    /// Whether `term` (case-insensitive) is one of the units.
    pub fn contains(&self, term: &str) -> bool {
        let t = crate::text::normalize_lemma(term);
        self.all_units.iter().any(|u| crate::text::normalize_lemma(&u.text) == t)
    }
}

/// Builds the keyword set: every content word, plus every contiguous
/// sub-run of length two or more inside each maximal run of content words.
pub fn extract_keywords(tagged: &[TaggedToken]) -> KeywordSet {
    let mut set = KeywordSet::default();
    let mut seen_ind = HashSet::new();
    let mut seen_phr = HashSet::new();
    let mut run_start: Option<usize> = None;
    for (end, tok) in tagged.iter().enumerate() {
        if !tok.is_content() {
            run_start = None;
            continue;
        }
        let start = *run_start.get_or_insert(end);
        if seen_ind.insert(tok.normalized.clone()) {
            set.individuals.push(tok.surface.clone());
            set.all_units.push(Unit { text: tok.surface.clone(), kind: UnitKind::Individual, start: end, len: 1 });
        }
        for s in (start..end).rev() {
            let text = tagged[s..=end].iter().map(|t| t.surface.as_str()).collect::<Vec<_>>().join(" ");
            if seen_phr.insert(text.to_lowercase()) {
                set.phrases.push(text.clone());
                set.all_units.push(Unit { text, kind: UnitKind::Phrase, start: s, len: end - s + 1 });
            }
        }
    }
    set
}

/// Raw title or pre-tagged string to keyword set.
pub fn preprocess(raw: &str, tagger: &dyn Tagger) -> KeywordSet {
    let tagged = parse_pretagged(raw).unwrap_or_else(|| tagger.tag(&tokenize(raw)));
    extract_keywords(&tagged)
}

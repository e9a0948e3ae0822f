//! Expansion-term generation, two-stage scoring and final selection.
//!
//! Candidates come from the Wikipedia link graph (articles that are both
//! out-links and in-links of a query unit's article) and from two-level
//! WordNet traversal. Each source is scored on its own and truncated to
//! `n_intermediate` terms; the union is then re-scored against the whole
//! query by correlation and the best `m_final` terms are kept.

pub mod report;
mod scoring;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::query::{preprocess, KeywordSet, Tagger, UnitKind};
use crate::text::normalize_lemma;
use crate::wiki::{GraphStore, WikiError};
use crate::wordnet::{LexicalStore, Relation};

pub use scoring::{
    article_term_weight, correlation_score, inlink_score, query_articles, wiki_candidates, wordnet_candidates,
    wordnet_score, WordnetScore,
};

#[derive(Debug, Error)]
pub enum ExpansionError {
    #[error("invalid expansion parameters: {0}")]
    InvalidParams(String),
    #[error("candidate {0:?} does not resolve to an article")]
    UnresolvableCandidate(String),
    #[error("article {0} is not among the query articles")]
    ArticleNotInQuerySet(u32),
    #[error("correlation undefined: no query term has a Wikipedia article")]
    CorrelationUndefined,
    #[error(transparent)]
    Wiki(#[from] WikiError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Source {
    Wiki,
    WordNet,
    /// Proposed by both sources.
    Both,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Wiki => "wiki",
            Source::WordNet => "wordnet",
            Source::Both => "both",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionParams {
    /// Terms kept per source after stage-one scoring.
    pub n_intermediate: usize,
    /// Terms kept after correlation re-scoring.
    pub m_final: usize,
    pub relations: BTreeSet<Relation>,
    /// Multiplier for expansion terms relative to original terms (weight 1).
    pub expansion_weight: f64,
    /// Multiplier on stage-one scores of candidates produced by phrases.
    pub phrase_boost: f64,
    pub use_wiki: bool,
    pub use_wordnet: bool,
}

impl Default for ExpansionParams {
    fn default() -> Self {
        Self {
            n_intermediate: 100,
            m_final: 30,
            relations: [Relation::Synonym, Relation::Hyponym].into(),
            expansion_weight: 0.5,
            phrase_boost: 1.0,
            use_wiki: true,
            use_wordnet: true,
        }
    }
}

impl ExpansionParams {
    pub fn validate(&self) -> Result<(), ExpansionError> {
        let bad = |m: &str| Err(ExpansionError::InvalidParams(m.to_string()));
        if self.m_final < 1 {
            return bad("m_final must be at least 1");
        }
        if self.m_final > 2 * self.n_intermediate {
            return bad("m_final must not exceed 2 * n_intermediate");
        }
        if !(self.expansion_weight.is_finite() && self.expansion_weight >= 0.0) {
            return bad("expansion_weight must be finite and non-negative");
        }
        if !(self.phrase_boost.is_finite() && self.phrase_boost > 0.0) {
            return bad("phrase_boost must be finite and positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionTerm {
    pub term: String,
    pub source: Source,
    /// Keyword unit that produced the term.
    pub origin: String,
    pub stage1_score: f64,
    pub correlation: f64,
    /// Weight in the final query.
    pub weight: f64,
}

/// A stage-one survivor from one source.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub term: String,
    pub origin: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpandedQuery {
    pub query: String,
    pub original_units: KeywordSet,
    /// Final terms, correlation descending then term ascending.
    pub terms: Vec<ExpansionTerm>,
    /// Top `n_intermediate` Wikipedia candidates by in-link score.
    pub wiki_pool: Vec<Candidate>,
    /// Top `n_intermediate` WordNet candidates by tf-idf score.
    pub wordnet_pool: Vec<Candidate>,
    /// Set when expansion was skipped, with the reason.
    pub note: Option<String>,
}

impl ExpandedQuery {
    fn passthrough(query: &str, units: KeywordSet, note: Option<String>) -> Self {
        Self { query: query.to_string(), original_units: units, terms: Vec::new(), wiki_pool: Vec::new(), wordnet_pool: Vec::new(), note }
    }

    /// Original individual terms at weight 1 followed by the expansion terms.
    pub fn weighted_terms(&self) -> Vec<(String, f64)> {
        let mut out: Vec<(String, f64)> =
            self.original_units.individuals.iter().map(|t| (t.to_lowercase(), 1.0)).collect();
        out.extend(self.terms.iter().map(|t| (t.term.clone(), t.weight)));
        out
    }

    /// The first `m` final terms, reweighted as if `m_final` had been `m`.
    pub fn truncated(&self, m: usize, expansion_weight: f64) -> ExpandedQuery {
        let mut q = self.clone();
        q.terms.truncate(m);
        assign_weights(&mut q.terms, expansion_weight);
        q
    }
}

fn by_score_then_term(a: (f64, &str), b: (f64, &str)) -> Ordering {
    b.0.total_cmp(&a.0).then_with(|| a.1.cmp(b.1))
}

/// Keeps the best-scoring `n` candidates; ties go to the smaller term.
pub fn top_n(mut pool: Vec<Candidate>, n: usize) -> Vec<Candidate> {
    pool.sort_by(|a, b| by_score_then_term((a.score, &a.term), (b.score, &b.term)));
    pool.truncate(n);
    pool
}

fn assign_weights(terms: &mut [ExpansionTerm], expansion_weight: f64) {
    let max = terms.iter().map(|t| t.correlation).fold(0.0, f64::max);
    for t in terms {
        t.weight = if max > 0.0 { expansion_weight * t.correlation / max } else { 0.0 };
    }
}

/// Runs the full pipeline on one raw query.
pub fn expand(
    graph: &GraphStore,
    wn: &LexicalStore,
    tagger: &dyn Tagger,
    raw_query: &str,
    params: &ExpansionParams,
) -> Result<ExpandedQuery, ExpansionError> {
    params.validate()?;
    let units = preprocess(raw_query, tagger);
    if units.is_empty() {
        return Ok(ExpandedQuery::passthrough(raw_query, units, Some("no content terms".into())));
    }
    let excluded: HashSet<String> = units.all_units.iter().map(|u| normalize_lemma(&u.text)).collect();
    let boost = |kind: UnitKind| if kind == UnitKind::Phrase { params.phrase_boost } else { 1.0 };

    let mut wiki_pool = Vec::new();
    if params.use_wiki {
        let mut best: BTreeMap<String, Candidate> = BTreeMap::new();
        for unit in &units.all_units {
            let synonyms = wn.synonyms(&unit.text);
            for cand in wiki_candidates(graph, &unit.text) {
                if excluded.contains(&normalize_lemma(&cand)) {
                    continue;
                }
                let score = scoring::inlink_score_with(graph, &unit.text, &synonyms, &cand)? * boost(unit.kind);
                keep_best(&mut best, Candidate { term: cand, origin: unit.text.clone(), score });
            }
        }
        wiki_pool = top_n(best.into_values().collect(), params.n_intermediate);
    }

    let mut wordnet_pool = Vec::new();
    if params.use_wordnet && !params.relations.is_empty() {
        let kinds: BTreeMap<&str, UnitKind> = units.all_units.iter().map(|u| (u.text.as_str(), u.kind)).collect();
        let mut best: BTreeMap<String, Candidate> = BTreeMap::new();
        for (origin, term) in wordnet_candidates(wn, &units, &params.relations) {
            if excluded.contains(&normalize_lemma(&term)) {
                continue;
            }
            let score = wordnet_score(graph, &term, &origin)?.value * boost(kinds[origin.as_str()]);
            keep_best(&mut best, Candidate { term, origin, score });
        }
        wordnet_pool = top_n(best.into_values().collect(), params.n_intermediate);
    }

    let mut merged: BTreeMap<String, ExpansionTerm> = BTreeMap::new();
    for (source, pool) in [(Source::Wiki, &wiki_pool), (Source::WordNet, &wordnet_pool)] {
        for c in pool {
            merged
                .entry(c.term.clone())
                .and_modify(|t| {
                    t.source = Source::Both;
                    if c.score > t.stage1_score {
                        t.stage1_score = c.score;
                        t.origin = c.origin.clone();
                    }
                })
                .or_insert_with(|| ExpansionTerm {
                    term: c.term.clone(),
                    source,
                    origin: c.origin.clone(),
                    stage1_score: c.score,
                    correlation: 0.0,
                    weight: 0.0,
                });
        }
    }

    let individuals: Vec<String> = units.individuals.clone();
    let a_q = query_articles(graph, &individuals);
    if a_q.is_empty() {
        let note = if merged.is_empty() { None } else { Some(ExpansionError::CorrelationUndefined.to_string()) };
        let mut q = ExpandedQuery::passthrough(raw_query, units, note);
        q.wiki_pool = wiki_pool;
        q.wordnet_pool = wordnet_pool;
        return Ok(q);
    }

    let mut terms: Vec<ExpansionTerm> = merged.into_values().collect();
    let correlations: Vec<Result<f64, ExpansionError>> =
        terms.par_iter().map(|t| correlation_score(graph, &t.term, &individuals, &a_q)).collect();
    for (t, c) in terms.iter_mut().zip(correlations) {
        t.correlation = c?;
    }
    terms.sort_by(|a, b| by_score_then_term((a.correlation, &a.term), (b.correlation, &b.term)));
    terms.truncate(params.m_final);
    assign_weights(&mut terms, params.expansion_weight);

    Ok(ExpandedQuery { query: raw_query.to_string(), original_units: units, terms, wiki_pool, wordnet_pool, note: None })
}

fn keep_best(best: &mut BTreeMap<String, Candidate>, c: Candidate) {
    match best.get(&c.term) {
        Some(existing) if existing.score >= c.score => {}
        _ => {
            best.insert(c.term.clone(), c);
        }
    }
}

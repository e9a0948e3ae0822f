//! Candidate generation and the stage-one / correlation scores.

use std::collections::{BTreeSet, HashSet};

use super::ExpansionError;
use crate::query::{KeywordSet, UnitKind};
use crate::text::{normalize_lemma, tokens};
use crate::wiki::{ArticleId, GraphStore};
use crate::wordnet::{LexicalStore, Relation};

/// Titles of articles that are both an out-link and an in-link of the
/// article `unit` resolves to (redirects honored). Empty when unresolvable.
pub fn wiki_candidates(graph: &GraphStore, unit: &str) -> BTreeSet<String> {
    let Some(a) = graph.resolve_title(unit) else { return BTreeSet::new() };
    let (Ok(outs), Ok(ins)) = (graph.out_links(a), graph.in_links(a)) else { return BTreeSet::new() };
    let ins: HashSet<ArticleId> = ins.iter().copied().collect();
    outs.iter()
        .filter(|x| ins.contains(x))
        .filter_map(|x| graph.title(*x).ok().map(str::to_string))
        .collect()
}

/// In-link score: tf of `unit` and its level-one WordNet synonyms in the
/// candidate article, times the idf of the candidate title over the store.
pub fn inlink_score(graph: &GraphStore, wn: &LexicalStore, unit: &str, candidate: &str) -> Result<f64, ExpansionError> {
    let synonyms = wn.synonyms(unit);
    inlink_score_with(graph, unit, &synonyms, candidate)
}

pub(crate) fn inlink_score_with(
    graph: &GraphStore,
    unit: &str,
    synonyms: &BTreeSet<String>,
    candidate: &str,
) -> Result<f64, ExpansionError> {
    let article = graph
        .resolve_title(candidate)
        .ok_or_else(|| ExpansionError::UnresolvableCandidate(candidate.to_string()))?;
    let title = graph.title(article)?;
    let terms = std::iter::once(normalize_lemma(unit)).chain(synonyms.iter().cloned());
    let tf = graph.term_frequency(article, terms)?;
    Ok(tf as f64 * graph.idf(title).value)
}

/// `(origin unit, term)` pairs from WordNet. Phrases are expanded when
/// WordNet knows them; an individual term is expanded unless some phrase
/// containing it was found in WordNet.
pub fn wordnet_candidates(
    wn: &LexicalStore,
    keywords: &KeywordSet,
    relations: &BTreeSet<Relation>,
) -> BTreeSet<(String, String)> {
    let mut out = BTreeSet::new();
    let mut covered: HashSet<String> = HashSet::new();
    for unit in keywords.all_units.iter().filter(|u| u.kind == UnitKind::Phrase) {
        if wn.lookup(&unit.text).is_empty() {
            continue;
        }
        covered.extend(tokens(&unit.text));
        for rel in relations {
            for term in wn.two_level_terms(&unit.text, *rel) {
                out.insert((unit.text.clone(), term));
            }
        }
    }
    for unit in keywords.all_units.iter().filter(|u| u.kind == UnitKind::Individual) {
        if covered.contains(&unit.text.to_lowercase()) {
            continue;
        }
        for rel in relations {
            for term in wn.two_level_terms(&unit.text, *rel) {
                out.insert((unit.text.clone(), term));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WordnetScore {
    pub value: f64,
    /// False when `unit` has no Wikipedia article; `value` is then 0.
    pub unit_has_article: bool,
}

/// tf of `candidate` in the article of `unit`, times the idf of `candidate`.
pub fn wordnet_score(graph: &GraphStore, candidate: &str, unit: &str) -> Result<WordnetScore, ExpansionError> {
    let Some(article) = graph.resolve_title(unit) else {
        return Ok(WordnetScore { value: 0.0, unit_has_article: false });
    };
    let tf = graph.term_frequency(article, [candidate])?;
    let value = if tf == 0 { 0.0 } else { tf as f64 * graph.idf(candidate).value };
    Ok(WordnetScore { value, unit_has_article: true })
}

/// Weight of `term` in `a_t`: its frequency there times
/// `ln(total frequency over a_q / frequency in a_t)`.
pub fn article_term_weight(
    graph: &GraphStore,
    term: &str,
    a_t: ArticleId,
    a_q: &BTreeSet<ArticleId>,
) -> Result<f64, ExpansionError> {
    if !a_q.contains(&a_t) {
        return Err(ExpansionError::ArticleNotInQuerySet(a_t.0));
    }
    let tf = graph.term_frequency(a_t, [term])?;
    if tf == 0 {
        return Ok(0.0);
    }
    let mut total = 0u64;
    for a in a_q {
        total += graph.term_frequency(*a, [term])?;
    }
    Ok(tf as f64 * (total as f64 / tf as f64).ln())
}

/// Articles of the resolvable `units`.
pub fn query_articles<S: AsRef<str>>(graph: &GraphStore, units: &[S]) -> BTreeSet<ArticleId> {
    units.iter().filter_map(|u| graph.resolve_title(u.as_ref())).collect()
}

/// Mean over resolvable query units `t` of `w(t, a_t) * w(candidate, a_t)`.
/// Units without an article are skipped and not counted.
pub fn correlation_score<S: AsRef<str>>(
    graph: &GraphStore,
    candidate: &str,
    query_units: &[S],
    a_q: &BTreeSet<ArticleId>,
) -> Result<f64, ExpansionError> {
    let mut sum = 0.0;
    let mut resolvable = 0usize;
    for unit in query_units {
        let unit = unit.as_ref();
        let Some(a_t) = graph.resolve_title(unit) else { continue };
        resolvable += 1;
        let w_unit = article_term_weight(graph, unit, a_t, a_q)?;
        if w_unit == 0.0 {
            continue;
        }
        sum += w_unit * article_term_weight(graph, candidate, a_t, a_q)?;
    }
    if resolvable == 0 {
        return Err(ExpansionError::CorrelationUndefined);
    }
    Ok(sum / resolvable as f64)
}

//! Wikipedia article store with a bidirectional link graph and term statistics.
//!
//! A [`GraphStore`] is built once, either from a dump stream
//! ([`GraphStore::ingest`]) or from a persisted store directory
//! ([`GraphStore::load`]), and is immutable afterwards.

mod dump;
pub mod markup;
mod store;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::BufRead;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::text::{self, normalize_title};

pub use dump::{read_pages, RawPage};
pub use store::{StoreManifest, STORE_FORMAT, STORE_VERSION};

/// Redirect chains longer than this are treated as broken.
const MAX_REDIRECT_HOPS: usize = 8;

#[derive(Debug, Error)]
pub enum WikiError {
    #[error("malformed dump XML at byte {offset}: {message}")]
    Xml { offset: usize, message: String },
    #[error("no content articles")]
    NoContentArticles,
    #[error("invalid article id {0}")]
    InvalidArticle(u32),
    #[error("empty term set")]
    EmptyTermSet,
    #[error("store {path}: {message}")]
    Store { path: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ArticleId(pub u32);

impl ArticleId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

type TermId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Article {
    pub id: ArticleId,
    /// Normalized title, unique within the store.
    pub title: String,
    /// Title as written in the dump.
    pub display_title: String,
    /// Markup-stripped text.
    pub body: String,
    /// Normalized link targets in wikitext order, before redirect resolution.
    pub link_targets: Vec<String>,
}

/// Counters collected while building a store.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestStats {
    pub pages: u64,
    pub articles: u64,
    pub redirects: u64,
    pub broken_redirects: u64,
    pub non_article_pages: u64,
    pub duplicate_titles: u64,
    pub links: u64,
    pub dangling_links: u64,
    pub self_links: u64,
}

/// Inverse document frequency together with the document frequency it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Idf {
    pub value: f64,
    pub df: usize,
    /// `df` was zero and `N / 1` was used instead.
    pub df_substituted: bool,
}

#[derive(Debug, Clone)]
pub struct GraphStore {
    articles: Vec<Article>,
    title_index: HashMap<String, ArticleId>,
    /// alias title -> canonical target title, only resolvable aliases
    aliases: BTreeMap<String, String>,
    out_adj: Vec<Vec<ArticleId>>,
    in_adj: Vec<Vec<ArticleId>>,
    vocab: HashMap<String, TermId>,
    terms: Vec<String>,
    streams: Vec<Vec<TermId>>,
    /// per article, (term, count) sorted by term
    counts: Vec<Vec<(TermId, u32)>>,
    /// per term, ascending ids of articles containing it
    postings: Vec<Vec<ArticleId>>,
    stats: IngestStats,
}

impl GraphStore {
    /// Parses a full dump stream into a store.
    pub fn ingest<R: BufRead>(dump: R) -> Result<Self, WikiError> {
        let pages = read_pages(dump)?;
        Self::from_pages(pages)
    }

    pub fn from_pages(pages: Vec<RawPage>) -> Result<Self, WikiError> {
        let mut stats = IngestStats { pages: pages.len() as u64, ..Default::default() };
        let mut content = Vec::new();
        let mut redirects = Vec::new();
        for page in pages {
            if page.ns != 0 {
                stats.non_article_pages += 1;
                continue;
            }
            let target = page
                .redirect
                .as_deref()
                .map(normalize_title)
                .filter(|t| !t.is_empty())
                .or_else(|| markup::redirect_target(&page.text));
            match target {
                Some(t) => {
                    stats.redirects += 1;
                    redirects.push((normalize_title(&page.title), t));
                }
                None => content.push(page),
            }
        }

        let rendered: Vec<markup::Rendered> = content.par_iter().map(|p| markup::render(&p.text)).collect();
        let mut seen = BTreeSet::new();
        let mut records = Vec::with_capacity(content.len());
        for (page, r) in content.into_iter().zip(rendered) {
            let title = normalize_title(&page.title);
            if title.is_empty() || !seen.insert(title.clone()) {
                stats.duplicate_titles += 1;
                continue;
            }
            records.push(ArticleRecord {
                title,
                display_title: page.title.trim().to_string(),
                body: r.body,
                link_targets: r.links,
            });
        }
        Self::build(records, redirects, stats)
    }

    /// Builds the store from already-rendered articles and raw redirect pairs.
    pub(crate) fn build(
        records: Vec<ArticleRecord>,
        redirects: Vec<(String, String)>,
        mut stats: IngestStats,
    ) -> Result<Self, WikiError> {
        if records.is_empty() {
            return Err(WikiError::NoContentArticles);
        }
        stats.articles = records.len() as u64;
        stats.broken_redirects = 0;
        stats.links = 0;
        stats.dangling_links = 0;
        stats.self_links = 0;

        let articles: Vec<Article> = records
            .into_iter()
            .enumerate()
            .map(|(i, r)| Article {
                id: ArticleId(i as u32),
                title: r.title,
                display_title: r.display_title,
                body: r.body,
                link_targets: r.link_targets,
            })
            .collect();

        let mut title_index: HashMap<String, ArticleId> =
            articles.iter().map(|a| (a.title.clone(), a.id)).collect();

        let redirect_map: HashMap<&str, &str> = redirects.iter().map(|(a, t)| (a.as_str(), t.as_str())).collect();
        let mut aliases = BTreeMap::new();
        for (alias, target) in &redirects {
            if title_index.contains_key(alias) {
                continue;
            }
            match follow_redirect(target, &title_index, &redirect_map) {
                Some(id) => {
                    aliases.insert(alias.clone(), articles[id.index()].title.clone());
                }
                None => stats.broken_redirects += 1,
            }
        }
        for (alias, target) in &aliases {
            let id = title_index[target];
            title_index.insert(alias.clone(), id);
        }

        let n = articles.len();
        let mut out_adj = Vec::with_capacity(n);
        for a in &articles {
            let mut set = BTreeSet::new();
            for t in &a.link_targets {
                stats.links += 1;
                match title_index.get(t) {
                    Some(&id) if id == a.id => stats.self_links += 1,
                    Some(&id) => {
                        set.insert(id);
                    }
                    None => stats.dangling_links += 1,
                }
            }
            out_adj.push(set.into_iter().collect::<Vec<_>>());
        }
        let mut in_adj = vec![Vec::new(); n];
        for (x, outs) in out_adj.iter().enumerate() {
            for y in outs {
                in_adj[y.index()].push(ArticleId(x as u32));
            }
        }

        let token_lists: Vec<Vec<String>> = articles.par_iter().map(|a| text::tokens(&a.body)).collect();
        let mut vocab: HashMap<String, TermId> = HashMap::new();
        let mut terms = Vec::new();
        let mut streams = Vec::with_capacity(n);
        for list in token_lists {
            let mut stream = Vec::with_capacity(list.len());
            for tok in list {
                let id = match vocab.get(&tok) {
                    Some(&id) => id,
                    None => {
                        let id = terms.len() as TermId;
                        terms.push(tok.clone());
                        vocab.insert(tok, id);
                        id
                    }
                };
                stream.push(id);
            }
            streams.push(stream);
        }
        let counts: Vec<Vec<(TermId, u32)>> = streams
            .par_iter()
            .map(|s| {
                let mut sorted = s.clone();
                sorted.sort_unstable();
                let mut out: Vec<(TermId, u32)> = Vec::new();
                for t in sorted {
                    match out.last_mut() {
                        Some((last, c)) if *last == t => *c += 1,
                        _ => out.push((t, 1)),
                    }
                }
                out
            })
            .collect();
        let mut postings = vec![Vec::new(); terms.len()];
        for (i, c) in counts.iter().enumerate() {
            for (t, _) in c {
                postings[*t as usize].push(ArticleId(i as u32));
            }
        }

        Ok(Self { articles, title_index, aliases, out_adj, in_adj, vocab, terms, streams, counts, postings, stats })
    }

    /// The number of content articles, redirects excluded.
    pub fn n_articles(&self) -> usize {
        self.articles.len()
    }

    pub fn stats(&self) -> &IngestStats {
        &self.stats
    }

    pub fn articles(&self) -> &[Article] {
        &self.articles
    }

    pub fn article(&self, id: ArticleId) -> Result<&Article, WikiError> {
        self.articles.get(id.index()).ok_or(WikiError::InvalidArticle(id.0))
    }

    pub fn title(&self, id: ArticleId) -> Result<&str, WikiError> {
        self.article(id).map(|a| a.title.as_str())
    }

    /// Redirect alias -> canonical title, sorted by alias.
    pub fn aliases(&self) -> &BTreeMap<String, String> {
        &self.aliases
    }

    /// Looks up a title after normalization; redirect aliases resolve to their target.
    pub fn resolve_title(&self, title: &str) -> Option<ArticleId> {
        self.title_index.get(&normalize_title(title)).copied()
    }

    /// O(x): redirect-resolved, deduplicated link targets, ascending by id.
    pub fn out_links(&self, x: ArticleId) -> Result<&[ArticleId], WikiError> {
        self.out_adj.get(x.index()).map(Vec::as_slice).ok_or(WikiError::InvalidArticle(x.0))
    }

    /// I(x): articles linking to `x`, ascending by id.
    pub fn in_links(&self, x: ArticleId) -> Result<&[ArticleId], WikiError> {
        self.in_adj.get(x.index()).map(Vec::as_slice).ok_or(WikiError::InvalidArticle(x.0))
    }

    /// Number of articles whose token stream contains `term`. Multi-word
    /// terms count articles with a contiguous match.
    pub fn df(&self, term: &str) -> usize {
        let Some(ids) = self.term_ids(term) else { return 0 };
        match ids.len() {
            0 => 0,
            1 => self.postings[ids[0] as usize].len(),
            _ => {
                let rarest = ids.iter().min_by_key(|t| self.postings[**t as usize].len()).unwrap();
                self.postings[*rarest as usize]
                    .iter()
                    .filter(|a| text::count_sequence(&self.streams[a.index()], &ids) > 0)
                    .count()
            }
        }
    }

    /// Natural-log idf over the whole store; unseen terms use df = 1.
    pub fn idf(&self, term: &str) -> Idf {
        let df = self.df(term);
        let n = self.n_articles() as f64;
        let value = (n / df.max(1) as f64).ln();
        Idf { value, df, df_substituted: df == 0 }
    }

    /// Occurrences of a single term (possibly multi-word) in article `x`.
    pub fn count(&self, x: ArticleId, term: &str) -> Result<u64, WikiError> {
        let stream = self.streams.get(x.index()).ok_or(WikiError::InvalidArticle(x.0))?;
        let Some(ids) = self.term_ids(term) else { return Ok(0) };
        Ok(match ids.len() {
            0 => 0,
            1 => {
                let c = &self.counts[x.index()];
                c.binary_search_by_key(&ids[0], |(t, _)| *t).map_or(0, |i| c[i].1 as u64)
            }
            _ => text::count_sequence(stream, &ids) as u64,
        })
    }

    /// Summed occurrences of every distinct term in `terms` inside article `x`.
    pub fn term_frequency<I, S>(&self, x: ArticleId, terms: I) -> Result<u64, WikiError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        self.article(x)?;
        let distinct: BTreeSet<Vec<String>> = terms.into_iter().map(|t| text::tokens(t.as_ref())).collect();
        if distinct.is_empty() {
            return Err(WikiError::EmptyTermSet);
        }
        let mut total = 0;
        for toks in distinct {
            total += self.count(x, &toks.join(" "))?;
        }
        Ok(total)
    }

    /// Document frequency table over single tokens, sorted by term.
    pub fn df_table(&self) -> BTreeMap<&str, usize> {
        self.terms.iter().zip(&self.postings).map(|(t, p)| (t.as_str(), p.len())).collect()
    }

    /// `None` when some token of `term` never occurs in the store.
    fn term_ids(&self, term: &str) -> Option<Vec<TermId>> {
        text::tokens(term).iter().map(|t| self.vocab.get(t).copied()).collect()
    }
}

fn follow_redirect(
    target: &str,
    titles: &HashMap<String, ArticleId>,
    redirects: &HashMap<&str, &str>,
) -> Option<ArticleId> {
    let mut current = target;
    for _ in 0..MAX_REDIRECT_HOPS {
        if let Some(&id) = titles.get(current) {
            return Some(id);
        }
        current = redirects.get(current)?;
    }
    None
}

/// Persisted form of one article.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub(crate) struct ArticleRecord {
    pub title: String,
    pub display_title: String,
    pub body: String,
    pub link_targets: Vec<String>,
}

//! Topic, qrels and run file formats.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::EvalError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topic {
    pub id: u32,
    pub title: String,
}

fn line_of(text: &str, byte: usize) -> usize {
    text[..byte].matches('\n').count() + 1
}

/// Value following `tag` up to the next tag or the end of `block`.
fn field<'a>(block: &'a str, tag: &str) -> Option<&'a str> {
    let s = block.find(tag)? + tag.len();
    let rest = &block[s..];
    Some(rest[..rest.find('<').unwrap_or(rest.len())].trim())
}

/// Reads `<top>` blocks, keeping `<num>` and `<title>`. Accepts both closed
/// tags and the classic TREC form `<num> Number: 126`.
pub fn parse_topics(text: &str) -> Result<Vec<Topic>, EvalError> {
    let mut topics = Vec::new();
    let mut ids = BTreeSet::new();
    let mut pos = 0;
    while let Some(off) = text[pos..].find("<top>") {
        let start = pos + off;
        let line = line_of(text, start);
        let err = |message: String| EvalError::Topics { line, message };
        let end = text[start..].find("</top>").map(|e| start + e).ok_or_else(|| err("<top> without </top>".into()))?;
        let block = &text[start + 5..end];
        let num = field(block, "<num>").ok_or_else(|| err("missing <num>".into()))?;
        let num = num.strip_prefix("Number:").unwrap_or(num).trim();
        let id: u32 = num.parse().map_err(|_| err(format!("bad topic number {num:?}")))?;
        let title = field(block, "<title>").filter(|t| !t.is_empty()).ok_or_else(|| err("missing <title>".into()))?;
        let title = title.strip_prefix("Topic:").unwrap_or(title).trim();
        if !ids.insert(id) {
            return Err(err(format!("duplicate topic {id}")));
        }
        topics.push(Topic { id, title: title.split_whitespace().collect::<Vec<_>>().join(" ") });
        pos = end + 6;
    }
    Ok(topics)
}

/// Relevance judgments: topic -> DOCNO -> grade.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Qrels {
    pub judgments: BTreeMap<u32, BTreeMap<String, i32>>,
}

impl Qrels {
    pub fn grade(&self, topic: u32, docno: &str) -> Option<i32> {
        self.judgments.get(&topic)?.get(docno).copied()
    }

    /// Number of documents judged relevant (grade >= 1) for `topic`.
    pub fn n_relevant(&self, topic: u32) -> usize {
        self.judgments.get(&topic).map_or(0, |j| j.values().filter(|&&g| g >= 1).count())
    }

    pub fn n_judged_nonrelevant(&self, topic: u32) -> usize {
        self.judgments.get(&topic).map_or(0, |j| j.values().filter(|&&g| g < 1).count())
    }
}

/// Parses `topic iteration DOCNO grade` lines.
pub fn parse_qrels(text: &str) -> Result<Qrels, EvalError> {
    let mut q = Qrels::default();
    for (i, line) in text.lines().enumerate() {
        let err = |message: String| EvalError::Qrels { line: i + 1, message };
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.is_empty() {
            continue;
        }
        if f.len() != 4 {
            return Err(err(format!("expected 4 fields, found {}", f.len())));
        }
        let topic: u32 = f[0].parse().map_err(|_| err(format!("bad topic {:?}", f[0])))?;
        let grade: i32 = f[3].parse().map_err(|_| err(format!("bad grade {:?}", f[3])))?;
        let docs = q.judgments.entry(topic).or_default();
        match docs.get(f[2]) {
            Some(&g) if g != grade => return Err(err(format!("conflicting grades for {topic} {}", f[2]))),
            Some(_) => {}
            None => {
                docs.insert(f[2].to_string(), grade);
            }
        }
    }
    Ok(q)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunEntry {
    pub docno: String,
    pub score: f64,
}

/// Ranked documents per topic, best first.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Run {
    pub topics: BTreeMap<u32, Vec<RunEntry>>,
}

/// `topic Q0 DOCNO rank score tag`, ranks from 1.
pub fn write_run(run: &Run, tag: &str) -> String {
    let mut out = String::new();
    for (topic, entries) in &run.topics {
        for (i, e) in entries.iter().enumerate() {
            writeln!(out, "{topic} Q0 {} {} {:.6} {tag}", e.docno, i + 1, e.score).unwrap();
        }
    }
    out
}

/// Reads a six-column run; entries are ordered by their rank column.
pub fn parse_run(text: &str) -> Result<Run, EvalError> {
    let mut ranked: BTreeMap<u32, Vec<(u64, RunEntry)>> = BTreeMap::new();
    let mut seen: BTreeSet<(u32, String)> = BTreeSet::new();
    for (i, line) in text.lines().enumerate() {
        let err = |message: String| EvalError::Run { line: i + 1, message };
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.is_empty() {
            continue;
        }
        if f.len() != 6 {
            return Err(err(format!("expected 6 fields, found {}", f.len())));
        }
        let topic: u32 = f[0].parse().map_err(|_| err(format!("bad topic {:?}", f[0])))?;
        let rank: u64 = f[3].parse().map_err(|_| err(format!("bad rank {:?}", f[3])))?;
        let score: f64 = f[4].parse().map_err(|_| err(format!("bad score {:?}", f[4])))?;
        if !seen.insert((topic, f[2].to_string())) {
            return Err(err(format!("duplicate DOCNO {} for topic {topic}", f[2])));
        }
        ranked.entry(topic).or_default().push((rank, RunEntry { docno: f[2].to_string(), score }));
    }
    let topics = ranked
        .into_iter()
        .map(|(t, mut v)| {
            v.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.docno.cmp(&b.1.docno)));
            (t, v.into_iter().map(|(_, e)| e).collect())
        })
        .collect();
    Ok(Run { topics })
}

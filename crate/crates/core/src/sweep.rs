//! MAP as a function of the number of expansion terms.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::eval::{evaluate, Qrels};
use crate::expansion::ExpandedQuery;
use crate::retrieval::{run_queries, InvertedIndex, Model, RetrievalError};

pub const SWEEP_M: [usize; 6] = [10, 20, 30, 40, 50, 60];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub models: Vec<Model>,
    /// `(m, MAP per model)` in sweep order.
    pub rows: Vec<(usize, Vec<f64>)>,
}

impl SweepTable {
    /// Header `m<TAB>BM25<TAB>Tf-idf`, then one row per m.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("m");
        for m in &self.models {
            out.push('\t');
            out.push_str(m.label());
        }
        out.push('\n');
        for (m, maps) in &self.rows {
            write!(out, "{m}").unwrap();
            for v in maps {
                write!(out, "\t{v:.4}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Weighted queries keeping the first `m` expansion terms of each query.
pub fn queries_at(expanded: &BTreeMap<u32, ExpandedQuery>, m: usize, expansion_weight: f64) -> BTreeMap<u32, Vec<(String, f64)>> {
    expanded.iter().map(|(t, q)| (*t, q.truncated(m, expansion_weight).weighted_terms())).collect()
}

/// Searches and evaluates every (m, model) pair. `expanded` must have been
/// produced with `m_final` at least the largest m to be meaningful.
pub fn sweep(
    index: &InvertedIndex,
    expanded: &BTreeMap<u32, ExpandedQuery>,
    qrels: &Qrels,
    models: &[Model],
    ms: &[usize],
    expansion_weight: f64,
    k: usize,
) -> Result<SweepTable, RetrievalError> {
    let mut rows = Vec::with_capacity(ms.len());
    for &m in ms {
        let queries = queries_at(expanded, m, expansion_weight);
        let mut maps = Vec::with_capacity(models.len());
        for &model in models {
            maps.push(evaluate(&run_queries(index, &queries, model, k)?, qrels).map);
        }
        rows.push((m, maps));
    }
    Ok(SweepTable { models: models.to_vec(), rows })
}

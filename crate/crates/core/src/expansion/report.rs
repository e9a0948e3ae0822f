//! Tab-separated reports for expanded queries.

use std::fmt::Write;

use super::ExpandedQuery;

pub const TERM_REPORT_HEADER: &str = "term\tsource\torigin\tstage1_score\tcorrelation\tfinal_weight";
pub const TERM_TABLE_HEADER: &str = "query_id\toriginal_query\twordnet_terms\twikipedia_terms\twwqe_terms";

/// One line per final term.
pub fn term_report(q: &ExpandedQuery) -> String {
    let mut out = String::from(TERM_REPORT_HEADER);
    out.push('\n');
    for t in &q.terms {
        writeln!(
            out,
            "{}\t{}\t{}\t{:.6}\t{:.6}\t{:.6}",
            t.term, t.source, t.origin, t.stage1_score, t.correlation, t.weight
        )
        .unwrap();
    }
    out
}

/// Per-query comparison of WordNet-only, Wikipedia-only and combined terms,
/// `k` terms per column.
pub fn term_table<'a, I>(rows: I, k: usize) -> String
where
    I: IntoIterator<Item = (&'a str, &'a ExpandedQuery)>,
{
    let mut out = String::from(TERM_TABLE_HEADER);
    out.push('\n');
    for (id, q) in rows {
        let wordnet: Vec<&str> = q.wordnet_pool.iter().take(k).map(|c| c.term.as_str()).collect();
        let wiki: Vec<&str> = q.wiki_pool.iter().take(k).map(|c| c.term.as_str()).collect();
        let combined: Vec<&str> = q.terms.iter().take(k).map(|t| t.term.as_str()).collect();
        writeln!(out, "{id}\t{}\t{}\t{}\t{}", q.query, wordnet.join(", "), wiki.join(", "), combined.join(", ")).unwrap();
    }
    out
}

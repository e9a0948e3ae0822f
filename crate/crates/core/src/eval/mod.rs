//! Run evaluation: AP, MAP, GM_MAP, P@k, bpref, recall, F1 and the
//! 11-point interpolated precision curve. Judgments with grade >= 1 count
//! as relevant.

mod trec;

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use trec::{parse_qrels, parse_run, parse_topics, write_run, Qrels, Run, RunEntry, Topic};

pub const CUTOFFS: [usize; 4] = [5, 10, 20, 30];
/// Floor applied to AP before taking logs for GM_MAP.
pub const GM_FLOOR: f64 = 1e-5;
pub const RECALL_LEVELS: usize = 11;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("topics line {line}: {message}")]
    Topics { line: usize, message: String },
    #[error("qrels line {line}: {message}")]
    Qrels { line: usize, message: String },
    #[error("run line {line}: {message}")]
    Run { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicMetrics {
    pub retrieved: usize,
    pub relevant: usize,
    pub relevant_retrieved: usize,
    pub ap: f64,
    /// Precision at each of [`CUTOFFS`].
    pub precision: [f64; 4],
    pub bpref: f64,
    pub recall: f64,
    pub f1: f64,
    pub interpolated: [f64; RECALL_LEVELS],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub per_topic: BTreeMap<u32, TopicMetrics>,
    /// Run topics without any relevant judgment; not part of the means.
    pub excluded: Vec<u32>,
    pub map: f64,
    pub gm_map: f64,
    pub precision: [f64; 4],
    pub bpref: f64,
    pub recall: f64,
    pub f1: f64,
    pub relevant_retrieved: usize,
    pub interpolated: [f64; RECALL_LEVELS],
}

/// Metrics of one ranked list against the judgments of its topic.
pub fn evaluate_topic(ranked: &[RunEntry], qrels: &Qrels, topic: u32) -> TopicMetrics {
    let r = qrels.n_relevant(topic);
    let n_nonrel = qrels.n_judged_nonrelevant(topic);
    let bpref_denom = r.min(n_nonrel);
    let mut seen = HashSet::new();
    let (mut hits, mut nonrel_above) = (0usize, 0usize);
    let (mut ap_sum, mut bpref_sum) = (0.0, 0.0);
    let mut precision = [0.0; 4];
    let mut interpolated = [0.0; RECALL_LEVELS];
    // (hits, precision) after each relevant document
    let mut points: Vec<(usize, f64)> = Vec::new();
    for (i, e) in ranked.iter().enumerate() {
        let rank = i + 1;
        if seen.insert(e.docno.as_str()) {
            match qrels.grade(topic, &e.docno) {
                Some(g) if g >= 1 => {
                    hits += 1;
                    let p = hits as f64 / rank as f64;
                    ap_sum += p;
                    points.push((hits, p));
                    bpref_sum += if bpref_denom == 0 {
                        1.0
                    } else {
                        1.0 - nonrel_above.min(r) as f64 / bpref_denom as f64
                    };
                }
                Some(_) => nonrel_above += 1,
                None => {}
            }
        }
        for (j, &k) in CUTOFFS.iter().enumerate() {
            if rank == k {
                precision[j] = hits as f64 / k as f64;
            }
        }
    }
    for (j, &k) in CUTOFFS.iter().enumerate() {
        if ranked.len() < k {
            precision[j] = hits as f64 / k as f64;
        }
    }
    let rf = r as f64;
    for (level, slot) in interpolated.iter_mut().enumerate() {
        // recall h/r reaches level/10 exactly when 10h >= level*r
        *slot = points
            .iter()
            .filter(|(h, _)| 10 * h >= level * r)
            .map(|(_, p)| *p)
            .fold(0.0, f64::max);
    }
    let recall = if r == 0 { 0.0 } else { hits as f64 / rf };
    let prec_all = if ranked.is_empty() { 0.0 } else { hits as f64 / ranked.len() as f64 };
    let f1 = if prec_all + recall > 0.0 { 2.0 * prec_all * recall / (prec_all + recall) } else { 0.0 };
    TopicMetrics {
        retrieved: ranked.len(),
        relevant: r,
        relevant_retrieved: hits,
        ap: if r == 0 { 0.0 } else { ap_sum / rf },
        precision,
        bpref: if r == 0 { 0.0 } else { bpref_sum / rf },
        recall,
        f1,
        interpolated,
    }
}

/// Evaluates every run topic that has at least one relevant judgment.
pub fn evaluate(run: &Run, qrels: &Qrels) -> EvalReport {
    let mut per_topic = BTreeMap::new();
    let mut excluded = Vec::new();
    for (&topic, ranked) in &run.topics {
        if qrels.n_relevant(topic) == 0 {
            excluded.push(topic);
            continue;
        }
        per_topic.insert(topic, evaluate_topic(ranked, qrels, topic));
    }
    let n = per_topic.len() as f64;
    let mean = |f: &dyn Fn(&TopicMetrics) -> f64| if n == 0.0 { 0.0 } else { per_topic.values().map(f).sum::<f64>() / n };
    let mut precision = [0.0; 4];
    for (j, p) in precision.iter_mut().enumerate() {
        *p = mean(&|m| m.precision[j]);
    }
    let mut interpolated = [0.0; RECALL_LEVELS];
    for (j, p) in interpolated.iter_mut().enumerate() {
        *p = mean(&|m| m.interpolated[j]);
    }
    let gm_map = if n == 0.0 { 0.0 } else { mean(&|m| m.ap.max(GM_FLOOR).ln()).exp() };
    EvalReport {
        map: mean(&|m| m.ap),
        gm_map,
        precision,
        bpref: mean(&|m| m.bpref),
        recall: mean(&|m| m.recall),
        f1: mean(&|m| m.f1),
        relevant_retrieved: per_topic.values().map(|m| m.relevant_retrieved).sum(),
        interpolated,
        per_topic,
        excluded,
    }
}

/// 11-point interpolated precision averaged over evaluated topics.
pub fn interpolated_pr(run: &Run, qrels: &Qrels) -> [f64; RECALL_LEVELS] {
    evaluate(run, qrels).interpolated
}

/// `metric<TAB>topic<TAB>value` lines, per topic then `all`.
pub fn format_report(report: &EvalReport) -> String {
    let mut out = String::new();
    let mut row = |name: &str, topic: &str, v: f64| writeln!(out, "{name}\t{topic}\t{v:.6}").unwrap();
    for (t, m) in &report.per_topic {
        let t = t.to_string();
        row("map", &t, m.ap);
        for (j, k) in CUTOFFS.iter().enumerate() {
            row(&format!("P_{k}"), &t, m.precision[j]);
        }
        row("bpref", &t, m.bpref);
        row("recall", &t, m.recall);
        row("F1", &t, m.f1);
    }
    row("map", "all", report.map);
    row("gm_map", "all", report.gm_map);
    for (j, k) in CUTOFFS.iter().enumerate() {
        row(&format!("P_{k}"), "all", report.precision[j]);
    }
    row("bpref", "all", report.bpref);
    row("recall", "all", report.recall);
    row("F1", "all", report.f1);
    writeln!(out, "num_rel_ret\tall\t{}", report.relevant_retrieved).unwrap();
    out
}

/// `recall_level<TAB>precision` lines.
pub fn format_curve(curve: &[f64; RECALL_LEVELS]) -> String {
    let mut out = String::new();
    for (i, p) in curve.iter().enumerate() {
        writeln!(out, "{:.1}\t{p:.6}", i as f64 / 10.0).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entries(docs: &[&str]) -> Vec<RunEntry> {
        docs.iter().enumerate().map(|(i, d)| RunEntry { docno: d.to_string(), score: 100.0 - i as f64 }).collect()
    }

    #[test]
    fn ap_of_ranks_one_three_five() {
        let q = parse_qrels("1 0 A 1\n1 0 C 1\n1 0 E 1\n").unwrap();
        let m = evaluate_topic(&entries(&["A", "B", "C", "D", "E"]), &q, 1);
        assert!((m.ap - (1.0 + 2.0 / 3.0 + 3.0 / 5.0) / 3.0).abs() < 1e-12);
        assert!((m.ap - 0.75556).abs() < 1e-5);
        assert_eq!(m.precision[0], 0.6);
        assert_eq!(m.precision[1], 0.3);
    }

    #[test]
    fn bpref_hand_value() {
        let q = parse_qrels("1 0 A 1\n1 0 B 0\n1 0 C 1\n1 0 D 0\n").unwrap();
        let m = evaluate_topic(&entries(&["A", "B", "C"]), &q, 1);
        assert!((m.bpref - 0.75).abs() < 1e-12);
    }

    #[test]
    fn curve_examples() {
        let q = parse_qrels("1 0 A 1\n1 0 D 1\n").unwrap();
        let m = evaluate_topic(&entries(&["A", "B", "C", "D"]), &q, 1);
        assert_eq!(m.interpolated[10], 0.5);
        assert_eq!(m.interpolated[0], 1.0);
        let perfect = evaluate_topic(&entries(&["A", "D", "B"]), &q, 1);
        assert!(perfect.interpolated.iter().all(|&p| p == 1.0));
        let none = evaluate_topic(&entries(&["B", "C"]), &q, 1);
        assert!(none.interpolated.iter().all(|&p| p == 0.0));
    }

    #[test]
    fn map_and_gm_map() {
        // topic 1: AP 0.1 (R=1, hit at rank 10); topic 2: AP 0.4 (R=3, hits at 2, 5, 10)
        let q = parse_qrels("1 0 R1 1\n2 0 S2 1\n2 0 S5 1\n2 0 S10 1\n").unwrap();
        let mut run = Run::default();
        let t1: Vec<String> = (1..=10).map(|i| if i == 10 { "R1".into() } else { format!("X{i}") }).collect();
        let t2: Vec<String> = (1..=10).map(|i| if [2, 5, 10].contains(&i) { format!("S{i}") } else { format!("Y{i}") }).collect();
        run.topics.insert(1, entries(&t1.iter().map(String::as_str).collect::<Vec<_>>()));
        run.topics.insert(2, entries(&t2.iter().map(String::as_str).collect::<Vec<_>>()));
        run.topics.insert(3, entries(&["Z"]));
        let r = evaluate(&run, &q);
        assert!((r.per_topic[&1].ap - 0.1).abs() < 1e-12);
        assert!((r.per_topic[&2].ap - 0.4).abs() < 1e-12);
        assert!((r.map - 0.25).abs() < 1e-12);
        assert!((r.gm_map - 0.2).abs() < 1e-12);
        assert_eq!(r.excluded, [3]);
        assert_eq!(r.relevant_retrieved, 4);
        assert!(format_report(&r).contains("map\tall\t0.250000\n"));
    }

    #[test]
    fn zero_ap_uses_floor() {
        let q = parse_qrels("1 0 A 1\n2 0 B 1\n").unwrap();
        let mut run = Run::default();
        run.topics.insert(1, entries(&["A"]));
        run.topics.insert(2, entries(&["C"]));
        let r = evaluate(&run, &q);
        assert!((r.gm_map - (GM_FLOOR.ln() / 2.0).exp()).abs() < 1e-15);
    }

    #[test]
    fn curve_format() {
        let text = format_curve(&[1.0; RECALL_LEVELS]);
        assert!(text.starts_with("0.0\t1.000000\n0.1\t1.000000\n"));
        assert!(text.ends_with("1.0\t1.000000\n"));
    }
}

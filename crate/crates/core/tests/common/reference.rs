//! Direct-definition evaluation metrics: every quantity is recounted from
//! scratch at each rank.

use std::collections::BTreeMap;

use proptest::prelude::*;
use wwqe_core::eval::{EvalReport, Qrels, Run, RunEntry, CUTOFFS, GM_FLOOR};

pub struct Reference {
    pub ap: f64,
    pub precision: Vec<f64>,
    pub bpref: f64,
    pub recall: f64,
    pub f1: f64,
    pub interpolated: Vec<f64>,
}

fn is_rel(q: &BTreeMap<String, i32>, d: &str) -> bool {
    q.get(d).is_some_and(|&g| g >= 1)
}

fn is_nonrel(q: &BTreeMap<String, i32>, d: &str) -> bool {
    q.get(d).is_some_and(|&g| g < 1)
}

pub fn reference(docs: &[String], q: &BTreeMap<String, i32>) -> Reference {
    let r = q.values().filter(|&&g| g >= 1).count();
    let n = q.values().filter(|&&g| g < 1).count();
    let rel_in_top = |k: usize| docs.iter().take(k).filter(|d| is_rel(q, d)).count();
    let mut ap = 0.0;
    for k in 1..=docs.len() {
        if is_rel(q, &docs[k - 1]) {
            ap += rel_in_top(k) as f64 / k as f64;
        }
    }
    let precision = CUTOFFS.iter().map(|&k| rel_in_top(k) as f64 / k as f64).collect();
    let mut bpref = 0.0;
    for k in 0..docs.len() {
        if is_rel(q, &docs[k]) {
            let above = docs[..k].iter().filter(|d| is_nonrel(q, d)).count();
            let denom = r.min(n);
            bpref += if denom == 0 { 1.0 } else { 1.0 - above.min(r) as f64 / denom as f64 };
        }
    }
    let found = rel_in_top(docs.len());
    let recall = found as f64 / r as f64;
    let prec = if docs.is_empty() { 0.0 } else { found as f64 / docs.len() as f64 };
    let f1 = if prec + recall > 0.0 { 2.0 * prec * recall / (prec + recall) } else { 0.0 };
    let interpolated = (0..=10)
        .map(|level| {
            let mut best: f64 = 0.0;
            for k in 1..=docs.len() {
                let rk = rel_in_top(k);
                if rk > 0 && rk as f64 / r as f64 >= level as f64 / 10.0 {
                    best = best.max(rk as f64 / k as f64);
                }
            }
            best
        })
        .collect();
    Reference { ap: ap / r as f64, precision, bpref: bpref / r as f64, recall, f1, interpolated }
}

/// Run entries with strictly decreasing scores in the given order.
pub fn entries(docs: &[String]) -> Vec<RunEntry> {
    docs.iter().enumerate().map(|(i, d)| RunEntry { docno: d.clone(), score: (docs.len() - i) as f64 }).collect()
}

/// A ranking of doc numbers and (doc, grade) judgments.
pub type RandomTopic = (Vec<usize>, Vec<(usize, i32)>);

/// One topic over a pool of 50 docs.
pub fn topic_strategy() -> impl Strategy<Value = RandomTopic> {
    (
        Just((0..50usize).collect::<Vec<_>>()).prop_shuffle().prop_flat_map(|v| (0..=50usize).prop_map(move |n| v[..n].to_vec())),
        prop::collection::vec((0..50usize, 0..3i32), 1..20),
    )
}

pub fn build(topics: &[RandomTopic]) -> (Run, Qrels) {
    let mut run = Run::default();
    let mut qrels = Qrels::default();
    for (t, (ranked, judged)) in topics.iter().enumerate() {
        let t = t as u32 + 1;
        let docs: Vec<String> = ranked.iter().map(|d| format!("D{d}")).collect();
        run.topics.insert(t, entries(&docs));
        let j = qrels.judgments.entry(t).or_default();
        for (d, g) in judged {
            j.entry(format!("D{d}")).or_insert(*g);
        }
    }
    (run, qrels)
}

/// Exact agreement of `report` with the reference on every topic and on the
/// aggregates.
pub fn compare(run: &Run, qrels: &Qrels, report: &EvalReport) -> Result<(), String> {
    let fail = |what: &str, t: u32, got: &dyn std::fmt::Debug, want: &dyn std::fmt::Debug| {
        Err(format!("topic {t} {what}: got {got:?}, reference {want:?}"))
    };
    let mut aps = Vec::new();
    for (t, ranked) in &run.topics {
        let j = &qrels.judgments[t];
        if j.values().all(|&g| g < 1) {
            if !report.excluded.contains(t) {
                return Err(format!("topic {t} has no relevant docs but was not excluded"));
            }
            continue;
        }
        let docs: Vec<String> = ranked.iter().map(|e| e.docno.clone()).collect();
        let want = reference(&docs, j);
        let got = &report.per_topic[t];
        if got.ap != want.ap {
            return fail("ap", *t, &got.ap, &want.ap);
        }
        if got.precision.to_vec() != want.precision {
            return fail("precision", *t, &got.precision, &want.precision);
        }
        if got.bpref != want.bpref {
            return fail("bpref", *t, &got.bpref, &want.bpref);
        }
        if got.recall != want.recall {
            return fail("recall", *t, &got.recall, &want.recall);
        }
        if got.f1 != want.f1 {
            return fail("f1", *t, &got.f1, &want.f1);
        }
        if got.interpolated.to_vec() != want.interpolated {
            return fail("interpolated", *t, &got.interpolated, &want.interpolated);
        }
        for v in [got.ap, got.bpref, got.recall, got.f1].iter().chain(&got.precision) {
            if !(0.0..=1.0).contains(v) {
                return Err(format!("topic {t}: metric {v} outside [0, 1]"));
            }
        }
        if got.interpolated.windows(2).any(|w| w[0] < w[1]) {
            return Err(format!("topic {t}: interpolated curve increases"));
        }
        aps.push(want.ap);
    }
    if aps.is_empty() {
        return Ok(());
    }
    let map = aps.iter().sum::<f64>() / aps.len() as f64;
    let gm = (aps.iter().map(|a| a.max(GM_FLOOR).ln()).sum::<f64>() / aps.len() as f64).exp();
    if report.map != map || report.gm_map != gm {
        return Err(format!("MAP/GM_MAP {} / {} vs reference {map} / {gm}", report.map, report.gm_map));
    }
    // AM-GM on the floored values the geometric mean is taken over
    let floored = aps.iter().map(|a| a.max(GM_FLOOR)).sum::<f64>() / aps.len() as f64;
    if report.gm_map > floored * (1.0 + 1e-12) {
        return Err("GM_MAP exceeds the mean of floored APs".into());
    }
    if aps.iter().all(|&a| a >= GM_FLOOR) && report.gm_map > report.map * (1.0 + 1e-12) {
        return Err("GM_MAP exceeds MAP".into());
    }
    Ok(())
}

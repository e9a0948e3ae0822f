mod common;

use std::collections::BTreeSet;

use common::{checks, load_graph, oracle_tokens, OracleCorpus};
use proptest::prelude::*;
use wwqe_core::wiki::{ArticleId, GraphStore};

fn titles(g: &GraphStore, ids: &[ArticleId]) -> BTreeSet<String> {
    ids.iter().map(|id| g.title(*id).unwrap().to_string()).collect()
}

#[test]
fn fixture_counts() {
    let g = load_graph("graph12.xml");
    assert_eq!(g.n_articles(), 11);
    let s = g.stats();
    assert_eq!((s.pages, s.redirects, s.dangling_links), (12, 1, 2));
}

#[test]
fn adjacency_matches_hand_enumeration() {
    checks::graph_oracle().unwrap();
}

#[test]
fn named_link_examples() {
    let g = load_graph("graph12.xml");
    let id = |t: &str| g.resolve_title(t).unwrap();
    let set = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
    assert_eq!(titles(&g, g.out_links(id("Bird")).unwrap()), set(&["wing", "feather"]));
    assert_eq!(titles(&g, g.in_links(id("Bird")).unwrap()), set(&["wing", "feather"]));
    assert!(g.out_links(id("Lighthouse")).unwrap().is_empty());
    assert!(g.in_links(id("Lighthouse")).unwrap().is_empty());
    assert!(g.out_links(id("Atlantis")).unwrap().is_empty());
    assert!(g.in_links(id("Wing")).unwrap().contains(&id("Bird")));
    assert!(g.in_links(id("Bird")).unwrap().contains(&id("Wing")));
}

#[test]
fn title_resolution() {
    let g = load_graph("graph12.xml");
    let isro = g.resolve_title("Indian Space Research Organisation").unwrap();
    assert_eq!(g.resolve_title("ISRO"), Some(isro));
    assert_eq!(g.resolve_title("indian  space research organisation"), Some(isro));
    assert_eq!(g.resolve_title("Indian_Space_Research_Organisation"), Some(isro));
    assert_eq!(g.resolve_title("No Such Page"), None);
    assert!(g.articles().iter().all(|a| a.title != "isro"));
}

#[test]
fn term_frequency_examples() {
    let g = load_graph("scoring8.xml");
    let wing = g.resolve_title("Wing").unwrap();
    assert_eq!(g.term_frequency(wing, ["bird"]).unwrap(), 3);
    assert_eq!(g.term_frequency(wing, ["bird", "fowl"]).unwrap(), 4);
    assert_eq!(g.term_frequency(wing, ["keratin", "pig"]).unwrap(), 0);
}

#[test]
fn idf_examples() {
    let g = load_graph("scoring8.xml");
    assert_eq!(g.n_articles(), 8);
    assert!((g.idf("keratin").value - 2.0794).abs() < 1e-4);
    assert!((g.idf("keratin").value - 8f64.ln()).abs() < 1e-12);
    assert!((g.idf("wing").value - 4f64.ln()).abs() < 1e-12);
    assert_eq!(g.idf("the").value, 0.0);
}

#[test]
fn df_table_matches_brute_force() {
    for name in ["graph12.xml", "scoring8.xml"] {
        let g = load_graph(name);
        let oracle = OracleCorpus::from_graph(&g);
        let vocab: BTreeSet<String> = oracle.docs.values().flatten().cloned().collect();
        let table = g.df_table();
        assert_eq!(table.len(), vocab.len());
        for term in &vocab {
            assert_eq!(table[term.as_str()], oracle.df(term), "df({term}) in {name}");
            assert!(table[term.as_str()] >= 1 && table[term.as_str()] <= g.n_articles());
        }
    }
}

#[test]
fn idf_is_anti_monotone_in_df() {
    let g = load_graph("graph12.xml");
    let table = g.df_table();
    let terms: Vec<(&str, usize)> = table.into_iter().collect();
    for (a, da) in &terms {
        for (b, db) in &terms {
            if da < db {
                assert!(g.idf(a).value > g.idf(b).value);
            }
        }
    }
}

#[test]
fn ingestion_is_deterministic() {
    let a = load_graph("graph12.xml");
    let b = load_graph("graph12.xml");
    assert_eq!(a.n_articles(), b.n_articles());
    assert_eq!(a.df_table(), b.df_table());
    for art in a.articles() {
        assert_eq!(a.out_links(art.id).unwrap(), b.out_links(art.id).unwrap());
        assert_eq!(a.in_links(art.id).unwrap(), b.in_links(art.id).unwrap());
    }
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    a.save(d1.path()).unwrap();
    b.save(d2.path()).unwrap();
    for f in ["manifest.json", "articles.jsonl", "aliases.tsv"] {
        assert_eq!(std::fs::read(d1.path().join(f)).unwrap(), std::fs::read(d2.path().join(f)).unwrap());
    }
}

fn random_dump(links: &[Vec<usize>], words: &[Vec<usize>]) -> String {
    const VOCAB: [&str; 6] = ["alpha", "beta", "gamma", "delta", "eps", "zeta"];
    let mut s = String::from("<mediawiki>");
    for (i, (ls, ws)) in links.iter().zip(words).enumerate() {
        let mut text = String::new();
        for w in ws {
            text.push_str(VOCAB[*w]);
            text.push(' ');
        }
        for l in ls {
            text.push_str(&format!("[[P{l}]] "));
        }
        s.push_str(&format!("<page><title>P{i}</title><ns>0</ns><revision><text>{text}</text></revision></page>"));
    }
    s.push_str("</mediawiki>");
    s
}

proptest! {
    #[test]
    fn transpose_and_df_hold_on_random_graphs(
        (links, words) in (1usize..9).prop_flat_map(|n| (
            prop::collection::vec(prop::collection::vec(0..n + 2, 0..6), n),
            prop::collection::vec(prop::collection::vec(0usize..6, 0..8), n),
        ))
    ) {
        let g = GraphStore::ingest(random_dump(&links, &words).as_bytes()).unwrap();
        let n = g.n_articles();
        for x in 0..n {
            let x = ArticleId(x as u32);
            for y in 0..n {
                let y = ArticleId(y as u32);
                let fwd = g.out_links(x).unwrap().contains(&y);
                let back = g.in_links(y).unwrap().contains(&x);
                prop_assert_eq!(fwd, back);
            }
            // expected out-set straight from the generator
            let expected: BTreeSet<u32> = links[x.index()].iter().filter(|&&l| l < n && l != x.index()).map(|&l| l as u32).collect();
            let got: BTreeSet<u32> = g.out_links(x).unwrap().iter().map(|a| a.0).collect();
            prop_assert_eq!(got, expected);
        }
        for (term, df) in g.df_table() {
            let brute = g.articles().iter().filter(|a| oracle_tokens(&a.body).iter().any(|t| t == term)).count();
            prop_assert_eq!(df, brute);
        }
    }
}

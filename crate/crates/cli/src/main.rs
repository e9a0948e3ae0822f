mod config;
mod output;

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, File};
use std::io::BufReader;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand};

use config::Config;
use output::OutputDir;
use wwqe_core::eval::{evaluate, format_curve, format_report, parse_qrels, parse_run, parse_topics, write_run, Topic};
use wwqe_core::expansion::report::{term_report, term_table};
use wwqe_core::expansion::{expand, ExpandedQuery, ExpansionParams};
use wwqe_core::query::{preprocess, LexiconTagger};
use wwqe_core::retrieval::{self, parse_corpus, run_queries, Analyzer, InvertedIndex, Model};
use wwqe_core::sweep::{self, SWEEP_M};
use wwqe_core::wiki::GraphStore;
use wwqe_core::wordnet::{LexicalStore, Relation};

/// Query expansion with Wikipedia and WordNet, plus TREC-style retrieval
/// and evaluation.
#[derive(Parser)]
#[command(name = "wwqe", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a Wikipedia XML dump into a graph store (--dump, --out).
    IngestWiki,
    /// Load a WordNet database and save it as a lexical store (--wordnet, --out).
    IngestWordnet,
    /// Expand every topic (--topics, --store, --wordnet, --out).
    Expand,
    /// Build an inverted index from a TREC corpus (--corpus, --out).
    Index,
    /// Rank documents for weighted queries or raw topics (--index, --queries | --topics, --out).
    Search,
    /// Evaluate a run against qrels (--run, --qrels, [--out]).
    Eval,
    /// MAP for m in 10..60 expansion terms (--topics, --store, --wordnet, --index, --qrels, --out).
    Sweep,
}

#[derive(Args, Default)]
struct Opts {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    dump: Option<PathBuf>,
    /// WordNet database directory or saved lexical store.
    #[arg(long, global = true)]
    wordnet: Option<PathBuf>,
    #[arg(long, global = true)]
    corpus: Option<PathBuf>,
    #[arg(long, global = true)]
    topics: Option<PathBuf>,
    #[arg(long, global = true)]
    qrels: Option<PathBuf>,
    /// Wikipedia graph store directory.
    #[arg(long, global = true)]
    store: Option<PathBuf>,
    #[arg(long, global = true)]
    index: Option<PathBuf>,
    /// Weighted query file (topic<TAB>weight<TAB>term).
    #[arg(long, global = true)]
    queries: Option<PathBuf>,
    /// Run file to evaluate.
    #[arg(long, global = true)]
    run: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// bm25 or tfidf.
    #[arg(long, global = true)]
    model: Option<String>,
    /// Final expansion terms per query.
    #[arg(long, global = true)]
    m: Option<usize>,
    /// Candidates kept per source after stage-one scoring.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Comma-separated subset of synonym,hyponym.
    #[arg(long, global = true)]
    relations: Option<String>,
    #[arg(long, global = true)]
    expansion_weight: Option<f64>,
    #[arg(long, global = true)]
    phrase_boost: Option<f64>,
    /// Retrieval depth per topic.
    #[arg(long, global = true)]
    k: Option<usize>,
    #[arg(long, global = true)]
    no_wiki: bool,
    #[arg(long, global = true)]
    no_wordnet: bool,
    /// Index surface forms instead of stems.
    #[arg(long, global = true)]
    no_stem: bool,
    /// Default location for stores when --store, --index or --out are absent.
    #[arg(long, global = true, env = "WWQE_STORE_ROOT")]
    store_root: Option<PathBuf>,
}

/// Flags merged over the config file.
struct Settings {
    opts: Opts,
    cfg: Config,
}

impl Settings {
    fn new(opts: Opts) -> Result<Self> {
        let cfg = match &opts.config {
            Some(p) => Config::load(p)?,
            None => Config::default(),
        };
        Ok(Self { opts, cfg })
    }

    fn under_root(&self, name: &str) -> Option<PathBuf> {
        self.opts.store_root.as_ref().map(|r| r.join(name))
    }

    fn path(&self, flag: &str, v: &Option<PathBuf>, c: &Option<PathBuf>, root: Option<&str>) -> Result<PathBuf> {
        v.clone()
            .or_else(|| c.clone())
            .or_else(|| root.and_then(|r| self.under_root(r)))
            .ok_or_else(|| anyhow!("missing --{flag}"))
    }

    fn input(&self, flag: &str, v: &Option<PathBuf>, c: &Option<PathBuf>, root: Option<&str>) -> Result<PathBuf> {
        let p = self.path(flag, v, c, root)?;
        ensure!(p.exists(), "--{flag} {} does not exist", p.display());
        Ok(p)
    }

    fn dump(&self) -> Result<PathBuf> {
        self.input("dump", &self.opts.dump, &self.cfg.paths.dump, None)
    }
    fn wordnet(&self) -> Result<PathBuf> {
        self.input("wordnet", &self.opts.wordnet, &self.cfg.paths.wordnet, Some("wordnet"))
    }
    fn corpus(&self) -> Result<PathBuf> {
        self.input("corpus", &self.opts.corpus, &self.cfg.paths.corpus, None)
    }
    fn topics(&self) -> Result<PathBuf> {
        self.input("topics", &self.opts.topics, &self.cfg.paths.topics, None)
    }
    fn qrels(&self) -> Result<PathBuf> {
        self.input("qrels", &self.opts.qrels, &self.cfg.paths.qrels, None)
    }
    fn store(&self) -> Result<PathBuf> {
        self.input("store", &self.opts.store, &self.cfg.paths.store, Some("wiki"))
    }
    fn index(&self) -> Result<PathBuf> {
        self.input("index", &self.opts.index, &self.cfg.paths.index, Some("index"))
    }
    fn run(&self) -> Result<PathBuf> {
        self.input("run", &self.opts.run, &self.cfg.paths.run, None)
    }
    fn queries(&self) -> Option<PathBuf> {
        self.opts.queries.clone().or_else(|| self.cfg.paths.queries.clone())
    }
    fn out(&self, root_default: Option<&str>) -> Result<PathBuf> {
        self.path("out", &self.opts.out, &self.cfg.paths.out, root_default)
    }

    fn params(&self) -> Result<ExpansionParams> {
        let e = &self.cfg.expansion;
        let mut p = ExpansionParams::default();
        if let Some(n) = self.opts.n.or(e.n) {
            p.n_intermediate = n;
        }
        if let Some(m) = self.opts.m.or(e.m) {
            p.m_final = m;
        }
        let relations: Option<Vec<String>> = match &self.opts.relations {
            Some(s) => Some(s.split(',').map(|r| r.trim().to_string()).filter(|r| !r.is_empty()).collect()),
            None => e.relations.clone(),
        };
        if let Some(rels) = relations {
            p.relations = rels.iter().map(|r| r.parse::<Relation>().map_err(|e| anyhow!(e))).collect::<Result<_>>()?;
        }
        if let Some(w) = self.opts.expansion_weight.or(e.expansion_weight) {
            p.expansion_weight = w;
        }
        if let Some(b) = self.opts.phrase_boost.or(e.phrase_boost) {
            p.phrase_boost = b;
        }
        p.use_wiki = !self.opts.no_wiki && e.wiki.unwrap_or(true);
        p.use_wordnet = !self.opts.no_wordnet && e.wordnet.unwrap_or(true);
        p.validate()?;
        Ok(p)
    }

    /// Models selected with --model; `all` when none was given.
    fn models(&self, all: &[Model]) -> Result<Vec<Model>> {
        match self.opts.model.as_ref().or(self.cfg.retrieval.model.as_ref()) {
            Some(m) => Ok(vec![m.parse()?]),
            None => Ok(all.to_vec()),
        }
    }

    fn k(&self) -> Result<usize> {
        let k = self.opts.k.or(self.cfg.retrieval.k).unwrap_or(1000);
        ensure!(k >= 1, "--k must be at least 1");
        Ok(k)
    }

    fn stemming(&self) -> bool {
        !self.opts.no_stem && self.cfg.retrieval.stemming.unwrap_or(true)
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_topics(path: &Path) -> Result<Vec<Topic>> {
    let topics = parse_topics(&read(path)?).with_context(|| format!("parsing topics {}", path.display()))?;
    ensure!(!topics.is_empty(), "no topics in {}", path.display());
    Ok(topics)
}

fn load_stores(s: &Settings) -> Result<(GraphStore, LexicalStore)> {
    let store = s.store()?;
    let graph = GraphStore::load(&store).with_context(|| format!("loading graph store {}", store.display()))?;
    let wn_dir = s.wordnet()?;
    let wn = LexicalStore::open(&wn_dir).with_context(|| format!("loading WordNet {}", wn_dir.display()))?;
    Ok((graph, wn))
}

fn expand_topics(
    graph: &GraphStore,
    wn: &LexicalStore,
    topics: &[Topic],
    params: &ExpansionParams,
) -> Result<BTreeMap<u32, ExpandedQuery>> {
    let tagger = LexiconTagger::english();
    let mut out = BTreeMap::new();
    for t in topics {
        let q = expand(graph, wn, &tagger, &t.title, params).with_context(|| format!("expanding topic {}", t.id))?;
        if let Some(note) = &q.note {
            eprintln!("warning: topic {}: {note}", t.id);
        }
        out.insert(t.id, q);
    }
    Ok(out)
}

fn cmd_ingest_wiki(s: &Settings) -> Result<()> {
    let dump = s.dump()?;
    let out = OutputDir::open(&s.out(Some("wiki"))?)?;
    let file = File::open(&dump).with_context(|| format!("opening {}", dump.display()))?;
    let graph = GraphStore::ingest(BufReader::with_capacity(1 << 20, file))
        .with_context(|| format!("ingesting {}", dump.display()))?;
    graph.save(out.staging())?;
    out.commit()?;
    let st = graph.stats();
    println!("articles\t{}", st.articles);
    println!("redirects\t{}", st.redirects);
    println!("links\t{}", st.links);
    println!("dangling_links\t{}", st.dangling_links);
    Ok(())
}

fn cmd_ingest_wordnet(s: &Settings) -> Result<()> {
    let src = s.wordnet()?;
    let out = OutputDir::open(&s.out(Some("wordnet"))?)?;
    let wn = LexicalStore::load_wordnet(&src).with_context(|| format!("loading WordNet {}", src.display()))?;
    wn.save(out.staging())?;
    out.commit()?;
    println!("synsets\t{}", wn.len());
    Ok(())
}

fn cmd_expand(s: &Settings) -> Result<()> {
    let topics = load_topics(&s.topics()?)?;
    let params = s.params()?;
    let (graph, wn) = load_stores(s)?;
    let out = OutputDir::open(&s.out(None)?)?;
    let expanded = expand_topics(&graph, &wn, &topics, &params)?;
    let weighted: Vec<(u32, Vec<(String, f64)>)> = expanded.iter().map(|(t, q)| (*t, q.weighted_terms())).collect();
    out.write("queries.tsv", retrieval::write_weighted_queries(weighted.iter().map(|(t, q)| (*t, q.as_slice()))))?;
    for (t, q) in &expanded {
        out.write(format!("reports/{t}.tsv"), term_report(q))?;
    }
    let ids: Vec<String> = expanded.keys().map(u32::to_string).collect();
    let table = term_table(ids.iter().map(String::as_str).zip(expanded.values()), 10);
    out.write("term_table.tsv", &table)?;
    out.commit()?;
    print!("{table}");
    Ok(())
}

fn cmd_index(s: &Settings) -> Result<()> {
    let corpus = s.corpus()?;
    let out = OutputDir::open(&s.out(Some("index"))?)?;
    let docs = parse_corpus(&read(&corpus)?).with_context(|| format!("parsing corpus {}", corpus.display()))?;
    let index = InvertedIndex::build(&docs, Analyzer::english(s.stemming()))?;
    index.save(out.staging())?;
    out.commit()?;
    println!("documents\t{}", index.n_docs());
    println!("terms\t{}", index.n_terms());
    Ok(())
}

/// Original content terms of each topic at weight 1.
fn unexpanded_queries(topics: &[Topic]) -> BTreeMap<u32, Vec<(String, f64)>> {
    let tagger = LexiconTagger::english();
    topics
        .iter()
        .map(|t| {
            let units = preprocess(&t.title, &tagger);
            (t.id, units.individuals.iter().map(|w| (w.to_lowercase(), 1.0)).collect())
        })
        .collect()
}

fn cmd_search(s: &Settings) -> Result<()> {
    let queries = match s.queries() {
        Some(p) => retrieval::read_weighted_queries(&read(&p)?).with_context(|| format!("reading {}", p.display()))?,
        None => unexpanded_queries(&load_topics(&s.topics().context("search needs --queries or --topics")?)?),
    };
    let model = s.models(&[Model::Bm25])?[0];
    let k = s.k()?;
    let index_dir = s.index()?;
    let index = InvertedIndex::load(&index_dir).with_context(|| format!("loading index {}", index_dir.display()))?;
    let out = OutputDir::open(&s.out(None)?)?;
    let run = run_queries(&index, &queries, model, k)?;
    out.write("run.txt", write_run(&run, &format!("wwqe-{model}")))?;
    out.commit()?;
    println!("topics\t{}", run.topics.len());
    Ok(())
}

fn cmd_eval(s: &Settings) -> Result<()> {
    let run_path = s.run()?;
    let run = parse_run(&read(&run_path)?).with_context(|| format!("parsing run {}", run_path.display()))?;
    let qrels_path = s.qrels()?;
    let qrels = parse_qrels(&read(&qrels_path)?).with_context(|| format!("parsing qrels {}", qrels_path.display()))?;
    let report = evaluate(&run, &qrels);
    for t in &report.excluded {
        eprintln!("warning: topic {t} has no relevant judgments; excluded");
    }
    let text = format_report(&report);
    if s.opts.out.is_some() || s.cfg.paths.out.is_some() {
        let out = OutputDir::open(&s.out(None)?)?;
        out.write("eval.tsv", &text)?;
        out.write("curve.tsv", format_curve(&report.interpolated))?;
        out.commit()?;
    }
    print!("{text}");
    Ok(())
}

fn cmd_sweep(s: &Settings) -> Result<()> {
    let topics = load_topics(&s.topics()?)?;
    let qrels_path = s.qrels()?;
    let qrels = parse_qrels(&read(&qrels_path)?)?;
    let mut params = s.params()?;
    let max_m = *SWEEP_M.iter().max().unwrap();
    ensure!(max_m <= 2 * params.n_intermediate, "--n must be at least {} for the sweep", max_m / 2);
    params.m_final = max_m;
    let models = s.models(&Model::ALL)?;
    let k = s.k()?;
    let (graph, wn) = load_stores(s)?;
    let index_dir = s.index()?;
    let index = InvertedIndex::load(&index_dir)?;
    let out = OutputDir::open(&s.out(None)?)?;
    let expanded = expand_topics(&graph, &wn, &topics, &params)?;
    let table = sweep::sweep(&index, &expanded, &qrels, &models, &SWEEP_M, params.expansion_weight, k)?;
    check_prefix(&expanded)?;
    let tsv = table.to_tsv();
    out.write("sweep.tsv", &tsv)?;
    out.commit()?;
    print!("{tsv}");
    Ok(())
}

/// Term sets selected at smaller m must be contained in those at larger m.
fn check_prefix(expanded: &BTreeMap<u32, ExpandedQuery>) -> Result<()> {
    for (t, q) in expanded {
        let sets: Vec<BTreeSet<String>> = SWEEP_M
            .iter()
            .map(|&m| q.truncated(m, 1.0).terms.into_iter().map(|x| x.term).collect())
            .collect();
        for w in sets.windows(2) {
            if !w[0].is_subset(&w[1]) {
                bail!("topic {t}: expansion terms are not nested across the sweep");
            }
        }
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let settings = Settings::new(cli.opts)?;
    match cli.command {
        Command::IngestWiki => cmd_ingest_wiki(&settings),
        Command::IngestWordnet => cmd_ingest_wordnet(&settings),
        Command::Expand => cmd_expand(&settings),
        Command::Index => cmd_index(&settings),
        Command::Search => cmd_search(&settings),
        Command::Eval => cmd_eval(&settings),
        Command::Sweep => cmd_sweep(&settings),
    }
}

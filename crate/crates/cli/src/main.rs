//! `hyperramsey`: classify 3-graphs, generate examples, evaluate and search
//! colorings, and run the experiment suites.
//!
//! Exit codes: 0 success, 1 negative answer of a decision verb, 2 usage or
//! input error, 3 search budget or size cap exceeded.

use std::fs;
use std::io::{self, Write};
use std::ops::Range;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use hyperramsey::bounds::{arrows, tower, upper_bound_value, DEFAULT_BIT_BUDGET};
use hyperramsey::classifier::{check_l1, check_verdict, Classifier, Config, DEFAULT_BUDGET};
use hyperramsey::colorings::{
    audit_coloring, build_oracle, find_mono_copy_with_budget, Oracle, OracleSpec, Predicate, DEFAULT_SEARCH_BUDGET,
};
use hyperramsey::constructions::{generate, GeneratorSpec, Ratio};
use hyperramsey::experiments::{random_classification_experiment, run_paper_suite, SuiteOptions, SuiteReport};
use hyperramsey::{parse_hypergraph, Error, Hypergraph3};

#[derive(Parser)]
#[command(name = "hyperramsey", version, about = "Ramsey growth regimes of 3-uniform hypergraphs")]
struct Cli {
    /// Worker threads for parallel searches (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Search budget (classifier nodes, copy-search placements, arrowing nodes).
    #[arg(long, global = true, env = "HRAMSEY_BUDGET")]
    budget: Option<u64>,
    /// Largest vertex count the classifier accepts.
    #[arg(long, global = true)]
    max_n: Option<usize>,
    /// Random seed for generators and experiments.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Classify a hypergraph file in the text format.
    Classify(ClassifyArgs),
    /// Write a named hypergraph in the text format.
    Gen(GenArgs),
    /// Evaluate a coloring on one triple.
    Color(ColorArgs),
    /// Look for a monochromatic copy of a pattern (exit 1 if there is none).
    Search(SearchArgs),
    /// Check every monochromatic pattern in a window against a predicate
    /// (exit 1 if one fails).
    Audit(AuditArgs),
    /// Evaluate the tower function or the explicit upper bound.
    #[command(subcommand)]
    Bound(BoundCmd),
    /// Decide whether every q-coloring of the triples of [n] has a
    /// monochromatic copy (exit 1 if not).
    Arrows(ArrowsArgs),
    /// Run an experiment suite (exit 1 if a case fails).
    #[command(subcommand)]
    Suite(SuiteCmd),
}

#[derive(Args)]
struct ClassifyArgs {
    file: PathBuf,
    /// Print the verdict with its certificate as JSON.
    #[arg(long)]
    json: bool,
    /// Also decide membership in the forward-colorable closure.
    #[arg(long)]
    l1: bool,
    /// Require a block of size at least two in forward-closure decompositions.
    #[arg(long)]
    strict_l1: bool,
    /// Re-check the certificates from the definitions; exit 1 if one fails.
    #[arg(long)]
    check: bool,
    /// Also print the certificate kind and the bound note.
    #[arg(long, short)]
    verbose: bool,
}

#[derive(Args)]
struct GenArgs {
    /// star, clique, fano, fig2, g_chain, steiner_f2, blowup_example or random.
    name: String,
    #[arg(long)]
    h: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    i: Option<u32>,
    #[arg(long)]
    m: Option<u32>,
    /// Edge probability NUM/DEN for `random`.
    #[arg(long)]
    p: Option<String>,
    /// Output file (default: standard output).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ColorArgs {
    /// Coloring address, e.g. `phi-q:q=4`.
    #[arg(long)]
    oracle: String,
    #[arg(long, num_args = 3, value_names = ["X", "Y", "Z"], required = true)]
    triple: Vec<u64>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    oracle: String,
    /// Pattern file, or a generator such as `clique:n=4` or `fano`.
    #[arg(long)]
    pattern: String,
    /// Host window `A..B` (default: the whole domain).
    #[arg(long)]
    window: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long)]
    oracle: String,
    #[arg(long)]
    window: Option<String>,
    /// Largest subset size.
    #[arg(long = "h", default_value_t = 4)]
    h_max: usize,
    /// in-U, in-L1, tripartite or at-most-one-edge.
    #[arg(long, default_value = "in-U")]
    predicate: String,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum BoundCmd {
    /// tw_k(x).
    Tower {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        x: u64,
        #[command(flatten)]
        out: BoundOut,
    },
    /// (qh)^{q^{ell-1} h^{2 ell} t}.
    Upper {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        h: u64,
        #[arg(long)]
        ell: u32,
        #[arg(long)]
        t: u64,
        #[command(flatten)]
        out: BoundOut,
    },
}

#[derive(Args)]
struct BoundOut {
    /// Refuse values longer than this many bits.
    #[arg(long, default_value_t = DEFAULT_BIT_BUDGET)]
    max_bits: u64,
    /// Print only the bit length.
    #[arg(long)]
    bits: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ArrowsArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    pattern: String,
    #[arg(long)]
    q: u32,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum SuiteCmd {
    /// Every named example with an exact expected value.
    Paper {
        /// Write the JSON report to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Classify random 3-graphs with edge probability C/n^2.
    Random {
        #[arg(long)]
        n: u32,
        #[arg(long = "C")]
        c: u64,
        #[arg(long)]
        samples: u32,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

/// A failure with its exit code.
struct Fail {
    code: u8,
    msg: String,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail { code: if e.is_budget() { 3 } else { 2 }, msg: e.to_string() }
    }
}

fn usage(msg: impl Into<String>) -> Fail {
    Fail { code: 2, msg: msg.into() }
}

type Run = Result<u8, Fail>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn dispatch(cli: &Cli) -> Run {
    match &cli.verb {
        Verb::Classify(a) => classify(cli, a),
        Verb::Gen(a) => gen(cli, a),
        Verb::Color(a) => color(a),
        Verb::Search(a) => search(cli, a),
        Verb::Audit(a) => audit(cli, a),
        Verb::Bound(b) => bound(b),
        Verb::Arrows(a) => arrows_cmd(cli, a),
        Verb::Suite(s) => suite(cli, s),
    }
}

fn config(cli: &Cli, strict_l1: bool) -> Config {
    let mut c = Config { strict_l1, ..Config::default() };
    c.budget = cli.budget.unwrap_or(DEFAULT_BUDGET);
    if let Some(n) = cli.max_n {
        c.max_n = n;
    }
    c
}

fn read_graph(path: &Path) -> Result<Hypergraph3, Fail> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let parsed = parse_hypergraph(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    if parsed.duplicates > 0 {
        eprintln!("warning: {}: {} repeated edge lines ignored", path.display(), parsed.duplicates);
    }
    Ok(parsed.graph)
}

fn print_json(v: &impl serde::Serialize) -> Result<(), Fail> {
    let s = serde_json::to_string_pretty(v).map_err(|e| usage(e.to_string()))?;
    println!("{s}");
    Ok(())
}

fn write_json(path: &Path, v: &impl serde::Serialize) -> Result<(), Fail> {
    let s = serde_json::to_string_pretty(v).map_err(|e| usage(e.to_string()))?;
    fs::write(path, s + "\n").map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn classify(cli: &Cli, a: &ClassifyArgs) -> Run {
    let g = read_graph(&a.file)?;
    let classifier = Classifier::new(config(cli, a.strict_l1));
    let verdict = classifier.classify(&g)?;
    let l1 = if a.l1 { Some(classifier.l1_member(&g)?) } else { None };
    let mut code = 0;
    if a.check {
        if let Err(e) = check_verdict(&g, &verdict) {
            eprintln!("certificate check failed: {e}");
            code = 1;
        }
        if let Some(Err(e)) = l1.as_ref().map(|v| check_l1(&g, v)) {
            eprintln!("forward-closure certificate check failed: {e}");
            code = 1;
        }
    }
    if a.json {
        let mut v = serde_json::to_value(&verdict).map_err(|e| usage(e.to_string()))?;
        if let Some(l1) = &l1 {
            v["l1"] = serde_json::to_value(l1).map_err(|e| usage(e.to_string()))?;
        }
        print_json(&v)?;
    } else {
        let mut line = verdict.summary();
        if let Some(l1) = &l1 {
            line.push_str(if l1.member { " l1=member" } else { " l1=not_member" });
        }
        println!("{line}");
        if a.verbose {
            println!("certificate: {} ({} nodes)", verdict.certificate.kind(), verdict.certificate.size());
            if let Some(lb) = &verdict.lower_bound {
                println!("lower bound: {} ({} nodes)", lb.kind(), lb.size());
            }
            println!("{}", verdict.bounds_note);
        }
    }
    Ok(code)
}

/// Parses `name[:key=value,...]` into a generator, e.g. `star:h=4` or
/// `random:n=8,p=1/2,seed=3`.
fn parse_generator(s: &str, seed: Option<u64>) -> Result<GeneratorSpec, Fail> {
    let (name, rest) = s.split_once(':').unwrap_or((s, ""));
    let mut params = std::collections::BTreeMap::new();
    for item in rest.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| usage(format!("{s:?}: expected key=value, got {item:?}")))?;
        params.insert(k.trim().to_string(), v.trim().to_string());
    }
    let spec = build_generator(name.trim(), &mut params, seed)?;
    if let Some(k) = params.keys().next() {
        return Err(usage(format!("{s:?}: unexpected key {k}")));
    }
    Ok(spec)
}

fn build_generator(
    name: &str,
    params: &mut std::collections::BTreeMap<String, String>,
    seed: Option<u64>,
) -> Result<GeneratorSpec, Fail> {
    let mut int = |k: &str| -> Result<u32, Fail> {
        let v = params.remove(k).ok_or_else(|| usage(format!("{name} needs {k}")))?;
        v.parse().map_err(|_| usage(format!("{k} must be a nonnegative integer, got {v:?}")))
    };
    Ok(match name {
        "star" => GeneratorSpec::Star { h: int("h")? },
        "clique" => GeneratorSpec::Clique { n: int("n")? },
        "fano" => GeneratorSpec::Fano,
        "fig2" => GeneratorSpec::Fig2,
        "g_chain" => GeneratorSpec::GChain { i: int("i")? },
        "steiner_f2" => GeneratorSpec::SteinerF2 { m: int("m")? },
        "blowup_example" => GeneratorSpec::BlowupExample,
        "random" => {
            let n = int("n")?;
            let p = params.remove("p").ok_or_else(|| usage("random needs p"))?;
            let seed = match params.remove("seed") {
                Some(s) => s.parse().map_err(|_| usage(format!("seed must be an integer, got {s:?}")))?,
                None => seed.unwrap_or(0),
            };
            GeneratorSpec::Random { n, p: parse_ratio(&p)?, seed }
        }
        other => return Err(usage(format!("unknown generator {other:?}"))),
    })
}

fn parse_ratio(s: &str) -> Result<Ratio, Fail> {
    let bad = || usage(format!("probability must be NUM/DEN, got {s:?}"));
    let (num, den) = s.split_once('/').ok_or_else(bad)?;
    let num = num.trim().parse().map_err(|_| bad())?;
    let den = den.trim().parse().map_err(|_| bad())?;
    Ok(Ratio::new(num, den)?)
}

fn gen(cli: &Cli, a: &GenArgs) -> Run {
    let mut params = std::collections::BTreeMap::new();
    for (k, v) in [("h", a.h), ("n", a.n), ("i", a.i), ("m", a.m)] {
        if let Some(v) = v {
            params.insert(k.to_string(), v.to_string());
        }
    }
    if let Some(p) = &a.p {
        params.insert("p".into(), p.clone());
    }
    let spec = build_generator(&a.name, &mut params, cli.seed)?;
    if let Some(k) = params.keys().next() {
        return Err(usage(format!("{} does not take --{k}", a.name)));
    }
    let text = generate(&spec)?.to_text();
    match &a.output {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))?,
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| usage(e.to_string()))?,
    }
    Ok(0)
}

fn oracle(address: &str) -> Result<Box<dyn Oracle>, Fail> {
    let spec: OracleSpec = address.parse()?;
    Ok(build_oracle(&spec)?)
}

fn pattern(s: &str, seed: Option<u64>) -> Result<Hypergraph3, Fail> {
    let path = Path::new(s);
    if path.is_file() {
        return read_graph(path);
    }
    Ok(generate(&parse_generator(s, seed)?)?)
}

fn window(s: Option<&str>, oracle: &dyn Oracle) -> Result<Range<u64>, Fail> {
    let Some(s) = s else {
        return Ok(0..u64::try_from(oracle.domain_size()).unwrap_or(u64::MAX));
    };
    let bad = || usage(format!("window must be A..B, got {s:?}"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a = a.trim().parse().map_err(|_| bad())?;
    let b = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok(a..b)
}

fn color(a: &ColorArgs) -> Run {
    let o = oracle(&a.oracle)?;
    let label = o.eval([a.triple[0], a.triple[1], a.triple[2]])?;
    if a.json {
        print_json(&json!({ "oracle": o.name(), "triple": a.triple, "label": label, "display": label.to_string() }))?;
    } else {
        println!("{label}");
    }
    Ok(0)
}

fn search(cli: &Cli, a: &SearchArgs) -> Run {
    let o = oracle(&a.oracle)?;
    let p = pattern(&a.pattern, cli.seed)?;
    let w = window(a.window.as_deref(), o.as_ref())?;
    let budget = cli.budget.unwrap_or(DEFAULT_SEARCH_BUDGET);
    let found = find_mono_copy_with_budget(o.as_ref(), &p, w.clone(), budget)?;
    if a.json {
        let copy = found.as_ref().map(|c| json!({ "map": c.embedding.map, "label": c.label, "display": c.label.to_string() }));
        print_json(&json!({ "oracle": o.name(), "pattern": p, "window": [w.start, w.end], "found": found.is_some(), "copy": copy }))?;
    } else {
        match &found {
            Some(c) => println!("found color={} map={:?}", c.label, c.embedding.map),
            None => println!("none in {}..{}", w.start, w.end),
        }
    }
    Ok(if found.is_some() { 0 } else { 1 })
}

fn audit(cli: &Cli, a: &AuditArgs) -> Run {
    let o = oracle(&a.oracle)?;
    let w = window(a.window.as_deref(), o.as_ref())?;
    let predicate = Predicate::parse(&a.predicate)?;
    let classifier = Classifier::new(config(cli, false));
    let budget = cli.budget.unwrap_or(DEFAULT_SEARCH_BUDGET);
    let r = audit_coloring(o.as_ref(), w, a.h_max, predicate, &classifier, budget)?;
    if a.json {
        print_json(&r)?;
    } else {
        println!(
            "oracle={} window={}..{} h={} predicate={} subsets={} patterns={} all_pass={}",
            r.oracle,
            r.window[0],
            r.window[1],
            r.h_max,
            r.predicate,
            r.subsets_examined,
            r.patterns.len(),
            r.all_pass
        );
        for f in r.patterns.iter().filter(|f| !f.pass) {
            println!("fails: color={} map={:?} edges={:?}", f.label, f.embedding.map, f.pattern.edges());
        }
    }
    Ok(if r.all_pass { 0 } else { 1 })
}

fn bound(b: &BoundCmd) -> Run {
    let (value, out, what) = match b {
        BoundCmd::Tower { k, x, out } => (tower(*k, *x, out.max_bits)?, out, json!({ "function": "tower", "k": k, "x": x })),
        BoundCmd::Upper { q, h, ell, t, out } => (
            upper_bound_value(*q, *h, *ell, *t, out.max_bits)?,
            out,
            json!({ "function": "upper_bound", "q": q, "h": h, "ell": ell, "t": t }),
        ),
    };
    if out.json {
        let mut v = what;
        v["bits"] = json!(value.bits());
        if !out.bits {
            v["value"] = json!(value);
        }
        print_json(&v)?;
    } else if out.bits {
        println!("{}", value.bits());
    } else {
        println!("{value}");
    }
    Ok(0)
}

fn arrows_cmd(cli: &Cli, a: &ArrowsArgs) -> Run {
    let p = pattern(&a.pattern, cli.seed)?;
    let r = arrows(a.n, &p, a.q, cli.budget.unwrap_or(DEFAULT_SEARCH_BUDGET))?;
    if a.json {
        print_json(&r)?;
    } else {
        println!("arrows={} n={} q={} nodes={}", r.arrows, r.n, r.q, r.nodes_explored);
    }
    Ok(if r.arrows { 0 } else { 1 })
}

fn report_suite(r: &SuiteReport, out: Option<&PathBuf>) -> Run {
    for c in &r.cases {
        println!("{} {}: expected {}, observed {}", if c.pass { "pass" } else { "FAIL" }, c.name, c.expected, c.observed);
    }
    for (k, v) in &r.summary {
        println!("{k}: {}", Value::to_string(v));
    }
    if let Some(path) = out {
        write_json(path, r)?;
    }
    Ok(if r.all_pass { 0 } else { 1 })
}

fn suite(cli: &Cli, s: &SuiteCmd) -> Run {
    let config = config(cli, false);
    match s {
        SuiteCmd::Paper { json } => {
            let r = run_paper_suite(&SuiteOptions { config, ..SuiteOptions::default() });
            report_suite(&r, json.as_ref())
        }
        SuiteCmd::Random { n, c, samples, json } => {
            let r = random_classification_experiment(*n, *c, *samples, cli.seed.unwrap_or(0), &config);
            report_suite(&r, json.as_ref())
        }
    }
}

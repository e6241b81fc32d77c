use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hyperramsey::classifier::{Classifier, Config};
use hyperramsey::constructions::{generate, GeneratorSpec};
use hyperramsey::parse_hypergraph;
use jsonschema::JSONSchema;
use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperramsey"))
        .args(args)
        .env_remove("HRAMSEY_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn gen_file(dir: &TempDir, args: &[&str], name: &str) -> PathBuf {
    let path = dir.path().join(name);
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["-o", path.to_str().unwrap()]);
    let o = run(&full);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    path
}

fn schema(name: &str) -> JSONSchema {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas").join(format!("{name}.schema.json"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let value: Value = serde_json::from_str(&text).unwrap();
    JSONSchema::options()
        .with_draft(jsonschema::Draft::Draft202012)
        .compile(&value)
        .unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn assert_valid(name: &str, json: &str) {
    let value: Value = serde_json::from_str(json).unwrap_or_else(|e| panic!("{name} output is not JSON: {e}\n{json}"));
    let s = schema(name);
    let msgs: Vec<String> = match s.validate(&value) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    panic!("{name} output fails its schema:\n{}\n{json}", msgs.join("\n"));
}

#[test]
fn classify_fano_prints_summary() {
    let dir = TempDir::new().unwrap();
    let f = gen_file(&dir, &["fano"], "fano.h3");
    let o = run(&["classify", f.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "regime=SingleExpZone min_ell=2 bound=2^{O(q^2 log q)}");
}

#[test]
fn color_spot_value() {
    let o = run(&["color", "--oracle", "phi-q:q=4", "--triple", "1", "4", "6"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "(1,1)");
}

#[test]
fn usage_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("nosuchfile.h3");
    assert_eq!(code(&run(&["classify", missing.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["classify", "--bogus", "x"])), 2);
    assert_eq!(code(&run(&["gen", "star"])), 2);
    assert_eq!(code(&run(&["color", "--oracle", "mystery:q=1", "--triple", "0", "1", "2"])), 2);
    assert_eq!(code(&run(&["search", "--oracle", "phi-q:q=4", "--pattern", "clique:n=4", "--window", "9..3"])), 2);

    let bad = dir.path().join("bad.h3");
    std::fs::write(&bad, "3\n0 1\n").unwrap();
    assert_eq!(code(&run(&["classify", bad.to_str().unwrap()])), 2);
}

#[test]
fn negative_decisions_exit_1() {
    let o = run(&["search", "--oracle", "phi-q:q=4", "--pattern", "clique:n=4"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o).trim(), "none in 0..16");
    assert_eq!(code(&run(&["arrows", "--n", "5", "--pattern", "clique:n=4", "--q", "2"])), 1);
    assert_eq!(code(&run(&["audit", "--oracle", "phi-q:q=4", "--predicate", "tripartite"])), 1);
}

#[test]
fn positive_decisions_exit_0() {
    let o = run(&["search", "--oracle", "phi-q:q=4", "--pattern", "star:h=4"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("found color="));
    assert_eq!(code(&run(&["arrows", "--n", "7", "--pattern", "star:h=4", "--q", "2"])), 0);
    assert_eq!(code(&run(&["audit", "--oracle", "phi-q:q=4"])), 0);
}

#[test]
fn budget_overruns_exit_3() {
    let dir = TempDir::new().unwrap();
    let f = gen_file(&dir, &["g_chain", "--i", "2"], "chain.h3");
    assert_eq!(code(&run(&["--budget", "1", "classify", f.to_str().unwrap()])), 3);
    let o = Command::new(env!("CARGO_BIN_EXE_hyperramsey"))
        .args(["classify", f.to_str().unwrap()])
        .env("HRAMSEY_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
    assert_eq!(code(&run(&["--max-n", "4", "classify", f.to_str().unwrap()])), 3);
    assert_eq!(code(&run(&["bound", "tower", "--k", "5", "--x", "2", "--max-bits", "1000"])), 3);
}

#[test]
fn check_flag_validates_certificates() {
    let dir = TempDir::new().unwrap();
    let f = gen_file(&dir, &["blowup_example"], "blowup.h3");
    let o = run(&["classify", f.to_str().unwrap(), "--check", "--l1"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("min_ell=2"));
    assert!(stdout(&o).trim_end().ends_with("l1=not_member"));
}

#[test]
fn gen_then_classify_matches_in_memory() {
    let dir = TempDir::new().unwrap();
    let cases: Vec<(Vec<&str>, GeneratorSpec)> = vec![
        (vec!["star", "--h", "5"], GeneratorSpec::Star { h: 5 }),
        (vec!["clique", "--n", "4"], GeneratorSpec::Clique { n: 4 }),
        (vec!["fano"], GeneratorSpec::Fano),
        (vec!["fig2"], GeneratorSpec::Fig2),
        (vec!["g_chain", "--i", "2"], GeneratorSpec::GChain { i: 2 }),
        (vec!["steiner_f2", "--m", "3"], GeneratorSpec::SteinerF2 { m: 3 }),
        (vec!["blowup_example"], GeneratorSpec::BlowupExample),
    ];
    let mut cases = cases;
    for seed in 0..4u64 {
        let p = hyperramsey::constructions::Ratio::new(1, 3).unwrap();
        cases.push((vec![], GeneratorSpec::Random { n: 9, p, seed }));
    }
    let classifier = Classifier::new(Config::default());
    for (i, (args, spec)) in cases.iter().enumerate() {
        let seed;
        let owned: Vec<&str> = if args.is_empty() {
            let GeneratorSpec::Random { seed: s, .. } = spec else { unreachable!() };
            seed = s.to_string();
            vec!["--seed", &seed, "random", "--n", "9", "--p", "1/3"]
        } else {
            args.clone()
        };
        let path = dir.path().join(format!("g{i}.h3"));
        let mut full = if owned[0] == "--seed" { vec![owned[0], owned[1], "gen"] } else { vec!["gen"] };
        full.extend(owned.iter().skip(if owned[0] == "--seed" { 2 } else { 0 }));
        full.extend(["-o", path.to_str().unwrap()]);
        assert_eq!(code(&run(&full)), 0, "{full:?}");

        let g = generate(spec).unwrap();
        let read = parse_hypergraph(&std::fs::read_to_string(&path).unwrap()).unwrap().graph;
        assert_eq!(read, g, "{full:?}");

        let o = run(&["classify", path.to_str().unwrap(), "--json"]);
        assert_eq!(code(&o), 0);
        let from_cli: Value = serde_json::from_str(&stdout(&o)).unwrap();
        let in_memory = serde_json::to_value(classifier.classify(&g).unwrap()).unwrap();
        assert_eq!(from_cli, in_memory, "{full:?}");
    }
}

#[test]
fn json_outputs_match_schemas() {
    let dir = TempDir::new().unwrap();
    for (args, name) in [
        (vec!["fano"], "fano.h3"),
        (vec!["fig2"], "fig2.h3"),
        (vec!["blowup_example"], "blowup.h3"),
        (vec!["g_chain", "--i", "2"], "chain.h3"),
        (vec!["clique", "--n", "4"], "k4.h3"),
    ] {
        let f = gen_file(&dir, &args, name);
        let o = run(&["classify", f.to_str().unwrap(), "--json", "--l1"]);
        assert_eq!(code(&o), 0);
        assert_valid("verdict", &stdout(&o));
    }
    // Sparse random graphs outside every level carry shared lemmas.
    for seed in 0..6 {
        let s = seed.to_string();
        let path = dir.path().join(format!("r{seed}.h3"));
        run(&["--seed", &s, "gen", "random", "--n", "9", "--p", "1/4", "-o", path.to_str().unwrap()]);
        let o = run(&["classify", path.to_str().unwrap(), "--json"]);
        assert_valid("verdict", &stdout(&o));
    }

    for (oracle, triple) in [
        ("phi-q:q=4", ["1", "4", "6"]),
        ("product:q=2,N=4,seed=0", ["0", "1", "5"]),
        ("product:q=2,N=4,seed=0", ["0", "1", "2"]),
        ("tripartite:q=54,N=16,seed=1", ["0", "1", "2"]),
        ("rainbow:N=6", ["0", "1", "2"]),
    ] {
        let o = run(&["color", "--oracle", oracle, "--triple", triple[0], triple[1], triple[2], "--json"]);
        assert_eq!(code(&o), 0, "{oracle}: {}", String::from_utf8_lossy(&o.stderr));
        assert_valid("color", &stdout(&o));
    }

    for pattern in ["star:h=4", "clique:n=4"] {
        let o = run(&["search", "--oracle", "phi-q:q=4", "--pattern", pattern, "--json"]);
        assert_valid("search", &stdout(&o));
    }

    for predicate in ["in-U", "tripartite"] {
        let o = run(&["audit", "--oracle", "phi-q:q=4", "--predicate", predicate, "--json"]);
        assert_valid("audit", &stdout(&o));
    }

    for args in [
        vec!["bound", "tower", "--k", "3", "--x", "2", "--json"],
        vec!["bound", "upper", "--q", "2", "--h", "4", "--ell", "1", "--t", "8", "--json"],
        vec!["bound", "upper", "--q", "2", "--h", "4", "--ell", "1", "--t", "8", "--json", "--bits"],
    ] {
        let o = run(&args);
        assert_eq!(code(&o), 0);
        assert_valid("bound", &stdout(&o));
    }

    for (n, pattern) in [("5", "clique:n=4"), ("7", "star:h=4")] {
        let o = run(&["arrows", "--n", n, "--pattern", pattern, "--q", "2", "--json"]);
        assert_valid("arrows", &stdout(&o));
    }

    let report = dir.path().join("random.json");
    let o = run(&["--seed", "3", "suite", "random", "--n", "7", "--C", "20", "--samples", "5", "--json", report.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_valid("suite", &std::fs::read_to_string(&report).unwrap());
}

#[test]
fn certificate_schema_accepts_every_node() {
    let s = schema("certificate");
    let h = schema("hypergraph");
    let g = generate(&GeneratorSpec::Fano).unwrap();
    assert!(h.is_valid(&serde_json::to_value(&g).unwrap()));
    let v = Classifier::new(Config::default()).classify(&g).unwrap();
    assert!(s.is_valid(&serde_json::to_value(&v.certificate).unwrap()));
    assert!(!s.is_valid(&serde_json::json!({ "kind": "guess", "witness": {}, "children": [] })));
}

#[test]
fn bound_values() {
    let o = run(&["bound", "tower", "--k", "3", "--x", "2"]);
    assert_eq!(stdout(&o).trim(), "16");
    let o = run(&["bound", "upper", "--q", "2", "--h", "4", "--ell", "1", "--t", "8", "--bits"]);
    assert_eq!(stdout(&o).trim(), "385");
}

#[test]
fn suite_reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let paths: Vec<PathBuf> = (0..2).map(|i| dir.path().join(format!("r{i}.json"))).collect();
    for p in &paths {
        let o = run(&["--seed", "5", "suite", "random", "--n", "8", "--C", "20", "--samples", "6", "--json", p.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
    }
    assert_eq!(std::fs::read(&paths[0]).unwrap(), std::fs::read(&paths[1]).unwrap());
}

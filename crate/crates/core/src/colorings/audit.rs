use std::collections::BTreeMap;
use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{canonical_key, CanonicalKey};
use crate::classifier::Classifier;
use crate::embed::Embedding;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph3;

use super::{check_window, ColorLabel, Oracle};

/// Property every monochromatic pattern is expected to have.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Predicate {
    /// Finite level in the collapse hierarchy.
    InU,
    /// Member of the forward-colorable closure.
    InL1,
    Tripartite,
    AtMostOneEdge,
}

impl Predicate {
    pub const ALL: [Predicate; 4] = [Predicate::InU, Predicate::InL1, Predicate::Tripartite, Predicate::AtMostOneEdge];

    pub fn name(self) -> &'static str {
        match self {
            Predicate::InU => "in-U",
            Predicate::InL1 => "in-L1",
            Predicate::Tripartite => "tripartite",
            Predicate::AtMostOneEdge => "at-most-one-edge",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Predicate::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParam(format!("unknown predicate {s:?}")))
    }

    pub fn eval(self, classifier: &Classifier, g: &Hypergraph3) -> Result<bool> {
        match self {
            Predicate::InU => Ok(classifier.level(g)?.is_finite()),
            Predicate::InL1 => classifier.is_l1(g),
            Predicate::Tripartite => Ok(crate::analysis::is_tripartite(g)?.is_some()),
            Predicate::AtMostOneEdge => Ok(g.edge_count() <= 1),
        }
    }
}

/// One distinct monochromatic pattern and its least example.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternFinding {
    pub key: CanonicalKey,
    /// The color class restricted to the example subset, without isolated
    /// vertices, labeled in increasing host order.
    pub pattern: Hypergraph3,
    pub embedding: Embedding,
    pub label: ColorLabel,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub oracle: String,
    pub window: [u64; 2],
    pub h_max: usize,
    pub predicate: String,
    pub subsets_examined: u64,
    /// Sorted by canonical key.
    pub patterns: Vec<PatternFinding>,
    pub all_pass: bool,
}

impl AuditReport {
    /// Every example still maps its pattern onto triples of its label.
    pub fn revalidate(&self, oracle: &dyn Oracle) -> bool {
        self.patterns.iter().all(|f| {
            f.embedding.is_injective()
                && f.embedding.map.len() == f.pattern.n()
                && f.pattern.edges().iter().all(|&e| oracle.eval(f.embedding.image(e)).ok().as_ref() == Some(&f.label))
        })
    }
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Largest subset size an audit accepts.
const AUDIT_MAX_H: usize = 16;

/// Enumerates every subset of `window` with 3 to `h_max` elements; for each
/// subset and color, the triples of that color inside the subset form a
/// pattern. Distinct patterns (up to isomorphism) are tested against
/// `predicate` once each. Fails if more than `budget` subsets would be
/// examined.
pub fn audit_coloring(
    oracle: &dyn Oracle,
    window: Range<u64>,
    h_max: usize,
    predicate: Predicate,
    classifier: &Classifier,
    budget: u64,
) -> Result<AuditReport> {
    check_window(oracle, &window)?;
    if !(3..=AUDIT_MAX_H).contains(&h_max) {
        return Err(Error::InvalidParam(format!("h_max must lie in 3..={AUDIT_MAX_H}, got {h_max}")));
    }
    let w = window.end - window.start;
    let subsets = (3..=h_max as u64).fold(0u64, |acc, k| acc.saturating_add(binom(w, k)));
    if subsets > budget {
        return Err(Error::BudgetExceeded { what: "coloring audit", budget });
    }

    let found: BTreeMap<CanonicalKey, (Hypergraph3, Embedding, u32)> = window
        .clone()
        .into_par_iter()
        .map(|first| {
            let mut local = BTreeMap::new();
            let mut subset = vec![first];
            for_each_subset(&mut subset, first + 1, window.end, h_max, &mut |s| record(oracle, s, &mut local));
            local
        })
        .reduce(BTreeMap::new, merge);

    let mut patterns = Vec::with_capacity(found.len());
    for (key, (pattern, embedding, id)) in found {
        let pass = predicate.eval(classifier, &pattern)?;
        patterns.push(PatternFinding { key, pattern, embedding, label: oracle.label(id), pass });
    }
    let all_pass = patterns.iter().all(|f| f.pass);
    Ok(AuditReport {
        oracle: oracle.name(),
        window: [window.start, window.end],
        h_max,
        predicate: predicate.name().to_string(),
        subsets_examined: subsets,
        patterns,
        all_pass,
    })
}

fn for_each_subset(subset: &mut Vec<u64>, from: u64, end: u64, h_max: usize, f: &mut impl FnMut(&[u64])) {
    if subset.len() >= 3 {
        f(subset);
    }
    if subset.len() == h_max {
        return;
    }
    for x in from..end {
        subset.push(x);
        for_each_subset(subset, x + 1, end, h_max, f);
        subset.pop();
    }
}

type Found = BTreeMap<CanonicalKey, (Hypergraph3, Embedding, u32)>;

fn record(oracle: &dyn Oracle, s: &[u64], found: &mut Found) {
    let h = s.len();
    let mut classes: BTreeMap<u32, Vec<[usize; 3]>> = BTreeMap::new();
    for a in 0..h {
        for b in a + 1..h {
            for c in b + 1..h {
                classes.entry(oracle.color_id([s[a], s[b], s[c]])).or_default().push([a, b, c]);
            }
        }
    }
    for (id, triples) in classes {
        let mut used = vec![false; h];
        for t in &triples {
            for &v in t {
                used[v] = true;
            }
        }
        let mut index = vec![0u32; h];
        let mut map = Vec::new();
        for v in 0..h {
            if used[v] {
                index[v] = map.len() as u32;
                map.push(s[v]);
            }
        }
        let edges = triples.iter().map(|t| t.map(|v| index[v]));
        let pattern = Hypergraph3::new(map.len(), edges).expect("valid triples");
        let key = canonical_key(&pattern);
        let candidate = (pattern, Embedding { map }, id);
        keep_least(found, key, candidate);
    }
}

fn keep_least(found: &mut Found, key: CanonicalKey, candidate: (Hypergraph3, Embedding, u32)) {
    match found.get(&key) {
        Some(old) if (&old.1, old.2) <= (&candidate.1, candidate.2) => {}
        _ => {
            found.insert(key, candidate);
        }
    }
}

fn merge(mut a: Found, b: Found) -> Found {
    for (k, v) in b {
        keep_least(&mut a, k, v);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::super::{find_mono_copy, random_tripartite_coloring, PhiQ, Rainbow, TripartiteDraw};
    use super::*;
    use crate::classifier::Config;

    fn classifier() -> Classifier {
        Classifier::new(Config::default())
    }

    #[test]
    fn stepping_up_patterns_have_finite_level() {
        let phi = PhiQ::new(4).unwrap();
        let r = audit_coloring(&phi, 0..16, 4, Predicate::InU, &classifier(), 1 << 20).unwrap();
        assert_eq!(r.subsets_examined, 560 + 1820);
        assert!(r.all_pass);
        assert!(!r.patterns.is_empty());
        assert!(r.revalidate(&phi));
        assert!(r.patterns.windows(2).all(|w| w[0].key < w[1].key));
        for f in &r.patterns {
            let lo = *f.embedding.map.iter().min().unwrap();
            let hi = *f.embedding.map.iter().max().unwrap();
            assert!(find_mono_copy(&phi, &f.pattern, lo..hi + 1).unwrap().is_some());
        }
    }

    #[test]
    fn rainbow_classes_are_single_edges() {
        let r = Rainbow::new(6).unwrap();
        let report = audit_coloring(&r, 0..6, 4, Predicate::AtMostOneEdge, &classifier(), 1 << 20).unwrap();
        assert!(report.all_pass);
        assert_eq!(report.patterns.len(), 1);
    }

    #[test]
    fn tripartite_classes_are_tripartite() {
        let TripartiteDraw::Total(c) = random_tripartite_coloring(40, 8, 2).unwrap() else {
            panic!("seed 2 colors every triple")
        };
        let report = audit_coloring(&c, 0..8, 4, Predicate::Tripartite, &classifier(), 1 << 20).unwrap();
        assert!(report.all_pass);
    }

    #[test]
    fn failing_predicate_is_reported() {
        let phi = PhiQ::new(4).unwrap();
        let report = audit_coloring(&phi, 0..8, 4, Predicate::AtMostOneEdge, &classifier(), 1 << 20).unwrap();
        assert!(!report.all_pass);
        assert!(report.patterns.iter().any(|f| f.pass));
    }

    #[test]
    fn limits() {
        let phi = PhiQ::new(4).unwrap();
        assert!(audit_coloring(&phi, 0..16, 4, Predicate::InU, &classifier(), 100).unwrap_err().is_budget());
        assert!(audit_coloring(&phi, 0..16, 2, Predicate::InU, &classifier(), 100).is_err());
        assert!(audit_coloring(&phi, 0..17, 3, Predicate::InU, &classifier(), 1000).is_err());
        assert_eq!(Predicate::parse("IN-u").unwrap(), Predicate::InU);
        assert!(Predicate::parse("nope").is_err());
    }

    #[test]
    fn deterministic_reports() {
        let phi = PhiQ::new(6).unwrap();
        let a = audit_coloring(&phi, 3..20, 4, Predicate::InU, &classifier(), 1 << 20).unwrap();
        let b = audit_coloring(&phi, 3..20, 4, Predicate::InU, &classifier(), 1 << 20).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}

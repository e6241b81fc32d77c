//! Certificate checking from the raw definitions. Nothing here calls the
//! search code: witnesses are re-validated with the straight-from-definition
//! checkers, collapses are recomputed from the edge formula, and exhaustion
//! records are compared against brute-force enumerations.

use std::fmt;

use crate::analysis::witness::{
    brute_force_collapsible_sets, brute_force_forward_colorable, brute_force_has_transversal, brute_force_tripartite,
    check_collapsible, check_forward, check_transversal, check_tripartition, collapse_from_definition,
    quotient_from_definition,
};
use crate::analysis::OrderedPartition;
use crate::hypergraph::{Hypergraph3, VertexSet};

use super::certificate::{Bound, Certificate, Ell, L1Reason, Side};
use super::{bounds_note, Degeneracy, L1Verdict, Regime, Verdict};

/// Largest graph on which exhaustion records are re-enumerated.
const EXHAUSTIVE_CHECK_CAP: usize = 24;
/// Largest graph on which forward-colorability is refuted by brute force.
const FORWARD_CHECK_CAP: usize = 9;

/// Where in the certificate tree a check failed, and why.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckError {
    pub path: String,
    pub reason: String,
}

impl fmt::Display for CheckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {}: {}", self.path, self.reason)
    }
}

impl std::error::Error for CheckError {}

type Check<T> = Result<T, CheckError>;

fn fail<T>(path: &str, reason: impl Into<String>) -> Check<T> {
    Err(CheckError { path: path.to_string(), reason: reason.into() })
}

fn ensure(ok: bool, path: &str, reason: impl FnOnce() -> String) -> Check<()> {
    if ok {
        Ok(())
    } else {
        fail(path, reason())
    }
}

pub fn check_verdict(g: &Hypergraph3, v: &Verdict) -> Check<()> {
    let path = "verdict";
    ensure(v.regime == Regime::of(v.min_ell), path, || format!("regime {:?} does not match min_ell {}", v.regime, v.min_ell))?;
    let degenerate = match g.edge_count() {
        0 => Some(Degeneracy::Edgeless),
        1 => Some(Degeneracy::SingleEdge),
        _ => None,
    };
    ensure(v.degenerate == degenerate, path, || format!("degeneracy flag should be {degenerate:?}"))?;
    ensure(v.bounds_note == bounds_note(v.min_ell, g), path, || format!("bounds note `{}` does not match", v.bounds_note))?;
    match v.min_ell {
        Ell::Finite(k) => {
            let proven = member(g, &v.certificate, "certificate")?;
            ensure(proven <= k, "certificate", || format!("proves level {proven}, not {k}"))?;
            match (&v.lower_bound, k) {
                (None, 0) => Ok(()),
                (Some(_), 0) => fail("lower_bound", "level 0 needs no lower bound"),
                (None, _) => fail("lower_bound", format!("missing proof that G is outside level {}", k - 1)),
                (Some(lb), _) => {
                    let b = exclusion(g, lb, "lower_bound")?;
                    ensure(b.covers(k - 1), "lower_bound", || format!("rules out {b:?}, not level {}", k - 1))
                }
            }
        }
        Ell::Infinite => {
            ensure(v.lower_bound.is_none(), "lower_bound", || "unexpected for an infinite level".into())?;
            let b = exclusion(g, &v.certificate, "certificate")?;
            ensure(b == Bound::Unbounded, "certificate", || format!("rules out only {b:?}"))
        }
    }
}

fn isolated_vertices(g: &Hypergraph3) -> (VertexSet, VertexSet) {
    (0..g.n() as u32).partition(|&v| g.edges().iter().all(|e| !e.contains(&v)))
}

fn strip<'a>(g: &Hypergraph3, isolated: &[u32], path: &str) -> Check<Hypergraph3> {
    let (iso, rest) = isolated_vertices(g);
    ensure(iso == isolated, path, || format!("isolated vertices are {iso:?}, certificate lists {isolated:?}"))?;
    Ok(g.induced(&rest).expect("vertices are in range"))
}

fn sub(path: &str, step: impl fmt::Display) -> String {
    format!("{path}/{step}")
}

/// Level `k` such that the certificate proves `g ∈ U_k`.
fn member(g: &Hypergraph3, cert: &Certificate, path: &str) -> Check<u32> {
    match cert {
        Certificate::Tripartite(p) => {
            ensure(check_tripartition(g, p), path, || "parts are not a tripartition".into())?;
            Ok(0)
        }
        Certificate::Transversal(w) => {
            ensure(check_transversal(g, w), path, || format!("{w:?} is not an exact transversal"))?;
            Ok(1)
        }
        Certificate::Collapse { set, level, h, f } => {
            ensure(*level >= 1, path, || "collapse steps claim level >= 1".into())?;
            ensure(check_collapsible(g, set), path, || format!("{set:?} is not collapsible"))?;
            let hg = collapse_from_definition(g, set);
            let fg = g.induced(set).expect("checked in range");
            let kh = member(&hg, h, &sub(path, "h"))?;
            ensure(kh < *level, path, || format!("quotient proven at level {kh}, need {}", level - 1))?;
            let kf = member(&fg, f, &sub(path, "f"))?;
            ensure(kf <= *level, path, || format!("part proven at level {kf}, need {level}"))?;
            Ok(*level)
        }
        Certificate::Strip { isolated, child } => {
            let rest = strip(g, isolated, path)?;
            member(&rest, child, &sub(path, "strip"))
        }
        other => fail(path, format!("`{}` does not prove membership", other.kind())),
    }
}

/// Lemmas already verified: graph `i` is ruled out as far as `proven[i]`.
struct Proven<'a> {
    graphs: Vec<&'a Hypergraph3>,
    proven: Vec<Bound>,
}

/// Whether `map` is a permutation taking `g` exactly onto `target`.
fn relabels_onto(g: &Hypergraph3, map: &[u32], target: &Hypergraph3) -> bool {
    let n = g.n();
    if map.len() != n || target.n() != n || target.edge_count() != g.edge_count() {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in map {
        if v as usize >= n || std::mem::replace(&mut seen[v as usize], true) {
            return false;
        }
    }
    let mut mapped: Vec<[u32; 3]> = g
        .edges()
        .iter()
        .map(|e| {
            let mut t = e.map(|v| map[v as usize]);
            t.sort_unstable();
            t
        })
        .collect();
    mapped.sort_unstable();
    mapped == target.edges()
}

fn exclusion(g: &Hypergraph3, cert: &Certificate, path: &str) -> Check<Bound> {
    exclusion_in(g, cert, path, &Proven { graphs: Vec::new(), proven: Vec::new() })
}

/// What the certificate rules out for `g`, citing the verified lemmas in `ctx`.
fn exclusion_in(g: &Hypergraph3, cert: &Certificate, path: &str, ctx: &Proven) -> Check<Bound> {
    let (below, record) = match cert {
        Certificate::Strip { isolated, child } => {
            let rest = strip(g, isolated, path)?;
            return exclusion_in(&rest, child, &sub(path, "strip"), ctx);
        }
        Certificate::Shared { lemmas, root } => {
            ensure(ctx.graphs.is_empty(), path, || "shared proofs do not nest".into())?;
            let mut inner = Proven { graphs: Vec::with_capacity(lemmas.len()), proven: Vec::with_capacity(lemmas.len()) };
            for (i, l) in lemmas.iter().enumerate() {
                let b = exclusion_in(&l.graph, &l.certificate, &sub(path, format_args!("lemma[{i}]")), &inner)?;
                inner.graphs.push(&l.graph);
                inner.proven.push(b);
            }
            return exclusion_in(g, root, &sub(path, "root"), &inner);
        }
        Certificate::Lemma { index, map } => {
            ensure(*index < ctx.proven.len(), path, || format!("lemma {index} is not available here"))?;
            ensure(relabels_onto(g, map, ctx.graphs[*index]), path, || format!("map does not carry G onto lemma {index}"))?;
            return Ok(ctx.proven[*index]);
        }
        Certificate::Exhausted { below, record } => (*below, record),
        other => return fail(path, format!("`{}` does not prove non-membership", other.kind())),
    };
    ensure(g.n() <= EXHAUSTIVE_CHECK_CAP, path, || format!("{} vertices is too many to re-enumerate", g.n()))?;
    if below == Bound::Level(0) {
        ensure(record.is_empty(), path, || "level-0 exclusion carries no record".into())?;
        ensure(!brute_force_tripartite(g), path, || "graph is tripartite".into())?;
        return Ok(below);
    }
    ensure(!brute_force_has_transversal(g), path, || "graph has an exact transversal".into())?;
    let sets = brute_force_collapsible_sets(g);
    let listed: Vec<&VertexSet> = record.iter().map(|e| &e.set).collect();
    ensure(listed.iter().copied().eq(sets.iter()), path, || {
        format!("record lists {} sets, the graph has {} collapsible sets {sets:?}", listed.len(), sets.len())
    })?;
    for (i, e) in record.iter().enumerate() {
        let p = sub(path, format_args!("record[{i}]"));
        match e.side {
            Side::H => {
                let hg = collapse_from_definition(g, &e.set);
                let b = exclusion_in(&hg, &e.proof, &p, ctx)?;
                let ok = match below {
                    Bound::Level(k) => b.covers(k - 1),
                    Bound::Unbounded => b == Bound::Unbounded,
                };
                ensure(ok, &p, || format!("quotient exclusion {b:?} is too weak for {below:?}"))?;
            }
            Side::F => {
                let fg = g.induced(&e.set).expect("collapsible sets are in range");
                let b = exclusion_in(&fg, &e.proof, &p, ctx)?;
                let ok = match below {
                    Bound::Level(k) => b.covers(k),
                    Bound::Unbounded => b == Bound::Unbounded,
                };
                ensure(ok, &p, || format!("part exclusion {b:?} is too weak for {below:?}"))?;
            }
        }
    }
    Ok(below)
}

/// Re-validates a forward-closure verdict.
pub fn check_l1(g: &Hypergraph3, v: &L1Verdict) -> Check<()> {
    if v.member {
        l1_in(g, &v.certificate, "certificate")
    } else {
        l1_out(g, &v.certificate, "certificate")
    }
}

fn l1_in(g: &Hypergraph3, cert: &Certificate, path: &str) -> Check<()> {
    match cert {
        Certificate::Forward(p) => ensure(check_forward(g, p), path, || format!("{:?} is not a forward coloring", p.blocks)),
        Certificate::Decompose { partition, h, parts } => {
            ensure(partition.len() >= 2, path, || "decomposition needs at least two blocks".into())?;
            let Some(q) = quotient_from_definition(g, partition) else {
                return fail(path, format!("{:?} is not a decomposition", partition.blocks));
            };
            let Certificate::Tripartite(tp) = h.as_ref() else {
                return fail(&sub(path, "h"), "quotient needs a tripartition");
            };
            ensure(check_tripartition(&q, tp), &sub(path, "h"), || "quotient tripartition is invalid".into())?;
            ensure(parts.len() == partition.len(), path, || "one certificate per block is required".into())?;
            for (i, (b, c)) in partition.blocks.iter().zip(parts).enumerate() {
                l1_in(&g.induced(b).expect("partition checked"), c, &sub(path, format_args!("part[{i}]")))?;
            }
            Ok(())
        }
        other => fail(path, format!("`{}` does not prove forward-closure membership", other.kind())),
    }
}

fn all_set_partitions(n: usize) -> Vec<Vec<VertexSet>> {
    if n == 0 {
        return vec![vec![]];
    }
    let v = (n - 1) as u32;
    let mut out = Vec::new();
    for p in all_set_partitions(n - 1) {
        for i in 0..p.len() {
            let mut q = p.clone();
            q[i].push(v);
            out.push(q);
        }
        let mut q = p;
        q.push(vec![v]);
        out.push(q);
    }
    out
}

fn normalized(blocks: &[VertexSet]) -> Vec<VertexSet> {
    let mut b: Vec<VertexSet> = blocks
        .iter()
        .map(|x| {
            let mut x = x.clone();
            x.sort_unstable();
            x
        })
        .collect();
    b.sort();
    b
}

fn l1_out(g: &Hypergraph3, cert: &Certificate, path: &str) -> Check<()> {
    let Certificate::NotL1 { strict, record } = cert else {
        return fail(path, format!("`{}` does not refute forward-closure membership", cert.kind()));
    };
    ensure(g.n() <= FORWARD_CHECK_CAP, path, || format!("{} vertices is too many to refute by brute force", g.n()))?;
    ensure(brute_force_forward_colorable(g, FORWARD_CHECK_CAP) == Some(false), path, || "graph is forward-colorable".into())?;
    let mut expected: Vec<Vec<VertexSet>> = all_set_partitions(g.n())
        .into_iter()
        .filter(|p| p.len() >= 2 && !(*strict && p.iter().all(|b| b.len() < 2)))
        .filter(|p| quotient_from_definition(g, &OrderedPartition::new(p.clone())).is_some())
        .map(|p| normalized(&p))
        .collect();
    expected.sort();
    let mut listed: Vec<Vec<VertexSet>> = record.iter().map(|e| normalized(&e.partition.blocks)).collect();
    listed.sort();
    ensure(listed == expected, path, || {
        format!("record lists {} partitions, expected {}", listed.len(), expected.len())
    })?;
    for (i, e) in record.iter().enumerate() {
        let p = sub(path, format_args!("record[{i}]"));
        let Some(q) = quotient_from_definition(g, &e.partition) else {
            return fail(&p, "not a decomposition");
        };
        match &e.reason {
            L1Reason::Quotient => ensure(!brute_force_tripartite(&q), &p, || "quotient is tripartite".into())?,
            L1Reason::Part { index, proof } => {
                let Some(b) = e.partition.blocks.get(*index) else {
                    return fail(&p, format!("no block {index}"));
                };
                l1_out(&g.induced(b).expect("partition checked"), proof, &sub(&p, format_args!("part[{index}]")))?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::Partition3;
    use crate::classifier::{classify, l1_member, ExhaustEntry};

    fn k4() -> Hypergraph3 {
        Hypergraph3::new(4, [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]).unwrap()
    }

    fn fano() -> Hypergraph3 {
        Hypergraph3::new(7, [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]]).unwrap()
    }

    #[test]
    fn fano_verdict_checks_and_tampering_fails() {
        let g = fano();
        let v = classify(&g).unwrap();
        assert_eq!(check_verdict(&g, &v), Ok(()));
        let mut t = v.clone();
        t.min_ell = Ell::Finite(1);
        t.bounds_note = bounds_note(Ell::Finite(1), &g);
        assert!(check_verdict(&g, &t).is_err());
        let mut t = v.clone();
        t.lower_bound = None;
        assert!(check_verdict(&g, &t).is_err());
    }

    #[test]
    fn fabricated_collapse_on_clique_fails() {
        let g = k4();
        let mut v = classify(&g).unwrap();
        assert_eq!(check_verdict(&g, &v), Ok(()));
        let point = Certificate::Tripartite(Partition3 { parts: [vec![0], vec![1], vec![2]] });
        v.min_ell = Ell::Finite(2);
        v.regime = Regime::SingleExpZone;
        v.bounds_note = bounds_note(Ell::Finite(2), &g);
        v.certificate = Certificate::Collapse { set: vec![0, 1], level: 2, h: Box::new(point.clone()), f: Box::new(point) };
        v.lower_bound = Some(Certificate::Exhausted { below: Bound::Level(1), record: vec![] });
        let err = check_verdict(&g, &v).unwrap_err();
        assert!(err.reason.contains("not collapsible"), "{err}");
    }

    #[test]
    fn exhaustion_must_list_every_collapsible_set() {
        let fig2 = Hypergraph3::new(5, [[0, 2, 3], [1, 2, 3], [0, 2, 4], [1, 3, 4], [2, 3, 4]]).unwrap();
        let v = classify(&fig2).unwrap();
        assert_eq!(check_verdict(&fig2, &v), Ok(()));
        let mut t = v.clone();
        t.certificate = Certificate::Exhausted { below: Bound::Unbounded, record: vec![] };
        assert!(check_verdict(&fig2, &t).is_err());
        let mut t = v;
        t.certificate = Certificate::Exhausted {
            below: Bound::Unbounded,
            record: vec![ExhaustEntry {
                set: vec![0, 1],
                side: Side::F,
                proof: Certificate::Exhausted { below: Bound::Unbounded, record: vec![] },
            }],
        };
        assert!(check_verdict(&fig2, &t).is_err());
    }

    #[test]
    fn l1_certificates_check() {
        for g in [fano(), k4(), Hypergraph3::new(4, [[0, 1, 2], [0, 1, 3], [0, 2, 3]]).unwrap()] {
            let v = l1_member(&g).unwrap();
            assert_eq!(check_l1(&g, &v), Ok(()));
            let flipped = L1Verdict { member: !v.member, certificate: v.certificate.clone() };
            assert!(check_l1(&g, &flipped).is_err());
        }
    }

    /// First verdict among sparse random graphs whose proof shares lemmas.
    fn shared_verdict() -> (Hypergraph3, Verdict) {
        use crate::constructions::{random_g3, Ratio};
        (0..)
            .map(|seed| random_g3(9, Ratio::new(1, 4).unwrap(), seed))
            .find_map(|g| {
                let v = classify(&g).unwrap();
                matches!(v.certificate, Certificate::Shared { .. }).then_some((g, v))
            })
            .unwrap()
    }

    #[test]
    fn shared_lemmas_check_and_reject_tampering() {
        let (g, v) = shared_verdict();
        assert_eq!(check_verdict(&g, &v), Ok(()));
        let Certificate::Shared { lemmas, root } = &v.certificate else { unreachable!() };

        // a lemma citing itself
        let mut t = v.clone();
        let mut bad = lemmas.clone();
        bad[0].certificate = Certificate::Lemma { index: 0, map: (0..bad[0].graph.n() as u32).collect() };
        t.certificate = Certificate::Shared { lemmas: bad, root: root.clone() };
        assert!(check_verdict(&g, &t).is_err());

        // a lemma about a different graph
        let mut t = v.clone();
        let mut bad = lemmas.clone();
        let last = bad.len() - 1;
        let extra = bad[last].graph.edges().first().copied();
        let mut edges: Vec<[u32; 3]> = bad[last].graph.edges().to_vec();
        edges.retain(|e| Some(*e) != extra);
        bad[last].graph = Hypergraph3::new(bad[last].graph.n(), edges).unwrap();
        t.certificate = Certificate::Shared { lemmas: bad, root: root.clone() };
        assert!(check_verdict(&g, &t).is_err());

        // nested sharing
        let mut t = v.clone();
        t.certificate = Certificate::Shared { lemmas: lemmas.clone(), root: Box::new(v.certificate.clone()) };
        assert!(check_verdict(&g, &t).is_err());
    }

    #[test]
    fn lemma_maps_must_be_isomorphisms() {
        let g = Hypergraph3::new(4, [[0, 1, 2], [0, 1, 3]]).unwrap();
        let target = Hypergraph3::new(4, [[0, 2, 3], [1, 2, 3]]).unwrap();
        assert!(relabels_onto(&g, &[2, 3, 0, 1], &target));
        assert!(!relabels_onto(&g, &[2, 3, 1, 0], &Hypergraph3::new(4, [[0, 1, 2]]).unwrap()));
        assert!(!relabels_onto(&g, &[2, 2, 0, 1], &target));
        assert!(!relabels_onto(&g, &[2, 3, 0], &target));
        assert!(!relabels_onto(&g, &[0, 1, 2, 3], &target));
    }
}

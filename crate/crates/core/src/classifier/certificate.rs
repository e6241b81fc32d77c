//! Certificate trees and their JSON form `{kind, witness, children}`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::analysis::{OrderedPartition, Partition3};
use crate::hypergraph::{Hypergraph3, VertexSet};

/// A level `ℓ` in the hierarchy, or `Infinite` for graphs outside every level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ell {
    Finite(u32),
    Infinite,
}

impl Ell {
    pub fn finite(self) -> Option<u32> {
        match self {
            Ell::Finite(k) => Some(k),
            Ell::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Ell::Finite(_))
    }
}

impl fmt::Display for Ell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ell::Finite(k) => write!(f, "{k}"),
            Ell::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Ell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Ell::Finite(k) => s.serialize_u32(*k),
            Ell::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Ell {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match Value::deserialize(d)? {
            Value::String(s) if s == "inf" => Ok(Ell::Infinite),
            Value::Number(n) => n
                .as_u64()
                .and_then(|k| u32::try_from(k).ok())
                .map(Ell::Finite)
                .ok_or_else(|| serde::de::Error::custom("level must be a small nonnegative integer")),
            other => Err(serde::de::Error::custom(format!("bad level {other}"))),
        }
    }
}

/// What an exhaustion record rules out: membership in one level, or in all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bound {
    Level(u32),
    Unbounded,
}

impl Bound {
    /// Whether ruling out `self` also rules out level `k`.
    pub fn covers(self, k: u32) -> bool {
        match self {
            Bound::Level(j) => j >= k,
            Bound::Unbounded => true,
        }
    }
}

impl Serialize for Bound {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Ell::from(*self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Bound {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(match Ell::deserialize(d)? {
            Ell::Finite(k) => Bound::Level(k),
            Ell::Infinite => Bound::Unbounded,
        })
    }
}

impl From<Bound> for Ell {
    fn from(b: Bound) -> Ell {
        match b {
            Bound::Level(k) => Ell::Finite(k),
            Bound::Unbounded => Ell::Infinite,
        }
    }
}

/// Which half of a collapse fails in an exhaustion record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// the quotient `H`
    H,
    /// the collapsed part `F = G[U]`
    F,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExhaustEntry {
    pub set: VertexSet,
    pub side: Side,
    pub proof: Certificate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum L1Reason {
    /// the quotient is not tripartite
    Quotient,
    /// block `index` induces a graph outside the family
    Part { index: usize, proof: Certificate },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct L1Entry {
    pub partition: OrderedPartition,
    pub reason: L1Reason,
}

/// A witness tree. Membership nodes prove `G ∈ U_k` for the level they
/// report; `Exhausted` proves `G ∉ U_k` (or `G ∉ U`); `Forward`/`Decompose`
/// prove membership in the forward-colorable closure and `NotL1` refutes it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Tripartite(Partition3),
    Transversal(VertexSet),
    /// `G` reduces to `(H, G[set])` with `H ∈ U_{level-1}` and `G[set] ∈ U_level`.
    Collapse { set: VertexSet, level: u32, h: Box<Certificate>, f: Box<Certificate> },
    /// The listed vertices are exactly the isolated ones; `child` speaks
    /// about the graph with them removed, and the claim transfers unchanged.
    Strip { isolated: VertexSet, child: Box<Certificate> },
    Forward(OrderedPartition),
    /// Quotient `h` is tripartite and every block graph is in the family.
    Decompose { partition: OrderedPartition, h: Box<Certificate>, parts: Vec<Certificate> },
    /// `G` has no exact transversal and every collapsible set fails on the
    /// recorded side. At level 0 the record is empty.
    Exhausted { below: Bound, record: Vec<ExhaustEntry> },
    /// Not forward-colorable, and every admissible partition fails.
    NotL1 { strict: bool, record: Vec<L1Entry> },
    /// `G` relabeled by `map` (`map[v]` is the new label of `v`) is the graph
    /// of lemma `index`, so the lemma's conclusion holds for `G`.
    Lemma { index: usize, map: Vec<u32> },
    /// Outermost node of a proof with shared parts: `root` speaks about `G`
    /// and may cite the lemmas; lemma `i` may cite lemmas before it.
    Shared { lemmas: Vec<Lemma>, root: Box<Certificate> },
}

/// A shared sub-proof: `certificate` speaks about `graph`. Certificates
/// point at lemmas instead of repeating a proof for every isomorphic copy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma {
    pub graph: Hypergraph3,
    pub certificate: Certificate,
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Tripartite(_) => "tripartite",
            Certificate::Transversal(_) => "transversal",
            Certificate::Collapse { .. } => "collapse",
            Certificate::Strip { .. } => "strip",
            Certificate::Forward(_) => "forward",
            Certificate::Decompose { .. } => "decompose",
            Certificate::Exhausted { .. } => "exhausted",
            Certificate::NotL1 { .. } => "not_l1",
            Certificate::Lemma { .. } => "lemma",
            Certificate::Shared { .. } => "shared",
        }
    }

    /// Number of nodes in the tree; a lemma reference counts as one.
    pub fn size(&self) -> usize {
        1 + match self {
            Certificate::Collapse { h, f, .. } => h.size() + f.size(),
            Certificate::Strip { child, .. } => child.size(),
            Certificate::Shared { lemmas, root } => root.size() + lemmas.iter().map(|l| l.certificate.size()).sum::<usize>(),
            Certificate::Decompose { h, parts, .. } => h.size() + parts.iter().map(|p| p.size()).sum::<usize>(),
            Certificate::Exhausted { record, .. } => record.iter().map(|e| e.proof.size()).sum(),
            Certificate::NotL1 { record, .. } => record
                .iter()
                .map(|e| match &e.reason {
                    L1Reason::Part { proof, .. } => proof.size(),
                    L1Reason::Quotient => 0,
                })
                .sum(),
            _ => 0,
        }
    }
}

/// Uniform tree form used for serialization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertNode {
    pub kind: String,
    pub witness: Value,
    #[serde(default)]
    pub children: Vec<CertNode>,
}

impl From<&Certificate> for CertNode {
    fn from(c: &Certificate) -> CertNode {
        let (witness, children): (Value, Vec<CertNode>) = match c {
            Certificate::Tripartite(p) => (json!({ "parts": p.parts }), vec![]),
            Certificate::Transversal(w) => (json!({ "set": w }), vec![]),
            Certificate::Collapse { set, level, h, f } => {
                (json!({ "set": set, "level": level }), vec![h.as_ref().into(), f.as_ref().into()])
            }
            Certificate::Strip { isolated, child } => (json!({ "isolated": isolated }), vec![child.as_ref().into()]),
            Certificate::Forward(p) => (json!({ "blocks": p.blocks }), vec![]),
            Certificate::Decompose { partition, h, parts } => {
                let mut ch = vec![h.as_ref().into()];
                ch.extend(parts.iter().map(CertNode::from));
                (json!({ "blocks": partition.blocks }), ch)
            }
            Certificate::Exhausted { below, record } => {
                let rec: Vec<Value> = record.iter().map(|e| json!({ "set": e.set, "side": e.side })).collect();
                (json!({ "below": below, "record": rec }), record.iter().map(|e| (&e.proof).into()).collect())
            }
            Certificate::NotL1 { strict, record } => {
                let mut ch = Vec::new();
                let rec: Vec<Value> = record
                    .iter()
                    .map(|e| match &e.reason {
                        L1Reason::Quotient => json!({ "blocks": e.partition.blocks, "reason": "quotient" }),
                        L1Reason::Part { index, proof } => {
                            ch.push(proof.into());
                            json!({ "blocks": e.partition.blocks, "reason": "part", "part": index })
                        }
                    })
                    .collect();
                (json!({ "strict": strict, "record": rec }), ch)
            }
            Certificate::Lemma { index, map } => (json!({ "index": index, "map": map }), vec![]),
            Certificate::Shared { lemmas, root } => {
                let graphs: Vec<&Hypergraph3> = lemmas.iter().map(|l| &l.graph).collect();
                let mut ch = vec![root.as_ref().into()];
                ch.extend(lemmas.iter().map(|l| CertNode::from(&l.certificate)));
                (json!({ "graphs": graphs }), ch)
            }
        };
        CertNode { kind: c.kind().to_string(), witness, children }
    }
}

fn field<T: serde::de::DeserializeOwned>(w: &Value, name: &str) -> Result<T, String> {
    let v = w.get(name).ok_or_else(|| format!("missing witness field `{name}`"))?;
    serde_json::from_value(v.clone()).map_err(|e| format!("witness field `{name}`: {e}"))
}

fn arity(node: &CertNode, n: usize) -> Result<(), String> {
    if node.children.len() == n {
        Ok(())
    } else {
        Err(format!("`{}` node needs {} children, has {}", node.kind, n, node.children.len()))
    }
}

impl TryFrom<&CertNode> for Certificate {
    type Error = String;

    fn try_from(node: &CertNode) -> Result<Certificate, String> {
        let w = &node.witness;
        let child = |i: usize| Certificate::try_from(&node.children[i]);
        Ok(match node.kind.as_str() {
            "tripartite" => {
                arity(node, 0)?;
                Certificate::Tripartite(Partition3 { parts: field(w, "parts")? })
            }
            "transversal" => {
                arity(node, 0)?;
                Certificate::Transversal(field(w, "set")?)
            }
            "collapse" => {
                arity(node, 2)?;
                Certificate::Collapse {
                    set: field(w, "set")?,
                    level: field(w, "level")?,
                    h: Box::new(child(0)?),
                    f: Box::new(child(1)?),
                }
            }
            "strip" => {
                arity(node, 1)?;
                Certificate::Strip { isolated: field(w, "isolated")?, child: Box::new(child(0)?) }
            }
            "forward" => {
                arity(node, 0)?;
                Certificate::Forward(OrderedPartition { blocks: field(w, "blocks")? })
            }
            "decompose" => {
                let blocks: Vec<VertexSet> = field(w, "blocks")?;
                arity(node, blocks.len() + 1)?;
                let parts = (1..=blocks.len()).map(child).collect::<Result<Vec<_>, _>>()?;
                Certificate::Decompose { partition: OrderedPartition { blocks }, h: Box::new(child(0)?), parts }
            }
            "exhausted" => {
                #[derive(Deserialize)]
                struct Raw {
                    set: VertexSet,
                    side: Side,
                }
                let rec: Vec<Raw> = field(w, "record")?;
                arity(node, rec.len())?;
                let record = rec
                    .into_iter()
                    .enumerate()
                    .map(|(i, r)| Ok(ExhaustEntry { set: r.set, side: r.side, proof: child(i)? }))
                    .collect::<Result<Vec<_>, String>>()?;
                Certificate::Exhausted { below: field(w, "below")?, record }
            }
            "not_l1" => {
                #[derive(Deserialize)]
                struct Raw {
                    blocks: Vec<VertexSet>,
                    reason: String,
                    part: Option<usize>,
                }
                let rec: Vec<Raw> = field(w, "record")?;
                let mut next = 0;
                let mut record = Vec::with_capacity(rec.len());
                for r in rec {
                    let reason = match (r.reason.as_str(), r.part) {
                        ("quotient", None) => L1Reason::Quotient,
                        ("part", Some(index)) => {
                            let proof = node
                                .children
                                .get(next)
                                .ok_or("`not_l1` node is missing a part proof")
                                .map(Certificate::try_from)??;
                            next += 1;
                            L1Reason::Part { index, proof }
                        }
                        (other, _) => return Err(format!("bad `not_l1` reason `{other}`")),
                    };
                    record.push(L1Entry { partition: OrderedPartition { blocks: r.blocks }, reason });
                }
                arity(node, next)?;
                Certificate::NotL1 { strict: field(w, "strict")?, record }
            }
            "lemma" => {
                arity(node, 0)?;
                Certificate::Lemma { index: field(w, "index")?, map: field(w, "map")? }
            }
            "shared" => {
                let graphs: Vec<Hypergraph3> = field(w, "graphs")?;
                arity(node, graphs.len() + 1)?;
                let lemmas = graphs
                    .into_iter()
                    .enumerate()
                    .map(|(i, graph)| Ok(Lemma { graph, certificate: child(i + 1)? }))
                    .collect::<Result<Vec<_>, String>>()?;
                Certificate::Shared { lemmas, root: Box::new(child(0)?) }
            }
            other => return Err(format!("unknown certificate kind `{other}`")),
        })
    }
}

impl Serialize for Certificate {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CertNode::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Certificate {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let node = CertNode::deserialize(d)?;
        Certificate::try_from(&node).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levels_serialize_as_number_or_inf() {
        assert_eq!(serde_json::to_string(&Ell::Finite(2)).unwrap(), "2");
        assert_eq!(serde_json::to_string(&Ell::Infinite).unwrap(), "\"inf\"");
        assert_eq!(serde_json::from_str::<Ell>("\"inf\"").unwrap(), Ell::Infinite);
        assert!(Ell::Finite(7) < Ell::Infinite);
    }

    #[test]
    fn nested_round_trip() {
        let c = Certificate::Collapse {
            set: vec![0, 1, 2],
            level: 2,
            h: Box::new(Certificate::Transversal(vec![4])),
            f: Box::new(Certificate::Tripartite(Partition3 { parts: [vec![0], vec![1], vec![2]] })),
        };
        let e = Certificate::Exhausted {
            below: Bound::Unbounded,
            record: vec![ExhaustEntry { set: vec![0, 1], side: Side::H, proof: Certificate::Exhausted { below: Bound::Unbounded, record: vec![] } }],
        };
        let l = Certificate::NotL1 {
            strict: false,
            record: vec![
                L1Entry { partition: OrderedPartition::new(vec![vec![0], vec![1, 2]]), reason: L1Reason::Quotient },
                L1Entry {
                    partition: OrderedPartition::new(vec![vec![0, 1], vec![2]]),
                    reason: L1Reason::Part { index: 0, proof: e.clone() },
                },
            ],
        };
        let d = Certificate::Decompose {
            partition: OrderedPartition::new(vec![vec![0], vec![1]]),
            h: Box::new(Certificate::Tripartite(Partition3 { parts: [vec![0, 1], vec![], vec![]] })),
            parts: vec![Certificate::Forward(OrderedPartition::new(vec![vec![0]])), Certificate::Forward(OrderedPartition::new(vec![vec![0]]))],
        };
        let s = Certificate::Strip { isolated: vec![3], child: Box::new(c.clone()) };
        let r = Certificate::Shared {
            lemmas: vec![Lemma { graph: Hypergraph3::new(3, [[0, 1, 2]]).unwrap(), certificate: e.clone() }],
            root: Box::new(Certificate::Lemma { index: 0, map: vec![1, 0, 2] }),
        };
        for cert in [c, e, l, d, s, r] {
            let text = serde_json::to_string(&cert).unwrap();
            let back: Certificate = serde_json::from_str(&text).unwrap();
            assert_eq!(back, cert);
            let v: Value = serde_json::from_str(&text).unwrap();
            assert!(v.get("kind").is_some() && v.get("witness").is_some() && v.get("children").is_some());
        }
    }

    #[test]
    fn malformed_nodes_are_rejected() {
        let bad = r#"{"kind":"collapse","witness":{"set":[0,1],"level":2},"children":[]}"#;
        assert!(serde_json::from_str::<Certificate>(bad).is_err());
        let bad = r#"{"kind":"mystery","witness":{},"children":[]}"#;
        assert!(serde_json::from_str::<Certificate>(bad).is_err());
    }
}

//! Canonical labeling of 3-graphs.
//!
//! Vertex partitions are refined by the multiset of cell pairs each vertex
//! sees through its incident edges. When refinement stalls, a vertex of the
//! first non-trivial cell is individualized and the search recurses. The
//! canonical form is the minimum relabeled edge list over all leaves of the
//! search tree. Automorphisms found along the way (two leaves with the same
//! edge list) prune sibling subtrees in the same orbit, and the search jumps
//! back to the common ancestor of the two equivalent leaves.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::hypergraph::Hypergraph3;

/// Byte string identifying a 3-graph up to relabeling, isolated vertices included.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(s: &str) -> Option<Self> {
        if s.len() % 2 != 0 {
            return None;
        }
        (0..s.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(s.get(i..i + 2)?, 16).ok())
            .collect::<Option<Vec<u8>>>()
            .map(CanonicalKey)
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey({})", self.to_hex())
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for CanonicalKey {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for CanonicalKey {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        CanonicalKey::from_hex(&s).ok_or_else(|| serde::de::Error::custom("invalid hex key"))
    }
}

/// Result of canonical labeling.
#[derive(Debug, Clone)]
pub struct Canonical {
    /// The canonical representative.
    pub graph: Hypergraph3,
    /// `labeling[v]` is the position of original vertex `v` in `graph`.
    pub labeling: Vec<u32>,
    /// Automorphisms discovered during the search, as `perm[v] = image`.
    /// They generate a subgroup of the automorphism group.
    pub automorphisms: Vec<Vec<u32>>,
}

impl Canonical {
    pub fn key(&self) -> CanonicalKey {
        encode(&self.graph)
    }
}

pub fn canonical_key(g: &Hypergraph3) -> CanonicalKey {
    encode(&canonical_form(g).graph)
}

pub fn are_isomorphic(a: &Hypergraph3, b: &Hypergraph3) -> bool {
    a.n() == b.n() && a.edge_count() == b.edge_count() && canonical_key(a) == canonical_key(b)
}

fn encode(g: &Hypergraph3) -> CanonicalKey {
    let n = g.n();
    let mut bytes = Vec::with_capacity(8 + 3 * g.edge_count());
    bytes.extend_from_slice(&(n as u32).to_le_bytes());
    bytes.extend_from_slice(&(g.edge_count() as u32).to_le_bytes());
    for e in g.edges() {
        for &v in e {
            if n <= 256 {
                bytes.push(v as u8);
            } else {
                bytes.extend_from_slice(&v.to_le_bytes());
            }
        }
    }
    CanonicalKey(bytes)
}

pub fn canonical_form(g: &Hypergraph3) -> Canonical {
    let n = g.n();
    let mut incident: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n];
    for e in g.edges() {
        incident[e[0] as usize].push((e[1], e[2]));
        incident[e[1] as usize].push((e[0], e[2]));
        incident[e[2] as usize].push((e[0], e[1]));
    }
    let mut search = Search { g, incident, first: None, best: None, automorphisms: Vec::new() };
    let all: Vec<u32> = (0..n as u32).collect();
    let cells = if n == 0 { Vec::new() } else { vec![all] };
    let mut path = Vec::new();
    search.dfs(cells, &mut path);
    let best = search.best.expect("search visits at least one leaf");
    Canonical {
        graph: Hypergraph3::from_sorted_unique(n, best.edges),
        labeling: best.labeling,
        automorphisms: search.automorphisms,
    }
}

struct Leaf {
    edges: Vec<[u32; 3]>,
    labeling: Vec<u32>,
    path: Vec<u32>,
}

struct Search<'a> {
    g: &'a Hypergraph3,
    incident: Vec<Vec<(u32, u32)>>,
    first: Option<Leaf>,
    best: Option<Leaf>,
    automorphisms: Vec<Vec<u32>>,
}

fn common_prefix(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

impl Search<'_> {
    fn refine(&self, cells: &mut Vec<Vec<u32>>) {
        let n = self.g.n();
        let mut cell_of = vec![0u32; n];
        loop {
            for (i, c) in cells.iter().enumerate() {
                for &v in c {
                    cell_of[v as usize] = i as u32;
                }
            }
            let mut next: Vec<Vec<u32>> = Vec::with_capacity(cells.len());
            for cell in cells.iter() {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut keyed: Vec<(Vec<(u32, u32)>, u32)> = cell
                    .iter()
                    .map(|&v| {
                        let mut sig: Vec<(u32, u32)> = self.incident[v as usize]
                            .iter()
                            .map(|&(a, b)| {
                                let (ca, cb) = (cell_of[a as usize], cell_of[b as usize]);
                                (ca.min(cb), ca.max(cb))
                            })
                            .collect();
                        sig.sort_unstable();
                        (sig, v)
                    })
                    .collect();
                keyed.sort();
                let mut start = 0;
                for i in 1..=keyed.len() {
                    if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                        next.push(keyed[start..i].iter().map(|(_, v)| *v).collect());
                        start = i;
                    }
                }
            }
            let done = next.len() == cells.len();
            *cells = next;
            if done {
                return;
            }
        }
    }

    /// Returns `Some(depth)` to abandon every subtree below that depth.
    fn dfs(&mut self, mut cells: Vec<Vec<u32>>, path: &mut Vec<u32>) -> Option<usize> {
        self.refine(&mut cells);
        let target = cells
            .iter()
            .position(|c| c.len() > 1 && c.iter().any(|&v| !self.incident[v as usize].is_empty()));
        let Some(ti) = target else {
            return self.leaf(&cells, path);
        };
        let cell = cells[ti].clone();
        let mut explored: Vec<u32> = Vec::new();
        for &v in &cell {
            if self.in_explored_orbit(v, &explored, path) {
                continue;
            }
            explored.push(v);
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..ti]);
            child.push(vec![v]);
            child.push(cell.iter().copied().filter(|&w| w != v).collect());
            child.extend_from_slice(&cells[ti + 1..]);
            path.push(v);
            let jump = self.dfs(child, path);
            path.pop();
            if let Some(depth) = jump {
                if depth < path.len() {
                    return Some(depth);
                }
            }
        }
        None
    }

    fn in_explored_orbit(&self, v: u32, explored: &[u32], path: &[u32]) -> bool {
        if explored.is_empty() {
            return false;
        }
        let n = self.g.n();
        let mut parent: Vec<u32> = (0..n as u32).collect();
        fn find(p: &mut [u32], mut x: u32) -> u32 {
            while p[x as usize] != x {
                p[x as usize] = p[p[x as usize] as usize];
                x = p[x as usize];
            }
            x
        }
        let mut any = false;
        for aut in &self.automorphisms {
            if path.iter().any(|&p| aut[p as usize] != p) {
                continue;
            }
            any = true;
            for (x, &y) in aut.iter().enumerate() {
                let (a, b) = (find(&mut parent, x as u32), find(&mut parent, y));
                if a != b {
                    parent[a as usize] = b;
                }
            }
        }
        if !any {
            return false;
        }
        let rv = find(&mut parent, v);
        explored.iter().any(|&u| find(&mut parent, u) == rv)
    }

    fn leaf(&mut self, cells: &[Vec<u32>], path: &[u32]) -> Option<usize> {
        let n = self.g.n();
        let mut labeling = vec![0u32; n];
        let mut pos = 0u32;
        for c in cells {
            for &v in c {
                labeling[v as usize] = pos;
                pos += 1;
            }
        }
        let mut edges: Vec<[u32; 3]> = self
            .g
            .edges()
            .iter()
            .map(|e| {
                let mut t = [labeling[e[0] as usize], labeling[e[1] as usize], labeling[e[2] as usize]];
                t.sort_unstable();
                t
            })
            .collect();
        edges.sort_unstable();
        let leaf = Leaf { edges, labeling, path: path.to_vec() };

        let Some(first) = &self.first else {
            self.best = Some(Leaf { edges: leaf.edges.clone(), labeling: leaf.labeling.clone(), path: leaf.path.clone() });
            self.first = Some(leaf);
            return None;
        };
        if leaf.edges == first.edges {
            let aut = compose_inverse(&first.labeling, &leaf.labeling);
            let depth = common_prefix(&first.path, path);
            self.push_automorphism(aut);
            return Some(depth);
        }
        let best = self.best.as_ref().expect("best is set with first");
        if leaf.edges == best.edges {
            let aut = compose_inverse(&best.labeling, &leaf.labeling);
            let depth = common_prefix(&best.path, path);
            self.push_automorphism(aut);
            return Some(depth);
        }
        if leaf.edges < best.edges {
            self.best = Some(leaf);
        }
        None
    }

    fn push_automorphism(&mut self, aut: Vec<u32>) {
        if aut.iter().enumerate().any(|(i, &v)| i as u32 != v) {
            self.automorphisms.push(aut);
        }
    }
}

/// `v -> a^{-1}(b(v))` for labelings `a`, `b` with `a(G) = b(G)`.
fn compose_inverse(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut inv = vec![0u32; a.len()];
    for (v, &p) in a.iter().enumerate() {
        inv[p as usize] = v as u32;
    }
    b.iter().map(|&p| inv[p as usize]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fano() -> Hypergraph3 {
        Hypergraph3::new(7, [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]]).unwrap()
    }

    fn clique(n: u32) -> Hypergraph3 {
        let mut e = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    e.push([a, b, c]);
                }
            }
        }
        Hypergraph3::new(n as usize, e).unwrap()
    }

    fn is_automorphism(g: &Hypergraph3, perm: &[u32]) -> bool {
        g.relabel(perm) == *g
    }

    #[test]
    fn fano_relabelings_share_a_key() {
        let g = fano();
        let k = canonical_key(&g);
        for perm in [[6, 5, 4, 3, 2, 1, 0], [1, 2, 3, 4, 5, 6, 0], [3, 0, 6, 2, 5, 1, 4]] {
            assert_eq!(canonical_key(&g.relabel(&perm)), k);
        }
    }

    #[test]
    fn distinguishes_edge_counts_and_isolated_vertices() {
        let star = Hypergraph3::new(4, [[0, 1, 2], [0, 1, 3], [0, 2, 3]]).unwrap();
        assert_ne!(canonical_key(&star), canonical_key(&clique(4)));
        assert_ne!(canonical_key(&Hypergraph3::empty(5)), canonical_key(&Hypergraph3::empty(4)));
        assert_eq!(canonical_key(&Hypergraph3::empty(0)), canonical_key(&Hypergraph3::empty(0)));
    }

    #[test]
    fn symmetric_graphs_finish_and_report_automorphisms() {
        let k = clique(10);
        let c = canonical_form(&k);
        assert_eq!(c.graph, k);
        assert!(!c.automorphisms.is_empty());
        assert!(c.automorphisms.iter().all(|a| is_automorphism(&k, a)));
        let f = canonical_form(&fano());
        assert!(f.automorphisms.iter().all(|a| is_automorphism(&fano(), a)));
        // 24 isolated vertices plus one edge
        let g = Hypergraph3::new(27, [[0, 1, 2]]).unwrap();
        assert_eq!(canonical_form(&g).graph.edge_count(), 1);
        let moved = Hypergraph3::new(27, [[10, 20, 26]]).unwrap();
        assert_eq!(canonical_key(&g), canonical_key(&moved));
    }

    #[test]
    fn labeling_maps_input_to_canonical_graph() {
        let g = fano().relabel(&[3, 0, 6, 2, 5, 1, 4]);
        let c = canonical_form(&g);
        assert_eq!(g.relabel(&c.labeling), c.graph);
    }

    #[test]
    fn hex_round_trip() {
        let k = canonical_key(&fano());
        assert_eq!(CanonicalKey::from_hex(&k.to_hex()), Some(k.clone()));
        let json = serde_json::to_string(&k).unwrap();
        assert_eq!(serde_json::from_str::<CanonicalKey>(&json).unwrap(), k);
        assert_eq!(CanonicalKey::from_hex("abc"), None);
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Hypergraph3> {
        (3..=max_n).prop_flat_map(|n| {
            let mut triples = Vec::new();
            for a in 0..n as u32 {
                for b in a + 1..n as u32 {
                    for c in b + 1..n as u32 {
                        triples.push([a, b, c]);
                    }
                }
            }
            let len = triples.len();
            proptest::collection::vec(any::<bool>(), len).prop_map(move |keep| {
                let edges: Vec<[u32; 3]> =
                    triples.iter().zip(&keep).filter(|(_, k)| **k).map(|(t, _)| *t).collect();
                Hypergraph3::new(n, edges).unwrap()
            })
        })
    }

    fn arb_graph_and_perm(max_n: usize) -> impl Strategy<Value = (Hypergraph3, Vec<u32>)> {
        arb_graph(max_n).prop_flat_map(|g| {
            let n = g.n();
            (Just(g), Just((0..n as u32).collect::<Vec<u32>>()).prop_shuffle())
        })
    }

    proptest! {
        #[test]
        fn key_invariant_under_relabeling((g, perm) in arb_graph_and_perm(8)) {
            prop_assert_eq!(canonical_key(&g), canonical_key(&g.relabel(&perm)));
        }

        #[test]
        fn discovered_automorphisms_are_genuine(g in arb_graph(7)) {
            let c = canonical_form(&g);
            for a in &c.automorphisms {
                prop_assert!(is_automorphism(&g, a));
            }
            prop_assert_eq!(g.relabel(&c.labeling), c.graph);
        }
    }

    /// Brute-force isomorphism over all permutations agrees with key equality.
    #[test]
    fn keys_match_brute_force_isomorphism_on_small_graphs() {
        let mut rng_state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            rng_state ^= rng_state << 13;
            rng_state ^= rng_state >> 7;
            rng_state ^= rng_state << 17;
            rng_state
        };
        let n = 5u32;
        let triples: Vec<[u32; 3]> = clique(n).edges().to_vec();
        let perms = permutations(n as usize);
        for _ in 0..200 {
            let pick = |x: u64| -> Hypergraph3 {
                let e: Vec<[u32; 3]> =
                    triples.iter().enumerate().filter(|(i, _)| x >> i & 1 == 1).map(|(_, t)| *t).collect();
                Hypergraph3::new(n as usize, e).unwrap()
            };
            let a = pick(next() & 0x3ff);
            let b = pick(next() & 0x3ff);
            let iso = perms.iter().any(|p| a.relabel(p) == b);
            assert_eq!(iso, canonical_key(&a) == canonical_key(&b), "{a:?} vs {b:?}");
        }
    }

    fn permutations(n: usize) -> Vec<Vec<u32>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for i in 0..=p.len() {
                let mut q = p.clone();
                q.insert(i, (n - 1) as u32);
                out.push(q);
            }
        }
        out
    }
}

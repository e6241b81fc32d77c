//! The 3-uniform hypergraph type, its text format, and vertex-set helpers.
//!
//! Text format: the first non-comment line is `n m`, followed by `m` lines
//! `a b c` with distinct vertices in `[0, n)`. `#` starts a comment that runs
//! to the end of the line and blank lines are ignored.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A sorted list of distinct vertices.
pub type VertexSet = Vec<u32>;

/// Widest vertex count representable by the `u64` subset masks.
pub const MASK_WIDTH: usize = 64;

/// A 3-uniform hypergraph on the vertices `0..n`.
///
/// Every edge is stored as a strictly increasing triple and the edge list is
/// sorted without duplicates, so structural equality is labeled equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawHypergraph")]
pub struct Hypergraph3 {
    n: usize,
    edges: Vec<[u32; 3]>,
}

#[derive(Deserialize)]
struct RawHypergraph {
    n: usize,
    edges: Vec<[u32; 3]>,
}

impl TryFrom<RawHypergraph> for Hypergraph3 {
    type Error = Error;

    fn try_from(raw: RawHypergraph) -> Result<Self> {
        Hypergraph3::new(raw.n, raw.edges)
    }
}

/// Result of parsing the text format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed {
    pub graph: Hypergraph3,
    /// Number of edge lines that repeated an earlier edge.
    pub duplicates: usize,
}

pub(crate) fn sort_triple(t: [u32; 3]) -> [u32; 3] {
    let [mut a, mut b, mut c] = t;
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    if b > c {
        std::mem::swap(&mut b, &mut c);
    }
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    [a, b, c]
}

fn check_triple(t: [u32; 3], n: usize) -> Result<[u32; 3]> {
    for &v in &t {
        if v as usize >= n {
            return Err(Error::VertexOutOfRange { vertex: v as u64, n });
        }
    }
    let s = sort_triple(t);
    if s[0] == s[1] || s[1] == s[2] {
        let vertex = if s[0] == s[1] { s[0] } else { s[1] };
        return Err(Error::RepeatedVertex { vertex });
    }
    Ok(s)
}

impl Hypergraph3 {
    /// Builds a hypergraph, sorting each triple and dropping duplicate edges.
    pub fn new(n: usize, edges: impl IntoIterator<Item = [u32; 3]>) -> Result<Self> {
        Ok(Self::new_counting(n, edges)?.0)
    }

    fn new_counting(n: usize, edges: impl IntoIterator<Item = [u32; 3]>) -> Result<(Self, usize)> {
        let mut list = Vec::new();
        for t in edges {
            list.push(check_triple(t, n)?);
        }
        let before = list.len();
        list.sort_unstable();
        list.dedup();
        let dups = before - list.len();
        Ok((Hypergraph3 { n, edges: list }, dups))
    }

    /// The hypergraph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Hypergraph3 { n, edges: Vec::new() }
    }

    pub(crate) fn from_sorted_unique(n: usize, edges: Vec<[u32; 3]>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(edges.iter().all(|e| e[0] < e[1] && e[1] < e[2] && (e[2] as usize) < n));
        Hypergraph3 { n, edges }
    }

    /// Builds from triples already known to be valid; sorts and deduplicates.
    pub(crate) fn from_triples_unchecked(n: usize, mut edges: Vec<[u32; 3]>) -> Self {
        for e in edges.iter_mut() {
            *e = sort_triple(*e);
        }
        edges.sort_unstable();
        edges.dedup();
        Self::from_sorted_unique(n, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[[u32; 3]] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_edgeless(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn has_edge(&self, t: [u32; 3]) -> bool {
        self.edges.binary_search(&sort_triple(t)).is_ok()
    }

    pub fn degree(&self, v: u32) -> usize {
        self.edges.iter().filter(|e| e.contains(&v)).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            for &v in e {
                deg[v as usize] += 1;
            }
        }
        deg
    }

    /// Edge list as `u64` vertex masks. Requires `n <= 64`.
    pub fn edge_masks(&self) -> Result<Vec<u64>> {
        require_mask_width(self.n, "edge masks")?;
        Ok(self.edges.iter().map(|e| triple_mask(*e)).collect())
    }

    /// Applies a relabeling `perm[old] = new`, which must be a permutation.
    pub fn relabel(&self, perm: &[u32]) -> Hypergraph3 {
        assert_eq!(perm.len(), self.n, "permutation length must equal vertex count");
        let edges = self
            .edges
            .iter()
            .map(|e| [perm[e[0] as usize], perm[e[1] as usize], perm[e[2] as usize]])
            .collect();
        Hypergraph3::from_triples_unchecked(self.n, edges)
    }

    /// The subhypergraph induced on `set`, relabeled to `0..|set|` in ascending order.
    pub fn induced(&self, set: &[u32]) -> Result<Hypergraph3> {
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut index = vec![u32::MAX; self.n];
        for (i, &v) in sorted.iter().enumerate() {
            if v as usize >= self.n {
                return Err(Error::VertexOutOfRange { vertex: v as u64, n: self.n });
            }
            index[v as usize] = i as u32;
        }
        let edges: Vec<[u32; 3]> = self
            .edges
            .iter()
            .filter(|e| e.iter().all(|&v| index[v as usize] != u32::MAX))
            .map(|e| [index[e[0] as usize], index[e[1] as usize], index[e[2] as usize]])
            .collect();
        // order-preserving relabeling keeps the list sorted
        Ok(Hypergraph3::from_sorted_unique(sorted.len(), edges))
    }

    /// Same vertex set, only the edges accepted by `keep`.
    pub fn filter_edges(&self, mut keep: impl FnMut(&[u32; 3]) -> bool) -> Hypergraph3 {
        let edges = self.edges.iter().copied().filter(|e| keep(e)).collect();
        Hypergraph3::from_sorted_unique(self.n, edges)
    }

    /// Renders the text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for e in &self.edges {
            out.push_str(&format!("{} {} {}\n", e[0], e[1], e[2]));
        }
        out
    }
}

impl fmt::Display for Hypergraph3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for Hypergraph3 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_hypergraph(s).map(|p| p.graph)
    }
}

fn parse_u64(tok: &str, line: usize) -> Result<u64> {
    tok.parse::<u64>().map_err(|_| Error::Parse {
        line,
        msg: format!("expected a nonnegative integer, found {tok:?}"),
    })
}

/// Parses the line-oriented text format.
pub fn parse_hypergraph(text: &str) -> Result<Parsed> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or(Error::Parse { line: 0, msg: "missing header".into() })?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(Error::Parse { line: hline, msg: format!("header must be \"n m\", found {header:?}") });
    }
    let n = parse_u64(toks[0], hline)? as usize;
    let m = parse_u64(toks[1], hline)? as usize;

    let mut triples = Vec::with_capacity(m);
    while triples.len() < m {
        let Some((lineno, l)) = lines.next() else { break };
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(Error::Parse { line: lineno, msg: format!("edge line must have 3 vertices, found {l:?}") });
        }
        let mut t = [0u32; 3];
        for (slot, tok) in t.iter_mut().zip(&toks) {
            let v = parse_u64(tok, lineno)?;
            if v as usize >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            *slot = v as u32;
        }
        triples.push(t);
    }
    if triples.len() != m {
        return Err(Error::Parse { line: hline, msg: format!("header announced {m} edges, found {}", triples.len()) });
    }
    if let Some((lineno, l)) = lines.next() {
        return Err(Error::Parse { line: lineno, msg: format!("unexpected content after {m} edges: {l:?}") });
    }
    let (graph, duplicates) = Hypergraph3::new_counting(n, triples)?;
    Ok(Parsed { graph, duplicates })
}

pub(crate) fn require_mask_width(n: usize, what: &'static str) -> Result<()> {
    if n > MASK_WIDTH {
        Err(Error::CapExceeded { what, n, cap: MASK_WIDTH })
    } else {
        Ok(())
    }
}

pub(crate) fn require_cap(n: usize, cap: usize, what: &'static str) -> Result<()> {
    if n > cap.min(MASK_WIDTH) {
        Err(Error::CapExceeded { what, n, cap: cap.min(MASK_WIDTH) })
    } else {
        Ok(())
    }
}

#[inline]
pub fn triple_mask(e: [u32; 3]) -> u64 {
    (1u64 << e[0]) | (1u64 << e[1]) | (1u64 << e[2])
}

pub fn set_to_mask(set: &[u32]) -> u64 {
    set.iter().fold(0u64, |m, &v| m | (1u64 << v))
}

pub fn mask_to_set(mut mask: u64) -> VertexSet {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros());
        mask &= mask - 1;
    }
    out
}

/// Mask with the lowest `n` bits set.
#[inline]
pub fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

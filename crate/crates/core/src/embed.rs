//! Injective (non-induced) embeddings of a pattern 3-graph into a host
//! whose admissible triples are given by a predicate.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::hypergraph::Hypergraph3;

/// `map[i]` is the host vertex that pattern vertex `i` is sent to.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Embedding {
    pub map: Vec<u64>,
}

impl Embedding {
    /// Image of a pattern edge, sorted ascending.
    pub fn image(&self, e: [u32; 3]) -> [u64; 3] {
        let mut t = [self.map[e[0] as usize], self.map[e[1] as usize], self.map[e[2] as usize]];
        t.sort_unstable();
        t
    }

    pub fn is_injective(&self) -> bool {
        let mut v = self.map.clone();
        v.sort_unstable();
        v.windows(2).all(|w| w[0] != w[1])
    }

    /// Re-checks injectivity and that every pattern edge lands on an accepted triple.
    pub fn validate(&self, pattern: &Hypergraph3, host_n: u64, pred: impl Fn([u64; 3]) -> bool) -> bool {
        self.map.len() == pattern.n()
            && self.map.iter().all(|&v| v < host_n)
            && self.is_injective()
            && pattern.edges().iter().all(|&e| pred(self.image(e)))
    }
}

/// Pattern edges grouped by the vertex (in assignment order) that completes them.
pub(crate) fn edges_closed_at(pattern: &Hypergraph3, order: &[u32]) -> Vec<Vec<[u32; 3]>> {
    let mut rank = vec![0usize; pattern.n()];
    for (i, &v) in order.iter().enumerate() {
        rank[v as usize] = i;
    }
    let mut closed = vec![Vec::new(); pattern.n()];
    for &e in pattern.edges() {
        let last = e.iter().map(|&v| rank[v as usize]).max().expect("triple");
        closed[last].push(e);
    }
    closed
}

struct Finder<'a, P> {
    host_n: u64,
    pred: &'a P,
    closed: Vec<Vec<[u32; 3]>>,
    map: Vec<u64>,
    used: Vec<bool>,
}

impl<P: Fn([u64; 3]) -> bool> Finder<'_, P> {
    fn extend(&mut self, i: usize) -> bool {
        if i == self.map.len() {
            return true;
        }
        for h in 0..self.host_n {
            if self.used[h as usize] {
                continue;
            }
            self.map[i] = h;
            let ok = self.closed[i].iter().all(|e| {
                let mut t = [self.map[e[0] as usize], self.map[e[1] as usize], self.map[e[2] as usize]];
                t.sort_unstable();
                (self.pred)(t)
            });
            if !ok {
                continue;
            }
            self.used[h as usize] = true;
            let found = self.extend(i + 1);
            self.used[h as usize] = false;
            if found {
                return true;
            }
        }
        false
    }
}

/// Finds the lexicographically least embedding (by the images of pattern
/// vertices `0, 1, 2, ...`) whose edge images all satisfy `pred`. Triples are
/// passed to `pred` sorted ascending. Copies need not be induced.
///
/// Work is split over the image of vertex 0; the least witness is kept, so
/// the answer does not depend on scheduling.
pub fn find_embedding<P>(pattern: &Hypergraph3, host_n: u64, pred: &P) -> Option<Embedding>
where
    P: Fn([u64; 3]) -> bool + Sync,
{
    let h = pattern.n();
    if h as u64 > host_n {
        return None;
    }
    if h == 0 {
        return Some(Embedding { map: Vec::new() });
    }
    let order: Vec<u32> = (0..h as u32).collect();
    let closed = edges_closed_at(pattern, &order);
    (0..host_n).into_par_iter().find_map_first(|first| {
        let mut f = Finder {
            host_n,
            pred,
            closed: closed.clone(),
            map: vec![0; h],
            used: vec![false; host_n as usize],
        };
        f.map[0] = first;
        f.used[first as usize] = true;
        // vertex 0 closes no edge on its own
        f.extend(1).then(|| Embedding { map: f.map })
    })
}

/// Embedding into the edges of another hypergraph.
pub fn find_subgraph(pattern: &Hypergraph3, host: &Hypergraph3) -> Option<Embedding> {
    let pred = |t: [u64; 3]| host.has_edge([t[0] as u32, t[1] as u32, t[2] as u32]);
    find_embedding(pattern, host.n() as u64, &pred)
}

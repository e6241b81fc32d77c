use crate::error::Result;
use crate::hypergraph::{full_mask, mask_to_set, require_cap, Hypergraph3, VertexSet};

use super::TRANSVERSAL_CAP;

/// The least set (by size, then lexicographically) meeting every edge in
/// exactly one vertex. The empty set qualifies for edgeless graphs.
pub fn exact_transversal(g: &Hypergraph3) -> Result<Option<VertexSet>> {
    exact_transversal_with_cap(g, TRANSVERSAL_CAP)
}

pub fn has_exact_transversal(g: &Hypergraph3) -> Result<bool> {
    require_cap(g.n(), TRANSVERSAL_CAP, "exact transversal search")?;
    let s = Searcher::new(g);
    Ok(s.search(0, 0, None).is_some())
}

pub fn exact_transversal_with_cap(g: &Hypergraph3, cap: usize) -> Result<Option<VertexSet>> {
    require_cap(g.n(), cap, "exact transversal search")?;
    let s = Searcher::new(g);
    let Some(any) = s.search(0, 0, None) else {
        return Ok(None);
    };
    // Including before excluding makes the first hit of a fixed size the
    // lexicographically least set of that size.
    for k in 0..=any.count_ones() {
        if let Some(w) = s.search(0, 0, Some(k)) {
            return Ok(Some(mask_to_set(w)));
        }
    }
    unreachable!("a transversal of size {} exists", any.count_ones())
}

struct Searcher {
    n: usize,
    /// edge masks incident to each vertex
    incident: Vec<Vec<u64>>,
}

impl Searcher {
    fn new(g: &Hypergraph3) -> Self {
        let mut incident = vec![Vec::new(); g.n()];
        for e in g.edges() {
            let m = crate::hypergraph::triple_mask(*e);
            for &v in e {
                incident[v as usize].push(m);
            }
        }
        Searcher { n: g.n(), incident }
    }

    /// Decides vertices `v..n` given the chosen set `w` over `0..v`.
    fn search(&self, v: usize, w: u64, size: Option<u32>) -> Option<u64> {
        if let Some(k) = size {
            let have = w.count_ones();
            if have > k || have + ((self.n - v) as u32) < k {
                return None;
            }
        }
        if v == self.n {
            return match size {
                Some(k) if w.count_ones() != k => None,
                _ => Some(w),
            };
        }
        let decided = full_mask(v + 1);
        for include in [true, false] {
            if include && size.is_some_and(|k| w.count_ones() >= k) {
                continue;
            }
            let w2 = if include { w | 1 << v } else { w };
            let ok = self.incident[v].iter().all(|&m| {
                let hit = (m & w2).count_ones();
                hit <= 1 && (hit == 1 || m & !decided != 0)
            });
            if ok {
                if let Some(found) = self.search(v + 1, w2, size) {
                    return Some(found);
                }
            }
        }
        None
    }
}

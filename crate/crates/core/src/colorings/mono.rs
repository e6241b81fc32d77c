use std::ops::Range;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embed::{edges_closed_at, Embedding};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph3;

use super::{check_window, ColorLabel, Oracle};

/// Default node budget for [`find_mono_copy`].
pub const DEFAULT_SEARCH_BUDGET: u64 = 1 << 32;

/// Automorphisms collected for symmetry breaking.
const AUTOMORPHISM_LIMIT: usize = 5040;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoCopy {
    pub embedding: Embedding,
    pub label: ColorLabel,
}

impl MonoCopy {
    /// Re-checks injectivity, the window and the common color of every edge.
    pub fn validate(&self, oracle: &dyn Oracle, pattern: &Hypergraph3, window: &Range<u64>) -> bool {
        let m = &self.embedding;
        m.map.len() == pattern.n()
            && m.is_injective()
            && m.map.iter().all(|v| window.contains(v))
            && pattern.edges().iter().all(|&e| oracle.eval(m.image(e)).ok().as_ref() == Some(&self.label))
    }
}

/// Automorphisms of `pattern` as `perm[v] = image`, in lexicographic order,
/// at most `limit` of them (the identity comes first).
pub fn pattern_automorphisms(pattern: &Hypergraph3, limit: usize) -> Vec<Vec<u32>> {
    let h = pattern.n();
    let degrees = pattern.degrees();
    let order: Vec<u32> = (0..h as u32).collect();
    let closed = edges_closed_at(pattern, &order);
    let mut out = Vec::new();
    let mut perm = vec![0u32; h];
    let mut used = vec![false; h];
    fn go(
        i: usize,
        g: &Hypergraph3,
        degrees: &[usize],
        closed: &[Vec<[u32; 3]>],
        perm: &mut [u32],
        used: &mut [bool],
        out: &mut Vec<Vec<u32>>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        if i == perm.len() {
            out.push(perm.to_vec());
            return;
        }
        for w in 0..perm.len() {
            if used[w] || degrees[w] != degrees[i] {
                continue;
            }
            perm[i] = w as u32;
            let ok = closed[i].iter().all(|e| {
                let mut t = [perm[e[0] as usize], perm[e[1] as usize], perm[e[2] as usize]];
                t.sort_unstable();
                g.has_edge(t)
            });
            if ok {
                used[w] = true;
                go(i + 1, g, degrees, closed, perm, used, out, limit);
                used[w] = false;
            }
        }
    }
    go(0, pattern, &degrees, &closed, &mut perm, &mut used, &mut out, limit);
    out
}

/// Positions that must receive a smaller host vertex than a later one.
///
/// For position `k` and every collected automorphism fixing the vertices at
/// positions `0..k`, the vertex at `k` must map below the image of its
/// orbit-mates. The least copy of each automorphism class satisfies all of
/// these, so pruning the rest loses no answer and keeps the least witness.
fn symmetry_lower_bounds(order: &[u32], auts: &[Vec<u32>]) -> Vec<Vec<usize>> {
    let h = order.len();
    let mut pos = vec![0usize; h];
    for (i, &v) in order.iter().enumerate() {
        pos[v as usize] = i;
    }
    let mut below = vec![Vec::new(); h];
    for k in 0..h {
        for sigma in auts {
            if order[..k].iter().any(|&v| sigma[v as usize] != v) {
                continue;
            }
            let image = sigma[order[k] as usize];
            if image != order[k] {
                let later = pos[image as usize];
                debug_assert!(later > k);
                below[later].push(k);
            }
        }
    }
    for b in &mut below {
        b.sort_unstable();
        b.dedup();
    }
    below
}

struct Search<'a> {
    oracle: &'a dyn Oracle,
    window: Range<u64>,
    /// Closed edges at each position, rewritten in position indices.
    closed: Vec<Vec<[usize; 3]>>,
    below: Vec<Vec<usize>>,
    map: Vec<u64>,
    nodes: u64,
    spent: &'a AtomicU64,
    abort: &'a AtomicBool,
    budget: u64,
}

const FLUSH: u64 = 1 << 14;

impl Search<'_> {
    fn flush(&mut self) -> Result<()> {
        let total = self.spent.fetch_add(self.nodes, Ordering::Relaxed) + self.nodes;
        self.nodes = 0;
        if total > self.budget {
            self.abort.store(true, Ordering::Relaxed);
            return Err(Error::BudgetExceeded { what: "monochromatic copy search", budget: self.budget });
        }
        Ok(())
    }

    fn extend(&mut self, i: usize, color: Option<u32>) -> Result<Option<u32>> {
        if i == self.map.len() {
            return Ok(color);
        }
        let start = self.below[i].iter().map(|&k| self.map[k] + 1).max().unwrap_or(0).max(self.window.start);
        for x in start..self.window.end {
            self.nodes += 1;
            if self.nodes >= FLUSH {
                if self.abort.load(Ordering::Relaxed) {
                    return Err(Error::BudgetExceeded { what: "monochromatic copy search", budget: self.budget });
                }
                self.flush()?;
            }
            if self.map[..i].contains(&x) {
                continue;
            }
            self.map[i] = x;
            let mut c = color;
            let mut ok = true;
            for e in &self.closed[i] {
                let mut t = [self.map[e[0]], self.map[e[1]], self.map[e[2]]];
                t.sort_unstable();
                let id = self.oracle.color_id(t);
                match c {
                    None => c = Some(id),
                    Some(c0) if c0 != id => {
                        ok = false;
                        break;
                    }
                    Some(_) => {}
                }
            }
            if ok {
                if let Some(found) = self.extend(i + 1, c)? {
                    return Ok(Some(found));
                }
            }
        }
        Ok(None)
    }
}

pub fn find_mono_copy(oracle: &dyn Oracle, pattern: &Hypergraph3, window: Range<u64>) -> Result<Option<MonoCopy>> {
    find_mono_copy_with_budget(oracle, pattern, window, DEFAULT_SEARCH_BUDGET)
}

/// A copy of `pattern` inside `window` whose edges all share one color.
///
/// Pattern vertices are placed in order of decreasing degree (ties by
/// index) and host vertices are tried in increasing order, so the answer is
/// the least copy in the lexicographic order of the images read in that
/// placement order. Branches stop at the first edge whose color differs from
/// the copy's color. Fails once more than `budget` placements are tried.
pub fn find_mono_copy_with_budget(
    oracle: &dyn Oracle,
    pattern: &Hypergraph3,
    window: Range<u64>,
    budget: u64,
) -> Result<Option<MonoCopy>> {
    check_window(oracle, &window)?;
    if pattern.is_edgeless() {
        return Err(Error::InvalidParam("the pattern needs at least one edge".into()));
    }
    let h = pattern.n();
    if (window.end - window.start) < h as u64 {
        return Ok(None);
    }
    let degrees = pattern.degrees();
    let mut order: Vec<u32> = (0..h as u32).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(degrees[v as usize]), v));
    let mut pos = vec![0usize; h];
    for (i, &v) in order.iter().enumerate() {
        pos[v as usize] = i;
    }
    let closed = edges_closed_at(pattern, &order)
        .into_iter()
        .map(|es| es.into_iter().map(|e| e.map(|v| pos[v as usize])).collect())
        .collect();
    let auts = pattern_automorphisms(pattern, AUTOMORPHISM_LIMIT);
    let below = symmetry_lower_bounds(&order, &auts);

    let spent = AtomicU64::new(0);
    let abort = AtomicBool::new(false);
    let found = window.clone().into_par_iter().find_map_first(|first| {
        let mut s = Search {
            oracle,
            window: window.clone(),
            closed: Vec::clone(&closed),
            below: below.clone(),
            map: vec![0; h],
            nodes: 1,
            spent: &spent,
            abort: &abort,
            budget,
        };
        s.map[0] = first;
        let r = s.extend(1, None).and_then(|c| {
            s.flush()?;
            Ok(c)
        });
        match r {
            Ok(Some(color)) => Some(Ok((s.map, color))),
            Ok(None) => None,
            Err(e) => Some(Err(e)),
        }
    });
    let Some((placed, color)) = found.transpose()? else { return Ok(None) };
    let mut map = vec![0u64; h];
    for (i, &v) in order.iter().enumerate() {
        map[v as usize] = placed[i];
    }
    Ok(Some(MonoCopy { embedding: Embedding { map }, label: oracle.label(color) }))
}

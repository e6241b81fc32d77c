use crate::error::{Error, Result};
use crate::hypergraph::{full_mask, mask_to_set, require_cap, triple_mask, Hypergraph3, VertexSet};

use super::{CollapseResult, COLLAPSIBLE_CAP};

/// Smallest superset of `set` that no edge meets in exactly two vertices
/// (as a mask). Collapsible sets are exactly the closed sets of size in
/// `2..n`.
pub fn closure(g: &Hypergraph3, set: u64) -> u64 {
    let masks: Vec<u64> = g.edges().iter().map(|e| triple_mask(*e)).collect();
    close(&masks, set)
}

pub(crate) fn close(masks: &[u64], mut set: u64) -> u64 {
    loop {
        let before = set;
        for &m in masks {
            if (m & set).count_ones() == 2 {
                set |= m;
            }
        }
        if set == before {
            return set;
        }
    }
}

pub fn is_collapsible(g: &Hypergraph3, u: &[u32]) -> bool {
    super::witness::check_collapsible(g, u)
}

/// All collapsible sets, ordered by size and then lexicographically.
pub fn collapsible_sets(g: &Hypergraph3) -> Result<Vec<VertexSet>> {
    collapsible_sets_with_cap(g, COLLAPSIBLE_CAP)
}

/// Enumerates closed sets in lectic order (Ganter's next-closure), so each is
/// produced once with at most `n` closure computations.
pub fn collapsible_sets_with_cap(g: &Hypergraph3, cap: usize) -> Result<Vec<VertexSet>> {
    let n = g.n();
    require_cap(n, cap, "collapsible set enumeration")?;
    if n < 3 {
        return Ok(Vec::new());
    }
    let masks: Vec<u64> = g.edges().iter().map(|e| triple_mask(*e)).collect();
    let mut found: Vec<VertexSet> = closed_masks(&masks, n)
        .into_iter()
        .filter(|a| (2..n).contains(&(a.count_ones() as usize)))
        .map(mask_to_set)
        .collect();
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(found)
}

/// Every closed subset of `0..n` (including the empty and full sets) in
/// lectic order.
pub(crate) fn closed_masks(masks: &[u64], n: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut a = close(masks, 0);
    loop {
        out.push(a);
        let mut next = None;
        for i in (0..n).rev() {
            let bit = 1u64 << i;
            if a & bit != 0 {
                continue;
            }
            let below = full_mask(i);
            let b = close(masks, (a & below) | bit);
            if b & below == a & below {
                next = Some(b);
                break;
            }
        }
        match next {
            Some(b) => a = b,
            None => return out,
        }
    }
}

/// Collapses `u` to a new vertex placed after the remaining vertices, which
/// keep their relative order.
pub fn collapse(g: &Hypergraph3, u: &[u32]) -> Result<CollapseResult> {
    let n = g.n();
    let mut set = u.to_vec();
    set.sort_unstable();
    if let Some(&v) = set.iter().find(|&&v| v as usize >= n) {
        return Err(Error::VertexOutOfRange { vertex: v as u64, n });
    }
    if set.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::NotCollapsible(format!("{u:?} repeats a vertex")));
    }
    if set.len() < 2 || set.len() >= n {
        return Err(Error::NotCollapsible(format!("|U| = {} must lie in [2, {})", set.len(), n)));
    }
    let mut inside = vec![false; n];
    for &v in &set {
        inside[v as usize] = true;
    }
    let mut index = vec![u32::MAX; n];
    let mut next = 0u32;
    for v in 0..n {
        if !inside[v] {
            index[v] = next;
            next += 1;
        }
    }
    let star = next;
    let mut edges = Vec::with_capacity(g.edge_count());
    for e in g.edges() {
        let hits = e.iter().filter(|&&v| inside[v as usize]).count();
        match hits {
            0 => edges.push([index[e[0] as usize], index[e[1] as usize], index[e[2] as usize]]),
            1 => {
                let mut t = [star; 3];
                let mut j = 0;
                for &v in e {
                    if !inside[v as usize] {
                        t[j] = index[v as usize];
                        j += 1;
                    }
                }
                edges.push(t);
            }
            2 => {
                return Err(Error::NotCollapsible(format!("edge {e:?} meets {set:?} in two vertices")));
            }
            _ => {}
        }
    }
    let h = Hypergraph3::from_triples_unchecked(star as usize + 1, edges);
    let f = g.induced(&set)?;
    Ok(CollapseResult { set, h, f })
}

/// A graph with its isolated vertices removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stripped {
    pub graph: Hypergraph3,
    /// `kept[i]` is the original label of vertex `i` of `graph`.
    pub kept: VertexSet,
    pub isolated: VertexSet,
}

pub fn strip_isolated(g: &Hypergraph3) -> Stripped {
    let mut touched = vec![false; g.n()];
    for e in g.edges() {
        for &v in e {
            touched[v as usize] = true;
        }
    }
    let (kept, isolated): (Vec<u32>, Vec<u32>) = (0..g.n() as u32).partition(|&v| touched[v as usize]);
    let graph = g.induced(&kept).expect("kept vertices are in range");
    Stripped { graph, kept, isolated }
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::witness::{brute_force_collapsible_sets, collapse_from_definition};
    use super::*;
    use crate::canon::are_isomorphic;

    fn star(h: u32) -> Hypergraph3 {
        let mut e = Vec::new();
        for a in 1..h {
            for b in a + 1..h {
                e.push([0, a, b]);
            }
        }
        Hypergraph3::new(h as usize, e).unwrap()
    }

    #[test]
    fn clique_has_no_collapsible_set() {
        assert!(collapsible_sets(&k4()).unwrap().is_empty());
    }

    #[test]
    fn fig2_has_exactly_one() {
        assert_eq!(collapsible_sets(&fig2()).unwrap(), vec![vec![0, 1]]);
    }

    #[test]
    fn every_fano_line_is_collapsible() {
        let sets = collapsible_sets(&fano()).unwrap();
        for e in fano().edges() {
            assert!(sets.contains(&e.to_vec()));
        }
    }

    #[test]
    fn collapsing_a_fano_line_gives_a_star() {
        let r = collapse(&fano(), &[0, 1, 2]).unwrap();
        assert!(are_isomorphic(&r.h, &star(5)));
        assert_eq!(r.f, edge());
    }

    #[test]
    fn collapsing_fig2_gives_a_clique() {
        let r = collapse(&fig2(), &[0, 1]).unwrap();
        assert!(are_isomorphic(&r.h, &k4()));
        assert_eq!(r.f, Hypergraph3::empty(2));
    }

    #[test]
    fn untouched_pair_becomes_isolated_vertex() {
        let g = Hypergraph3::new(5, [[0, 1, 2]]).unwrap();
        let r = collapse(&g, &[3, 4]).unwrap();
        assert_eq!(r.h, Hypergraph3::new(4, [[0, 1, 2]]).unwrap());
    }

    #[test]
    fn rejects_bad_sets() {
        assert!(matches!(collapse(&k4(), &[0, 1]), Err(Error::NotCollapsible(_))));
        assert!(collapse(&fano(), &[0]).is_err());
        assert!(collapse(&fano(), &[0, 1, 2, 3, 4, 5, 6]).is_err());
        assert!(matches!(collapse(&fano(), &[0, 9]), Err(Error::VertexOutOfRange { .. })));
    }

    #[test]
    fn closure_adds_third_vertices() {
        assert_eq!(closure(&fano(), 0b11), 0b111);
        assert_eq!(closure(&k4(), 0b11), 0b1111);
    }

    #[test]
    fn strip_records_labels() {
        let g = Hypergraph3::new(6, [[1, 3, 5]]).unwrap();
        let s = strip_isolated(&g);
        assert_eq!(s.graph, edge());
        assert_eq!(s.kept, vec![1, 3, 5]);
        assert_eq!(s.isolated, vec![0, 2, 4]);
    }

    #[test]
    fn enumeration_and_collapse_agree_with_definitions() {
        let mut s = 7u64;
        for _ in 0..200 {
            let n = 7u32;
            let mut edges = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    for c in b + 1..n {
                        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                        if s >> 61 == 0 {
                            edges.push([a, b, c]);
                        }
                    }
                }
            }
            let g = Hypergraph3::new(n as usize, edges).unwrap();
            let sets = collapsible_sets(&g).unwrap();
            assert_eq!(sets, brute_force_collapsible_sets(&g));
            for u in &sets {
                let r = collapse(&g, u).unwrap();
                assert_eq!(r.h, collapse_from_definition(&g, u));
                assert_eq!(r.h.n(), g.n() - u.len() + 1);
                assert_eq!(r.f.n(), u.len());
            }
        }
    }
}

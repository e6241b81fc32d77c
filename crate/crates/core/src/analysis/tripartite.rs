use crate::error::Result;
use crate::hypergraph::{require_cap, Hypergraph3};

use super::{Partition3, TRIPARTITE_CAP};

/// A partition with every edge meeting each part exactly once, if one exists.
///
/// Such a partition is exactly a proper 3-coloring of the 2-shadow (pairs
/// covered by an edge), so the search is a backtracking 3-coloring with the
/// colors introduced in first-use order.
pub fn is_tripartite(g: &Hypergraph3) -> Result<Option<Partition3>> {
    is_tripartite_with_cap(g, TRIPARTITE_CAP)
}

pub fn is_tripartite_with_cap(g: &Hypergraph3, cap: usize) -> Result<Option<Partition3>> {
    let n = g.n();
    require_cap(n, cap, "tripartite search")?;
    let mut adj = vec![0u64; n];
    for e in g.edges() {
        for (i, &a) in e.iter().enumerate() {
            for &b in &e[i + 1..] {
                adj[a as usize] |= 1 << b;
                adj[b as usize] |= 1 << a;
            }
        }
    }
    let mut color = vec![u8::MAX; n];
    let mut class = [0u64; 3];
    if !color_from(&adj, &mut color, &mut class, 0, 0) {
        return Ok(None);
    }
    let mut parts: [Vec<u32>; 3] = Default::default();
    for (v, &c) in color.iter().enumerate() {
        parts[c as usize].push(v as u32);
    }
    Ok(Some(Partition3 { parts }))
}

fn color_from(adj: &[u64], color: &mut [u8], class: &mut [u64; 3], v: usize, used: u8) -> bool {
    if v == adj.len() {
        return true;
    }
    let limit = (used + 1).min(3);
    for c in 0..limit {
        if adj[v] & class[c as usize] != 0 {
            continue;
        }
        color[v] = c;
        class[c as usize] |= 1 << v;
        if color_from(adj, color, class, v + 1, used.max(c + 1)) {
            return true;
        }
        class[c as usize] &= !(1 << v);
    }
    color[v] = u8::MAX;
    false
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::witness::{brute_force_tripartite, check_tripartition};
    use super::*;
    use crate::error::Error;

    #[test]
    fn single_edge_splits_one_per_part() {
        let p = is_tripartite(&edge()).unwrap().unwrap();
        assert_eq!(p.parts, [vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn star_and_clique_are_not_tripartite() {
        assert!(is_tripartite(&star4()).unwrap().is_none());
        assert!(is_tripartite(&k4()).unwrap().is_none());
        assert!(!brute_force_tripartite(&k4()));
    }

    #[test]
    fn degenerate_inputs_are_tripartite() {
        assert!(is_tripartite(&Hypergraph3::empty(0)).unwrap().is_some());
        assert!(is_tripartite(&Hypergraph3::empty(2)).unwrap().is_some());
        assert!(is_tripartite(&Hypergraph3::empty(9)).unwrap().is_some());
    }

    #[test]
    fn disjoint_edges() {
        let g = Hypergraph3::new(6, [[0, 1, 2], [3, 4, 5]]).unwrap();
        let p = is_tripartite(&g).unwrap().unwrap();
        assert!(check_tripartition(&g, &p));
    }

    #[test]
    fn cap_is_enforced() {
        let g = Hypergraph3::empty(25);
        assert!(matches!(is_tripartite(&g), Err(Error::CapExceeded { .. })));
        assert!(is_tripartite_with_cap(&g, 30).unwrap().is_some());
    }

    #[test]
    fn agrees_with_brute_force() {
        let mut s = 12345u64;
        for _ in 0..300 {
            let n = 6;
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
            let found = is_tripartite(&g).unwrap();
            assert_eq!(found.is_some(), brute_force_tripartite(&g));
            if let Some(p) = found {
                assert!(check_tripartition(&g, &p));
            }
        }
    }
}

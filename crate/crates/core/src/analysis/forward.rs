use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::Result;
use crate::hypergraph::{require_cap, Hypergraph3};

use super::{OrderedPartition, FORWARD_CAP};

/// An ordered partition in which every edge has one vertex in some block and
/// the other two together in a strictly later block, if one exists.
pub fn forward_colorable(g: &Hypergraph3) -> Result<Option<OrderedPartition>> {
    forward_colorable_with_cap(g, FORWARD_CAP)
}

/// Searches over the choice of the lone ("low") vertex of each edge. A choice
/// forces the other two vertices into one block and that block after the low
/// vertex's block; it is realizable iff the merged classes carry no self-loop
/// and no cycle. Every forward partition arises this way (its blocks are
/// unions of the merged classes), so the search is exhaustive.
pub fn forward_colorable_with_cap(g: &Hypergraph3, cap: usize) -> Result<Option<OrderedPartition>> {
    let n = g.n();
    require_cap(n, cap, "forward-coloring search")?;
    let order = edge_order(g);
    let mut s = State { n, edges: order, low: Vec::new() };
    if !s.dfs() {
        return Ok(None);
    }
    let (class, less) = s.classes().expect("accepted assignment is consistent");
    Ok(Some(topological_blocks(n, &class, &less)))
}

/// Edges in an order that keeps each new edge attached to earlier ones, so
/// conflicts surface early.
fn edge_order(g: &Hypergraph3) -> Vec<[u32; 3]> {
    let m = g.edge_count();
    let mut placed = vec![false; m];
    let mut seen = vec![false; g.n()];
    let mut out = Vec::with_capacity(m);
    while out.len() < m {
        let pick = (0..m)
            .filter(|&i| !placed[i])
            .max_by_key(|&i| (g.edges()[i].iter().filter(|&&v| seen[v as usize]).count(), Reverse(i)))
            .expect("an unplaced edge remains");
        placed[pick] = true;
        let e = g.edges()[pick];
        for v in e {
            seen[v as usize] = true;
        }
        out.push(e);
    }
    out
}

struct State {
    n: usize,
    edges: Vec<[u32; 3]>,
    /// position (0..3) of the low vertex for each decided edge
    low: Vec<u8>,
}

impl State {
    fn dfs(&mut self) -> bool {
        if self.classes().is_none() {
            return false;
        }
        if self.low.len() == self.edges.len() {
            return true;
        }
        for pos in 0..3 {
            self.low.push(pos);
            if self.dfs() {
                return true;
            }
            self.low.pop();
        }
        false
    }

    /// Merged classes and the strict order constraints between them, or
    /// `None` if the decided choices are contradictory.
    fn classes(&self) -> Option<(Vec<usize>, Vec<(usize, usize)>)> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (e, &pos) in self.edges.iter().zip(&self.low) {
            let hi: Vec<usize> = (0..3).filter(|&i| i != pos as usize).map(|i| e[i] as usize).collect();
            let (a, b) = (find(&mut parent, hi[0]), find(&mut parent, hi[1]));
            parent[a] = b;
        }
        let class: Vec<usize> = (0..self.n).map(|v| find(&mut parent, v)).collect();
        let mut less = Vec::with_capacity(self.low.len());
        for (e, &pos) in self.edges.iter().zip(&self.low) {
            let lo = class[e[pos as usize] as usize];
            let hi = class[e[(pos as usize + 1) % 3] as usize];
            if lo == hi {
                return None;
            }
            less.push((lo, hi));
        }
        // acyclicity by Kahn's algorithm over class representatives
        let mut indeg = vec![0usize; self.n];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for &(a, b) in &less {
            out[a].push(b);
            indeg[b] += 1;
        }
        let mut stack: Vec<usize> = (0..self.n).filter(|&v| class[v] == v && indeg[v] == 0).collect();
        let reps = (0..self.n).filter(|&v| class[v] == v).count();
        let mut done = 0;
        while let Some(v) = stack.pop() {
            done += 1;
            for &w in &out[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
        (done == reps).then_some((class, less))
    }
}

/// Orders the classes topologically, breaking ties by least vertex.
fn topological_blocks(n: usize, class: &[usize], less: &[(usize, usize)]) -> OrderedPartition {
    let mut members: Vec<Vec<u32>> = vec![Vec::new(); n];
    for v in 0..n {
        members[class[v]].push(v as u32);
    }
    let mut indeg = vec![0usize; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in less {
        out[a].push(b);
        indeg[b] += 1;
    }
    let mut heap: BinaryHeap<Reverse<(u32, usize)>> = (0..n)
        .filter(|&c| !members[c].is_empty() && indeg[c] == 0)
        .map(|c| Reverse((members[c][0], c)))
        .collect();
    let mut blocks = Vec::new();
    while let Some(Reverse((_, c))) = heap.pop() {
        blocks.push(members[c].clone());
        for &d in &out[c] {
            indeg[d] -= 1;
            if indeg[d] == 0 {
                heap.push(Reverse((members[d][0], d)));
            }
        }
    }
    OrderedPartition::new(blocks)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::witness::{brute_force_forward_colorable, check_forward};
    use super::*;

    #[test]
    fn single_edge() {
        let p = forward_colorable(&edge()).unwrap().unwrap();
        assert_eq!(p.blocks, vec![vec![0], vec![1, 2]]);
    }

    #[test]
    fn star_center_first() {
        let p = forward_colorable(&star4()).unwrap().unwrap();
        assert_eq!(p.blocks, vec![vec![0], vec![1, 2, 3]]);
    }

    #[test]
    fn fano_is_forward_colorable() {
        let p = forward_colorable(&fano()).unwrap().unwrap();
        assert!(check_forward(&fano(), &p));
    }

    #[test]
    fn clique_and_fig2_are_not() {
        assert!(forward_colorable(&k4()).unwrap().is_none());
        assert_eq!(brute_force_forward_colorable(&k4(), 9), Some(false));
        assert_eq!(forward_colorable(&fig2()).unwrap().is_some(), brute_force_forward_colorable(&fig2(), 9).unwrap());
    }

    #[test]
    fn edgeless_and_isolated() {
        let p = forward_colorable(&Hypergraph3::empty(3)).unwrap().unwrap();
        assert!(check_forward(&Hypergraph3::empty(3), &p));
        let g = Hypergraph3::new(5, [[1, 2, 4]]).unwrap();
        assert!(check_forward(&g, &forward_colorable(&g).unwrap().unwrap()));
    }

    #[test]
    fn agrees_with_brute_force() {
        let mut s = 3u64;
        for _ in 0..300 {
            let n = 6u32;
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
            let found = forward_colorable(&g).unwrap();
            assert_eq!(found.is_some(), brute_force_forward_colorable(&g, 9).unwrap());
            if let Some(p) = found {
                assert!(check_forward(&g, &p));
            }
        }
    }
}

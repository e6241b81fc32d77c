//! Straight-from-definition witness checkers. These deliberately avoid the
//! search code paths so they can re-validate its output.

use crate::hypergraph::Hypergraph3;

use super::{OrderedPartition, Partition3};

fn membership(n: usize, sets: &[&[u32]]) -> Option<Vec<usize>> {
    let mut owner = vec![usize::MAX; n];
    for (i, s) in sets.iter().enumerate() {
        for &v in s.iter() {
            let slot = owner.get_mut(v as usize)?;
            if *slot != usize::MAX {
                return None;
            }
            *slot = i;
        }
    }
    owner.iter().all(|&o| o != usize::MAX).then_some(owner)
}

/// Parts cover `V` disjointly and every edge meets each part exactly once.
pub fn check_tripartition(g: &Hypergraph3, p: &Partition3) -> bool {
    let Some(owner) = membership(g.n(), &[&p.parts[0], &p.parts[1], &p.parts[2]]) else {
        return false;
    };
    g.edges().iter().all(|e| {
        let mut seen = [0u8; 3];
        for &v in e {
            seen[owner[v as usize]] += 1;
        }
        seen == [1, 1, 1]
    })
}

/// Every edge meets `w` in exactly one vertex.
pub fn check_transversal(g: &Hypergraph3, w: &[u32]) -> bool {
    if w.iter().any(|&v| v as usize >= g.n()) {
        return false;
    }
    g.edges().iter().all(|e| e.iter().filter(|v| w.contains(v)).count() == 1)
}

/// `2 <= |U| < n` and no edge meets `U` in exactly two vertices.
pub fn check_collapsible(g: &Hypergraph3, u: &[u32]) -> bool {
    let mut s = u.to_vec();
    s.sort_unstable();
    s.dedup();
    s.len() == u.len()
        && s.len() >= 2
        && s.len() < g.n()
        && s.iter().all(|&v| (v as usize) < g.n())
        && g.edges().iter().all(|e| e.iter().filter(|v| s.contains(v)).count() != 2)
}

/// The blocks partition `V` and every edge has one vertex in some block and
/// its other two vertices together in a strictly later block.
pub fn check_forward(g: &Hypergraph3, p: &OrderedPartition) -> bool {
    let sets: Vec<&[u32]> = p.blocks.iter().map(|b| b.as_slice()).collect();
    if p.blocks.iter().any(|b| b.is_empty()) {
        return false;
    }
    let Some(owner) = membership(g.n(), &sets) else {
        return false;
    };
    g.edges().iter().all(|e| {
        let [a, b, c] = [owner[e[0] as usize], owner[e[1] as usize], owner[e[2] as usize]];
        (b == c && a < b) || (a == c && b < a) || (a == b && c < a)
    })
}

/// The quotient of `g` by a partition whose blocks no edge meets in exactly
/// two vertices, computed directly from the definition; `None` if some edge
/// meets a block twice or the blocks are not a partition.
pub fn quotient_from_definition(g: &Hypergraph3, p: &OrderedPartition) -> Option<Hypergraph3> {
    let sets: Vec<&[u32]> = p.blocks.iter().map(|b| b.as_slice()).collect();
    if p.blocks.iter().any(|b| b.is_empty()) {
        return None;
    }
    let owner = membership(g.n(), &sets)?;
    let mut edges = Vec::new();
    for e in g.edges() {
        for blk in 0..p.blocks.len() {
            if e.iter().filter(|&&v| owner[v as usize] == blk).count() == 2 {
                return None;
            }
        }
        let (a, b, c) = (owner[e[0] as usize], owner[e[1] as usize], owner[e[2] as usize]);
        if a != b && b != c && a != c {
            edges.push([a as u32, b as u32, c as u32]);
        }
    }
    Hypergraph3::new(p.blocks.len(), edges).ok()
}

/// `E(H) = {e : e ∩ U = ∅} ∪ {x y v* : ∃u ∈ U, xyu ∈ E(G)}` with `V∖U`
/// compacted in ascending order and `v*` last. Assumes `U` is collapsible.
pub fn collapse_from_definition(g: &Hypergraph3, u: &[u32]) -> Hypergraph3 {
    let in_u = |v: u32| u.contains(&v);
    let rest: Vec<u32> = (0..g.n() as u32).filter(|&v| !in_u(v)).collect();
    let star = rest.len() as u32;
    let idx = |v: u32| rest.iter().position(|&r| r == v).expect("vertex outside U") as u32;
    let mut edges = Vec::new();
    for e in g.edges() {
        let inside: Vec<u32> = e.iter().copied().filter(|&v| in_u(v)).collect();
        let outside: Vec<u32> = e.iter().copied().filter(|&v| !in_u(v)).collect();
        match inside.len() {
            0 => edges.push([idx(e[0]), idx(e[1]), idx(e[2])]),
            1 => edges.push([idx(outside[0]), idx(outside[1]), star]),
            _ => {}
        }
    }
    Hypergraph3::new(rest.len() + 1, edges).expect("collapse produces valid triples")
}

/// Brute force over all `3^n` part assignments (vertex 0 pinned to part 0).
pub fn brute_force_tripartite(g: &Hypergraph3) -> bool {
    let n = g.n();
    if n == 0 || g.is_edgeless() {
        return true;
    }
    let mut part = vec![0u8; n];
    fn rec(g: &Hypergraph3, part: &mut [u8], i: usize) -> bool {
        if i == part.len() {
            return g.edges().iter().all(|e| {
                let (a, b, c) = (part[e[0] as usize], part[e[1] as usize], part[e[2] as usize]);
                a != b && b != c && a != c
            });
        }
        for p in 0..3 {
            if i == 0 && p > 0 {
                break;
            }
            part[i] = p;
            // prune on edges completed by vertex i
            let ok = g.edges().iter().filter(|e| e[2] as usize == i).all(|e| {
                let (a, b, c) = (part[e[0] as usize], part[e[1] as usize], part[e[2] as usize]);
                a != b && b != c && a != c
            });
            if ok && rec(g, part, i + 1) {
                return true;
            }
        }
        false
    }
    rec(g, &mut part, 0)
}

/// Brute force over all `2^n` subsets.
pub fn brute_force_has_transversal(g: &Hypergraph3) -> bool {
    let n = g.n();
    assert!(n <= 30, "brute force transversal check is limited to 30 vertices");
    let masks: Vec<u32> = g.edges().iter().map(|e| (1 << e[0]) | (1 << e[1]) | (1 << e[2])).collect();
    (0u64..1 << n).any(|w| masks.iter().all(|&m| (m & w as u32).count_ones() == 1))
}

/// Brute force over all subsets; sorted by (size, lexicographic).
pub fn brute_force_collapsible_sets(g: &Hypergraph3) -> Vec<Vec<u32>> {
    let n = g.n();
    assert!(n <= 30, "brute force collapsible-set enumeration is limited to 30 vertices");
    let masks: Vec<u32> = g.edges().iter().map(|e| (1 << e[0]) | (1 << e[1]) | (1 << e[2])).collect();
    let mut out: Vec<Vec<u32>> = (0u64..1 << n)
        .map(|u| u as u32)
        .filter(|u| {
            let k = u.count_ones() as usize;
            k >= 2 && k < n && masks.iter().all(|&m| (m & u).count_ones() != 2)
        })
        .map(|u| (0..n as u32).filter(|v| u >> v & 1 == 1).collect())
        .collect();
    out.sort_by(|a: &Vec<u32>, b: &Vec<u32>| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Exhaustive search over ordered set partitions (block insertion at every
/// position), pruning on completed edges. Returns `None` when `n` exceeds
/// `cap`, since the enumeration grows like the ordered Bell numbers.
pub fn brute_force_forward_colorable(g: &Hypergraph3, cap: usize) -> Option<bool> {
    let n = g.n();
    if n > cap {
        return None;
    }
    // rank[v] = position of v's block; blocks kept as a list of ranks.
    fn edge_ok(rank: &[usize], e: &[u32; 3]) -> bool {
        let [a, b, c] = [rank[e[0] as usize], rank[e[1] as usize], rank[e[2] as usize]];
        (b == c && a < b) || (a == c && b < a) || (a == b && c < a)
    }
    fn rec(g: &Hypergraph3, rank: &mut Vec<usize>, blocks: usize, i: usize) -> bool {
        if i == g.n() {
            return true;
        }
        let check = |rank: &Vec<usize>| g.edges().iter().filter(|e| e[2] as usize == i).all(|e| edge_ok(rank, e));
        // join an existing block
        for b in 0..blocks {
            rank.push(b);
            if check(rank) && rec(g, rank, blocks, i + 1) {
                return true;
            }
            rank.pop();
        }
        // open a new block at position p, shifting later blocks up
        for p in 0..=blocks {
            let shifted: Vec<usize> = rank.iter().map(|&r| if r >= p { r + 1 } else { r }).collect();
            let saved = std::mem::replace(rank, shifted);
            rank.push(p);
            if check(rank) && rec(g, rank, blocks + 1, i + 1) {
                return true;
            }
            *rank = saved;
        }
        false
    }
    Some(rec(g, &mut Vec::with_capacity(n), 0, 0))
}

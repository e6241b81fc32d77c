//! Generators for the named 3-graphs, the binomial random 3-graph, and a
//! diagnostic for how evenly its edges spread across disjoint vertex sets.
//!
//! Labelings are fixed so outputs are byte-reproducible:
//! - `star(h)`: center 0.
//! - `fig2`: a, b, c, d, e ↦ 0..4 with edges acd, bcd, ace, bde, cde.
//! - `g_chain(1)` is `star(4)`; `g_chain(i+1)` puts the apex at 0, then a copy
//!   of `g_chain(i)` on the block `A`, then one on `B`, plus every apex-A-B triple.
//! - `steiner_f2(m)`: vertex `v - 1` is the nonzero vector with binary value `v`.
//! - `blowup_example`: u, b1, b2, v, a1, a2, a3 ↦ 0..6.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::OrderedPartition;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph3;

/// Largest `m` accepted by [`steiner_f2`] (`2^m - 1` vertices).
pub const STEINER_MAX_M: u32 = 12;
/// Largest chain index accepted by [`g_chain`].
pub const G_CHAIN_MAX: u32 = 8;

/// Probability `num / den` with `num <= den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num > den {
            return Err(Error::InvalidParam(format!("probability {num}/{den} must lie in [0, 1]")));
        }
        Ok(Ratio { num, den })
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum GeneratorSpec {
    Star { h: u32 },
    Clique { n: u32 },
    Fano,
    Fig2,
    GChain { i: u32 },
    SteinerF2 { m: u32 },
    BlowupExample,
    Random { n: u32, p: Ratio, seed: u64 },
}

pub fn generate(spec: &GeneratorSpec) -> Result<Hypergraph3> {
    match *spec {
        GeneratorSpec::Star { h } => star(h),
        GeneratorSpec::Clique { n } => Ok(clique(n)),
        GeneratorSpec::Fano => Ok(fano()),
        GeneratorSpec::Fig2 => Ok(fig2()),
        GeneratorSpec::GChain { i } => g_chain(i),
        GeneratorSpec::SteinerF2 { m } => steiner_f2(m),
        GeneratorSpec::BlowupExample => Ok(blowup_example()),
        GeneratorSpec::Random { n, p, seed } => Ok(random_g3(n, p, seed)),
    }
}

/// All triples through vertex 0 on `h` vertices.
pub fn star(h: u32) -> Result<Hypergraph3> {
    if h < 3 {
        return Err(Error::InvalidParam(format!("star needs at least 3 vertices, got {h}")));
    }
    let mut edges = Vec::new();
    for a in 1..h {
        for b in a + 1..h {
            edges.push([0, a, b]);
        }
    }
    Hypergraph3::new(h as usize, edges)
}

pub fn clique(n: u32) -> Hypergraph3 {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                edges.push([a, b, c]);
            }
        }
    }
    Hypergraph3::new(n as usize, edges).expect("valid triples")
}

pub fn fano() -> Hypergraph3 {
    Hypergraph3::new(7, [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]]).expect("valid")
}

pub fn fig2() -> Hypergraph3 {
    Hypergraph3::new(5, [[0, 2, 3], [1, 2, 3], [0, 2, 4], [1, 3, 4], [2, 3, 4]]).expect("valid")
}

pub fn g_chain(i: u32) -> Result<Hypergraph3> {
    if !(1..=G_CHAIN_MAX).contains(&i) {
        return Err(Error::InvalidParam(format!("chain index must lie in 1..={G_CHAIN_MAX}, got {i}")));
    }
    let mut g = star(4)?;
    for _ in 1..i {
        let v = g.n() as u32;
        let mut edges = Vec::with_capacity(2 * g.edge_count() + (v * v) as usize);
        for shift in [1, v + 1] {
            edges.extend(g.edges().iter().map(|e| [e[0] + shift, e[1] + shift, e[2] + shift]));
        }
        for a in 1..=v {
            for b in v + 1..=2 * v {
                edges.push([0, a, b]);
            }
        }
        g = Hypergraph3::new(2 * v as usize + 1, edges)?;
    }
    Ok(g)
}

/// Triples of nonzero vectors of `F_2^m` summing to zero.
pub fn steiner_f2(m: u32) -> Result<Hypergraph3> {
    if !(2..=STEINER_MAX_M).contains(&m) {
        return Err(Error::InvalidParam(format!("m must lie in 2..={STEINER_MAX_M}, got {m}")));
    }
    let top = 1u32 << m;
    let mut edges = Vec::new();
    for x in 1..top {
        for y in x + 1..top {
            let z = x ^ y;
            if z > y {
                edges.push([x - 1, y - 1, z - 1]);
            }
        }
    }
    Hypergraph3::new(top as usize - 1, edges)
}

/// Blocks of `steiner_f2(m)` by highest set bit, lowest bit first. In each
/// edge the highest bit overall is set in exactly two of the three vectors,
/// so those two share the later block.
pub fn steiner_highest_bit_partition(m: u32) -> Result<OrderedPartition> {
    if !(2..=STEINER_MAX_M).contains(&m) {
        return Err(Error::InvalidParam(format!("m must lie in 2..={STEINER_MAX_M}, got {m}")));
    }
    let blocks = (0..m).map(|j| ((1u32 << j)..(1u32 << (j + 1))).map(|v| v - 1).collect()).collect();
    Ok(OrderedPartition::new(blocks))
}

/// A star on u, b1, b2, v (center u) with v blown up into a star
/// v, a1, a2, a3 (center v).
pub fn blowup_example() -> Hypergraph3 {
    let (u, b1, b2) = (0, 1, 2);
    let a = [3, 4, 5, 6];
    let mut edges = vec![[u, b1, b2]];
    for &w in &a {
        edges.push([u, b1, w]);
        edges.push([u, b2, w]);
    }
    edges.extend([[3, 4, 5], [3, 4, 6], [3, 5, 6]]);
    Hypergraph3::new(7, edges).expect("valid")
}

/// Each triple of `0..n` independently with probability `p`, drawn in
/// lexicographic order from a ChaCha8 stream seeded with `seed`.
pub fn random_g3(n: u32, p: Ratio, seed: u64) -> Hypergraph3 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if rng.gen_range(0..p.den) < p.num {
                    edges.push([a, b, c]);
                }
            }
        }
    }
    Hypergraph3::new(n as usize, edges).expect("valid triples")
}

fn crossing(g: &Hypergraph3, part: &[u8]) -> u64 {
    g.edges()
        .iter()
        .filter(|e| {
            let mut seen = [false; 3];
            for &v in e.iter() {
                let p = part[v as usize];
                if p == u8::MAX || seen[p as usize] {
                    return false;
                }
                seen[p as usize] = true;
            }
            true
        })
        .count() as u64
}

/// Minimum, over `trials` random choices of disjoint `s`-sets `A1, A2, A3`,
/// of the number of edges with one vertex in each.
pub fn edge_distribution_check(g: &Hypergraph3, s: usize, trials: u64, seed: u64) -> Result<u64> {
    let n = g.n();
    if 3 * s > n {
        return Err(Error::InvalidParam(format!("three disjoint {s}-sets do not fit in {n} vertices")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<u32> = (0..n as u32).collect();
    let mut part = vec![u8::MAX; n];
    let mut best = u64::MAX;
    for _ in 0..trials {
        order.shuffle(&mut rng);
        part.fill(u8::MAX);
        for (i, &v) in order[..3 * s].iter().enumerate() {
            part[v as usize] = (i / s) as u8;
        }
        best = best.min(crossing(g, &part));
    }
    Ok(if trials == 0 { 0 } else { best })
}

/// Exact minimum over every unordered triple of disjoint `s`-sets; fails
/// when more than `budget` triples would be examined.
pub fn edge_distribution_exhaustive(g: &Hypergraph3, s: usize, budget: u64) -> Result<u64> {
    let n = g.n();
    if 3 * s > n {
        return Err(Error::InvalidParam(format!("three disjoint {s}-sets do not fit in {n} vertices")));
    }
    if s == 0 {
        return Ok(0);
    }
    let count = binom(n as u64, 3 * s as u64)
        .checked_mul(multinomial_thirds(s as u64))
        .filter(|&c| c <= budget)
        .ok_or(Error::BudgetExceeded { what: "edge distribution enumeration", budget })?;
    let _ = count;
    let mut part = vec![u8::MAX; n];
    let mut best = u64::MAX;
    let mut sizes = [0usize; 3];
    assign(g, s, 0, &mut part, &mut sizes, &mut best);
    Ok(best)
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Ways to split `3s` labeled items into three unlabeled `s`-sets.
fn multinomial_thirds(s: u64) -> u64 {
    binom(3 * s, s).saturating_mul(binom(2 * s, s)) / 6
}

/// Assigns vertices in order to "unused" or one of three parts; parts are
/// opened in order so each unordered triple is produced once.
fn assign(g: &Hypergraph3, s: usize, v: usize, part: &mut [u8], sizes: &mut [usize; 3], best: &mut u64) {
    let n = part.len();
    let placed: usize = sizes.iter().sum();
    if placed == 3 * s {
        *best = (*best).min(crossing(g, part));
        return;
    }
    if n - v < 3 * s - placed {
        return;
    }
    for p in 0..3u8 {
        let pi = p as usize;
        if sizes[pi] == s || (pi > 0 && sizes[pi - 1] == 0) {
            continue;
        }
        part[v] = p;
        sizes[pi] += 1;
        assign(g, s, v + 1, part, sizes, best);
        sizes[pi] -= 1;
    }
    part[v] = u8::MAX;
    assign(g, s, v + 1, part, sizes, best);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::witness::check_forward;
    use crate::canon::{are_isomorphic, canonical_key};

    #[test]
    fn named_graphs() {
        assert_eq!(fig2().edges(), &[[0, 2, 3], [0, 2, 4], [1, 2, 3], [1, 3, 4], [2, 3, 4]]);
        assert_eq!(star(4).unwrap().edge_count(), 3);
        assert_eq!(clique(4).edge_count(), 4);
        assert!(star(2).is_err());
        let b = blowup_example();
        assert_eq!((b.n(), b.edge_count()), (7, 12));
    }

    #[test]
    fn star_edge_count() {
        for h in 3..10u32 {
            let s = star(h).unwrap();
            assert_eq!(s.edge_count() as u32, (h - 1) * (h - 2) / 2);
            assert!(s.edges().iter().all(|e| e[0] == 0));
        }
    }

    #[test]
    fn chain_sizes() {
        let expected = [(4, 3), (9, 22), (19, 125)];
        for (i, &(v, e)) in expected.iter().enumerate() {
            let g = g_chain(i as u32 + 1).unwrap();
            assert_eq!((g.n(), g.edge_count()), (v, e));
        }
        assert!(g_chain(0).is_err());
    }

    #[test]
    fn steiner_small_cases() {
        assert_eq!(steiner_f2(2).unwrap(), Hypergraph3::new(3, [[0, 1, 2]]).unwrap());
        let s3 = steiner_f2(3).unwrap();
        assert_eq!(s3.edge_count(), 7);
        assert_eq!(canonical_key(&s3), canonical_key(&fano()));
        assert!(are_isomorphic(&s3, &fano()));
        assert!(steiner_f2(1).is_err());
    }

    #[test]
    fn steiner_pairs_covered_once_and_forward() {
        for m in 2..=6 {
            let g = steiner_f2(m).unwrap();
            let n = g.n();
            let mut cover = vec![0u32; n * n];
            for e in g.edges() {
                for (a, b) in [(e[0], e[1]), (e[0], e[2]), (e[1], e[2])] {
                    cover[a as usize * n + b as usize] += 1;
                }
            }
            for a in 0..n {
                for b in a + 1..n {
                    assert_eq!(cover[a * n + b], 1, "m={m} pair {a},{b}");
                }
            }
            assert!(check_forward(&g, &steiner_highest_bit_partition(m).unwrap()));
        }
    }

    #[test]
    fn random_model() {
        assert!(random_g3(8, Ratio::new(0, 1).unwrap(), 3).is_edgeless());
        assert_eq!(random_g3(8, Ratio::new(1, 1).unwrap(), 3), clique(8));
        let p = Ratio::new(20, 196).unwrap();
        let a = random_g3(14, p, 1);
        assert_eq!(a, random_g3(14, p, 1));
        let mean = 364.0 * p.as_f64();
        let sd = (364.0 * p.as_f64() * (1.0 - p.as_f64())).sqrt();
        assert!((a.edge_count() as f64 - mean).abs() < 4.0 * sd);
        assert!(Ratio::new(3, 2).is_err());
    }

    #[test]
    fn edge_distribution() {
        let k = clique(9);
        assert_eq!(edge_distribution_check(&k, 3, 20, 1).unwrap(), 27);
        assert_eq!(edge_distribution_exhaustive(&k, 3, 1 << 20).unwrap(), 27);
        assert_eq!(edge_distribution_check(&Hypergraph3::empty(9), 2, 5, 1).unwrap(), 0);
        assert!(edge_distribution_check(&k, 4, 1, 1).is_err());
    }

    #[test]
    fn exhaustive_enumeration_counts() {
        // every unordered split of 6 vertices into three pairs: 15 of them
        let g = clique(6);
        assert_eq!(multinomial_thirds(2), 15);
        assert_eq!(edge_distribution_exhaustive(&g, 2, 15).unwrap(), 8);
        assert!(edge_distribution_exhaustive(&g, 2, 14).is_err());
    }
}

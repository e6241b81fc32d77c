use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{ColorLabel, Oracle};

/// Largest vertex count for [`Rainbow`], keeping every color id in 32 bits.
pub const RAINBOW_MAX_N: u64 = 2048;

/// Every triple gets its own color: `Index(rank + 1)` where `rank` is the
/// colexicographic rank `C(z,3) + C(y,2) + x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rainbow {
    n: u64,
}

impl Rainbow {
    pub fn new(n: u64) -> Result<Self> {
        if !(3..=RAINBOW_MAX_N).contains(&n) {
            return Err(Error::InvalidParam(format!("rainbow coloring needs 3..={RAINBOW_MAX_N} vertices, got {n}")));
        }
        Ok(Rainbow { n })
    }
}

impl Oracle for Rainbow {
    fn name(&self) -> String {
        format!("rainbow:N={}", self.n)
    }

    fn domain_size(&self) -> u128 {
        self.n as u128
    }

    fn color_count(&self) -> u64 {
        self.n * (self.n - 1) * (self.n - 2) / 6
    }

    fn color_id(&self, t: [u64; 3]) -> u32 {
        let [x, y, z] = t;
        (z * (z - 1) * (z.saturating_sub(2)) / 6 + y * (y - 1) / 2 + x) as u32
    }

    fn label(&self, id: u32) -> ColorLabel {
        ColorLabel::Index { i: id as u64 + 1 }
    }
}

/// `q` random balanced 3-partitions of `0..N`; a triple takes the index of
/// the first partition that puts its vertices in three different parts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomTripartite {
    q: u32,
    n: u64,
    seed: u64,
    /// `parts[i * n + v]` is the part of `v` in copy `i`.
    parts: Vec<u8>,
}

/// Outcome of drawing a random tripartite coloring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TripartiteDraw {
    Total(RandomTripartite),
    /// Triples split by no copy, ascending. Retry with another seed.
    Failed { seed: u64, uncolored: Vec<[u64; 3]> },
}

impl TripartiteDraw {
    pub fn into_total(self) -> Option<RandomTripartite> {
        match self {
            TripartiteDraw::Total(c) => Some(c),
            TripartiteDraw::Failed { .. } => None,
        }
    }
}

/// Largest vertex count for a random tripartite coloring.
const TRIPARTITE_MAX_N: u64 = 1 << 12;

/// Draws the partitions from a ChaCha8 stream seeded with `seed`. Each copy
/// shuffles `0..N` and cuts the result into three runs whose sizes differ by
/// at most one (larger runs first).
pub fn random_tripartite_coloring(q: u32, n: u64, seed: u64) -> Result<TripartiteDraw> {
    if q == 0 {
        return Err(Error::InvalidParam("at least one color is needed".into()));
    }
    if !(3..=TRIPARTITE_MAX_N).contains(&n) {
        return Err(Error::InvalidParam(format!("random tripartite coloring needs 3..={TRIPARTITE_MAX_N} vertices")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<u64> = (0..n).collect();
    let mut parts = vec![0u8; q as usize * n as usize];
    for i in 0..q as usize {
        order.shuffle(&mut rng);
        for (pos, &v) in order.iter().enumerate() {
            parts[i * n as usize + v as usize] = (3 * pos as u64 / n) as u8;
        }
    }
    let c = RandomTripartite { q, n, seed, parts };
    let mut uncolored = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            for z in y + 1..n {
                if c.first_split([x, y, z]).is_none() {
                    uncolored.push([x, y, z]);
                }
            }
        }
    }
    Ok(if uncolored.is_empty() { TripartiteDraw::Total(c) } else { TripartiteDraw::Failed { seed, uncolored } })
}

impl RandomTripartite {
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Part (0, 1 or 2) of `v` in copy `i` (0-based).
    pub fn part(&self, i: u32, v: u64) -> u8 {
        self.parts[i as usize * self.n as usize + v as usize]
    }

    fn first_split(&self, t: [u64; 3]) -> Option<u32> {
        (0..self.q).find(|&i| {
            let (a, b, c) = (self.part(i, t[0]), self.part(i, t[1]), self.part(i, t[2]));
            a != b && b != c && a != c
        })
    }
}

impl Oracle for RandomTripartite {
    fn name(&self) -> String {
        format!("tripartite:q={},N={},seed={}", self.q, self.n, self.seed)
    }

    fn domain_size(&self) -> u128 {
        self.n as u128
    }

    fn color_count(&self) -> u64 {
        self.q as u64
    }

    fn color_id(&self, t: [u64; 3]) -> u32 {
        self.first_split(t).expect("a total draw splits every triple")
    }

    fn label(&self, id: u32) -> ColorLabel {
        ColorLabel::Index { i: id as u64 + 1 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rainbow_ids_are_distinct_ranks() {
        let r = Rainbow::new(7).unwrap();
        let mut ids = Vec::new();
        for z in 2..7 {
            for y in 1..z {
                for x in 0..y {
                    ids.push(r.color_id([x, y, z]));
                }
            }
        }
        assert_eq!(ids, (0..35).collect::<Vec<_>>());
        assert_eq!(r.color_count(), 35);
        assert_eq!(Rainbow::new(3).unwrap().color_count(), 1);
        assert!(Rainbow::new(2).is_err());
    }

    #[test]
    fn three_vertices_one_copy() {
        let TripartiteDraw::Total(c) = random_tripartite_coloring(1, 3, 0).unwrap() else { panic!() };
        assert_eq!(c.eval([0, 1, 2]).unwrap(), ColorLabel::Index { i: 1 });
    }

    #[test]
    fn partitions_are_balanced_and_reproducible() {
        let draw = random_tripartite_coloring(54, 16, 1).unwrap();
        assert_eq!(draw, random_tripartite_coloring(54, 16, 1).unwrap());
        let c = match draw {
            TripartiteDraw::Total(c) => c,
            TripartiteDraw::Failed { .. } => return,
        };
        for i in 0..54 {
            let mut sizes = [0; 3];
            for v in 0..16 {
                sizes[c.part(i, v) as usize] += 1;
            }
            assert_eq!(sizes, [6, 5, 5]);
        }
    }

    #[test]
    fn colored_triples_are_split_by_their_copy() {
        for seed in 0..5 {
            if let TripartiteDraw::Total(c) = random_tripartite_coloring(30, 9, seed).unwrap() {
                for z in 2..9 {
                    for y in 1..z {
                        for x in 0..y {
                            let i = c.color_id([x, y, z]);
                            let mut p = [c.part(i, x), c.part(i, y), c.part(i, z)];
                            p.sort();
                            assert_eq!(p, [0, 1, 2]);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn too_few_copies_fail_with_report() {
        let TripartiteDraw::Failed { uncolored, .. } = random_tripartite_coloring(1, 6, 3).unwrap() else {
            panic!("one balanced partition of 6 vertices splits only 8 of 20 triples")
        };
        assert_eq!(uncolored.len(), 12);
        assert!(uncolored.windows(2).all(|w| w[0] < w[1]));
    }
}

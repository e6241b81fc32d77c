//! Exact bound arithmetic and brute-force Ramsey oracles for tiny cases.

use std::fmt;
use std::ops::Range;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::colorings::{find_mono_copy_with_budget, ColorLabel, Oracle};
use crate::embed::edges_closed_at;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph3;

/// Default size limit, in bits, for exact bound values.
pub const DEFAULT_BIT_BUDGET: u64 = 1 << 24;

/// Exact nonnegative integer; serializes as a decimal string.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BigNat(pub BigUint);

impl BigNat {
    pub fn bits(&self) -> u64 {
        self.0.bits()
    }

    /// `2^k`.
    pub fn pow2(k: u64) -> Self {
        BigNat(BigUint::one() << k)
    }
}

impl From<u64> for BigNat {
    fn from(v: u64) -> Self {
        BigNat(BigUint::from(v))
    }
}

impl fmt::Display for BigNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for BigNat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_str_radix(10))
    }
}

impl<'de> Deserialize<'de> for BigNat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        BigUint::parse_bytes(s.as_bytes(), 10).map(BigNat).ok_or_else(|| serde::de::Error::custom("invalid decimal"))
    }
}

fn too_big(what: &'static str, budget: u64) -> Error {
    Error::BudgetExceeded { what, budget }
}

/// `tw_1(x) = x`, `tw_k(x) = 2^{tw_{k-1}(x)}`; fails when a value would
/// need more than `max_bits` bits.
pub fn tower(k: u32, x: u64, max_bits: u64) -> Result<BigNat> {
    if k == 0 {
        return Err(Error::InvalidParam("tower height starts at 1".into()));
    }
    let mut v = BigUint::from(x);
    for _ in 1..k {
        let e = v.to_u64().filter(|&e| e < max_bits).ok_or_else(|| too_big("tower value", max_bits))?;
        v = BigUint::one() << e;
    }
    Ok(BigNat(v))
}

/// `(qh)^{q^{ℓ-1} h^{2ℓ} t}`, exactly.
pub fn upper_bound_value(q: u64, h: u64, ell: u32, t: u64, max_bits: u64) -> Result<BigNat> {
    if q < 1 || h < 3 || ell < 1 || t < 1 {
        return Err(Error::InvalidParam(format!("need q >= 1, h >= 3, ell >= 1, t >= 1; got q={q} h={h} ell={ell} t={t}")));
    }
    let exponent = BigUint::from(q).pow(ell - 1) * BigUint::from(h).pow(2 * ell) * BigUint::from(t);
    let base = BigUint::from(q) * BigUint::from(h);
    // bits(base^e) <= e * bits(base)
    let bound = &exponent * BigUint::from(base.bits());
    if bound > BigUint::from(max_bits) {
        return Err(too_big("bound value", max_bits));
    }
    let e = exponent.to_u32().expect("exponent below the bit budget");
    Ok(BigNat(base.pow(e)))
}

/// Explicit coloring of the triples of `0..n` by colexicographic rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitColoring {
    pub n: u64,
    pub q: u32,
    pub colors: Vec<u32>,
}

pub(crate) fn colex_rank(t: [u64; 3]) -> usize {
    let [x, y, z] = t;
    (z * (z - 1) * (z - 2) / 6 + y * (y - 1) / 2 + x) as usize
}

fn triples_colex(n: u64) -> Vec<[u64; 3]> {
    let mut out = Vec::new();
    for z in 2..n {
        for y in 1..z {
            for x in 0..y {
                out.push([x, y, z]);
            }
        }
    }
    out
}

impl Oracle for ExplicitColoring {
    fn name(&self) -> String {
        format!("explicit:N={},q={}", self.n, self.q)
    }

    fn domain_size(&self) -> u128 {
        self.n as u128
    }

    fn color_count(&self) -> u64 {
        self.q as u64
    }

    fn color_id(&self, t: [u64; 3]) -> u32 {
        self.colors[colex_rank(t)]
    }

    fn label(&self, id: u32) -> ColorLabel {
        ColorLabel::Index { i: id as u64 + 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleColor {
    pub triple: [u64; 3],
    /// 1-based color.
    pub color: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ArrowsWitness {
    /// A coloring with no monochromatic copy, in colexicographic triple order.
    Avoiding { coloring: Vec<TripleColor> },
    /// Every branch of the search closed on a monochromatic copy. `first_copy`
    /// is the copy that closed the first branch (pattern vertex images, with
    /// isolated pattern vertices left out) and `closed_branches` counts them.
    Forced { closed_branches: u64, first_copy: Option<Vec<u64>>, first_color: Option<u32> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowsResult {
    pub n: u64,
    pub q: u32,
    pub arrows: bool,
    pub witness: ArrowsWitness,
    pub nodes_explored: u64,
}

impl ArrowsResult {
    pub fn avoiding_coloring(&self) -> Option<ExplicitColoring> {
        match &self.witness {
            ArrowsWitness::Avoiding { coloring } => Some(ExplicitColoring {
                n: self.n,
                q: self.q,
                colors: coloring.iter().map(|tc| tc.color - 1).collect(),
            }),
            ArrowsWitness::Forced { .. } => None,
        }
    }

    /// For a negative answer, re-checks the avoiding coloring with the
    /// monochromatic-copy search. Positive answers return `true`.
    pub fn revalidate(&self, pattern: &Hypergraph3) -> Result<bool> {
        match self.avoiding_coloring() {
            None => Ok(self.arrows),
            Some(c) => Ok(!self.arrows && c.colors.iter().all(|&x| x < self.q) && verify_lower_bound(&c, pattern, u64::MAX)?),
        }
    }
}

struct Arrower<'a> {
    q: u32,
    triples: Vec<[u64; 3]>,
    colors: Vec<u32>,
    /// Pattern without isolated vertices.
    pattern: &'a Hypergraph3,
    nodes: u64,
    budget: u64,
    closed_branches: u64,
    first_copy: Option<(Vec<u64>, u32)>,
}

impl Arrower<'_> {
    /// Colors triples from index `i` on; `true` when some completion avoids
    /// every monochromatic copy (left in `colors`).
    fn dfs(&mut self, i: usize, used: u32) -> Result<bool> {
        if i == self.triples.len() {
            return Ok(true);
        }
        let limit = if i == 0 { 1 } else { (used + 1).min(self.q) };
        for c in 0..limit {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(too_big("arrowing search", self.budget));
            }
            self.colors[i] = c;
            if let Some(copy) = self.copy_through(i) {
                self.closed_branches += 1;
                if self.first_copy.is_none() {
                    self.first_copy = Some((copy, c));
                }
                continue;
            }
            if self.dfs(i + 1, used.max(c + 1))? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// A copy using triple `i` whose edges all have triple `i`'s color among
    /// triples `0..=i`.
    fn copy_through(&self, i: usize) -> Option<Vec<u64>> {
        let t = self.triples[i];
        let c = self.colors[i];
        let host = t[2] + 1;
        let p = self.pattern;
        for e in p.edges() {
            for perm in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
                let mut order: Vec<u32> = e.to_vec();
                order.extend((0..p.n() as u32).filter(|v| !e.contains(v)));
                let closed = edges_closed_at(p, &order);
                let mut map = vec![u64::MAX; p.n()];
                for k in 0..3 {
                    map[e[k] as usize] = t[perm[k]];
                }
                if self.extend(&order, &closed, 3, &mut map, host, c, i) {
                    return Some(map);
                }
            }
        }
        None
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        &self,
        order: &[u32],
        closed: &[Vec<[u32; 3]>],
        k: usize,
        map: &mut Vec<u64>,
        host: u64,
        c: u32,
        last: usize,
    ) -> bool {
        let ok_edges = |map: &Vec<u64>, k: usize| {
            closed[k].iter().all(|e| {
                let mut t = [map[e[0] as usize], map[e[1] as usize], map[e[2] as usize]];
                t.sort_unstable();
                let r = colex_rank(t);
                r <= last && self.colors[r] == c
            })
        };
        if k == 3 && !ok_edges(map, 2) {
            return false;
        }
        if k == order.len() {
            return true;
        }
        let v = order[k] as usize;
        for x in 0..host {
            if map.contains(&x) {
                continue;
            }
            map[v] = x;
            if ok_edges(map, k) && self.extend(order, closed, k + 1, map, host, c, last) {
                return true;
            }
        }
        map[v] = u64::MAX;
        false
    }
}

/// Whether every `q`-coloring of the triples of `0..n` has a monochromatic
/// copy of `pattern`. Triples are colored in colexicographic order, the
/// first one with color 1 and each later one with a color already used or
/// the next unused one; a branch closes as soon as the newest triple
/// completes a monochromatic copy.
pub fn arrows(n: u64, pattern: &Hypergraph3, q: u32, budget: u64) -> Result<ArrowsResult> {
    if q == 0 {
        return Err(Error::InvalidParam("at least one color is needed".into()));
    }
    if n > 64 {
        return Err(Error::CapExceeded { what: "arrowing search", n: n as usize, cap: 64 });
    }
    let triples = triples_colex(n);
    let forced = |nodes, closed_branches, first: Option<(Vec<u64>, u32)>| ArrowsResult {
        n,
        q,
        arrows: true,
        witness: ArrowsWitness::Forced {
            closed_branches,
            first_copy: first.as_ref().map(|f| f.0.clone()),
            first_color: first.map(|f| f.1 + 1),
        },
        nodes_explored: nodes,
    };
    let avoiding = |triples: &[[u64; 3]], colors: &[u32], nodes| ArrowsResult {
        n,
        q,
        arrows: false,
        witness: ArrowsWitness::Avoiding {
            coloring: triples.iter().zip(colors).map(|(&triple, &c)| TripleColor { triple, color: c + 1 }).collect(),
        },
        nodes_explored: nodes,
    };
    if (pattern.n() as u64) > n {
        return Ok(avoiding(&triples, &vec![0; triples.len()], 0));
    }
    let stripped = crate::analysis::strip_isolated(pattern).graph;
    if stripped.is_edgeless() {
        return Ok(forced(0, 0, None));
    }
    let mut a = Arrower {
        q,
        colors: vec![0; triples.len()],
        triples,
        pattern: &stripped,
        nodes: 0,
        budget,
        closed_branches: 0,
        first_copy: None,
    };
    if a.dfs(0, 0)? {
        return Ok(avoiding(&a.triples, &a.colors, a.nodes));
    }
    Ok(forced(a.nodes, a.closed_branches, a.first_copy))
}

/// Least `N <= n_cap` with `arrows(N, pattern, q)`.
pub fn ramsey_exact(pattern: &Hypergraph3, q: u32, n_cap: u64, budget: u64) -> Result<Option<u64>> {
    for n in pattern.n() as u64..=n_cap {
        if arrows(n, pattern, q, budget)?.arrows {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// `true` iff the oracle has no monochromatic copy of `pattern` on its whole
/// domain, which shows `r(pattern; color_count) > domain_size`.
pub fn verify_lower_bound(oracle: &dyn Oracle, pattern: &Hypergraph3, budget: u64) -> Result<bool> {
    let n = u64::try_from(oracle.domain_size())
        .map_err(|_| Error::Domain("the domain is too large to search exhaustively".into()))?;
    let window: Range<u64> = 0..n;
    if pattern.is_edgeless() {
        return Ok((pattern.n() as u64) > n);
    }
    Ok(find_mono_copy_with_budget(oracle, pattern, window, budget)?.is_none())
}

/// Square-and-multiply, kept separate from `BigUint::pow` for cross-checks.
#[cfg(test)]
fn pow_by_squaring(base: &BigUint, mut e: u64) -> BigUint {
    let mut acc = BigUint::one();
    let mut b = base.clone();
    while e != 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        b = &b * &b;
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colorings::{PhiQ, Rainbow};
    use crate::constructions::{clique, star};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn edge() -> Hypergraph3 {
        Hypergraph3::new(3, [[0, 1, 2]]).unwrap()
    }

    #[test]
    fn towers() {
        assert_eq!(tower(1, 5, 64).unwrap(), BigNat::from(5));
        assert_eq!(tower(2, 3, 64).unwrap(), BigNat::from(8));
        assert_eq!(tower(3, 2, 64).unwrap(), BigNat::from(16));
        assert_eq!(tower(4, 2, 64).unwrap(), BigNat::from(65536));
        assert_eq!(tower(5, 2, 1 << 17).unwrap(), BigNat::pow2(65536));
        assert!(tower(5, 2, 1 << 10).unwrap_err().is_budget());
        assert!(tower(0, 2, 64).is_err());
        assert_eq!(tower(3, 0, 64).unwrap(), BigNat::from(2));
    }

    #[test]
    fn explicit_bound_values() {
        assert_eq!(upper_bound_value(2, 4, 1, 8, DEFAULT_BIT_BUDGET).unwrap(), BigNat::pow2(384));
        assert_eq!(upper_bound_value(1, 3, 1, 3, DEFAULT_BIT_BUDGET).unwrap(), BigNat(BigUint::from(3u32).pow(27)));
        // exponent 2 * 3^4 * 6
        assert_eq!(upper_bound_value(2, 3, 2, 6, DEFAULT_BIT_BUDGET).unwrap(), BigNat(BigUint::from(6u32).pow(972)));
        assert!(upper_bound_value(2, 3, 2, 6, 100).unwrap_err().is_budget());
        assert!(upper_bound_value(2, 2, 1, 1, 100).is_err());
    }

    #[test]
    fn bound_values_match_square_and_multiply() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let (q, h, ell, t) = (rng.gen_range(1..4u64), rng.gen_range(3..6u64), rng.gen_range(1..3u32), rng.gen_range(1..5u64));
            let e = q.pow(ell - 1) * h.pow(2 * ell) * t;
            let expected = pow_by_squaring(&BigUint::from(q * h), e);
            assert_eq!(upper_bound_value(q, h, ell, t, DEFAULT_BIT_BUDGET).unwrap().0, expected);
        }
    }

    #[test]
    fn bignat_serializes_as_decimal() {
        let v = BigNat::pow2(70);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, "\"1180591620717411303424\"");
        assert_eq!(serde_json::from_str::<BigNat>(&s).unwrap(), v);
    }

    #[test]
    fn trivial_arrowing() {
        for q in 1..4 {
            assert!(arrows(3, &edge(), q, 1000).unwrap().arrows);
        }
        let r = arrows(2, &edge(), 1, 1000).unwrap();
        assert!(!r.arrows);
        assert!(r.revalidate(&edge()).unwrap());
        for q in 1..=3 {
            assert_eq!(ramsey_exact(&edge(), q, 5, 1000).unwrap(), Some(3));
        }
        assert_eq!(ramsey_exact(&star(4).unwrap(), 1, 6, 1000).unwrap(), Some(4));
    }

    #[test]
    fn two_colorings_avoid_k4_on_five_vertices() {
        let r = arrows(5, &clique(4), 2, 1 << 20).unwrap();
        assert!(!r.arrows);
        assert!(r.revalidate(&clique(4)).unwrap());
        let c = r.avoiding_coloring().unwrap();
        assert_eq!(c.colors[0], 0);
    }

    #[test]
    fn monotone_in_n_and_q() {
        let patterns = [edge(), star(4).unwrap(), Hypergraph3::new(4, [[0, 1, 2], [0, 1, 3]]).unwrap()];
        for p in &patterns {
            for q in 1..=2u32 {
                let mut prev = false;
                for n in 3..=6u64 {
                    let r = arrows(n, p, q, 1 << 22).unwrap();
                    assert!(r.revalidate(p).unwrap());
                    assert!(!prev || r.arrows, "n={n} q={q}");
                    prev = r.arrows;
                    if !r.arrows {
                        assert!(!arrows(n, p, q + 1, 1 << 22).unwrap().arrows);
                    }
                }
            }
        }
    }

    #[test]
    fn lower_bounds_from_oracles() {
        let r = Rainbow::new(5).unwrap();
        assert!(verify_lower_bound(&r, &Hypergraph3::new(4, [[0, 1, 2], [0, 1, 3]]).unwrap(), 1 << 20).unwrap());
        assert!(!verify_lower_bound(&r, &edge(), 1 << 20).unwrap());
        let phi = PhiQ::new(4).unwrap();
        assert!(verify_lower_bound(&phi, &clique(4), 1 << 20).unwrap());
        assert!(verify_lower_bound(&PhiQ::new(12).unwrap(), &edge(), 10).is_err());
    }

    #[test]
    fn duality_on_tiny_instances() {
        let phi = PhiQ::new(4).unwrap();
        let k4 = clique(4);
        assert!(verify_lower_bound(&phi, &k4, 1 << 20).unwrap());
        let e2 = Hypergraph3::new(4, [[0, 1, 2], [0, 1, 3]]).unwrap();
        let r = Rainbow::new(5).unwrap();
        assert!(verify_lower_bound(&r, &e2, 1 << 20).unwrap());
        // ten colors on five vertices leave the two-edge graph unforced
        assert_eq!(ramsey_exact(&e2, 10, 5, 1 << 24).unwrap(), None);
    }
}

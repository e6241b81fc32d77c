use std::collections::BTreeMap;

use crate::analysis::OrderedPartition;
use crate::embed::Embedding;
use crate::error::{Error, Result};

use super::{ColorLabel, Oracle};

/// Coloring of `[N]^q` (lexicographic order) from a base coloring of `[N]`.
///
/// A vector `(a^1, ..., a^q)` is stored as the integer
/// `a^1 N^{q-1} + ... + a^q`, so coordinate 1 is the most significant digit
/// and integer order is lexicographic order. At the first coordinate `j`
/// where a triple is not constant, distinct values take the base color of
/// those values, `x^j < y^j = z^j` gives `Coord(j, 0)` and
/// `x^j = y^j < z^j` gives `Coord(j, 1)`.
pub struct Product {
    base: Box<dyn Oracle>,
    n: u64,
    q: u32,
    /// `radix[j - 1] = N^{q-j}`.
    radix: Vec<u64>,
    name: String,
}

impl Product {
    pub fn new(base: Box<dyn Oracle>, q: u32) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidParam("product dimension must be positive".into()));
        }
        let n = u64::try_from(base.domain_size())
            .map_err(|_| Error::InvalidParam("base domain does not fit in 64 bits".into()))?;
        let too_big = || Error::InvalidParam(format!("{n}^{q} vertices do not fit in 64 bits"));
        n.checked_pow(q).ok_or_else(too_big)?;
        let radix = (1..=q).map(|j| n.pow(q - j)).collect();
        let name = format!("product:q={q},base=[{}]", base.name());
        Ok(Product { base, n, q, radix, name })
    }

    /// Replaces the address reported by [`Oracle::name`].
    pub fn with_name(mut self, name: String) -> Self {
        self.name = name;
        self
    }

    pub fn dimension(&self) -> u32 {
        self.q
    }

    pub fn base(&self) -> &dyn Oracle {
        self.base.as_ref()
    }

    /// Coordinate `j` (1-based) of vertex `v`.
    #[inline]
    pub fn coord(&self, v: u64, j: u32) -> u64 {
        (v / self.radix[j as usize - 1]) % self.n
    }

    pub fn encode(&self, coords: &[u64]) -> Result<u64> {
        if coords.len() != self.q as usize || coords.iter().any(|&a| a >= self.n) {
            return Err(Error::Domain(format!("{coords:?} is not a vector in [{}]^{}", self.n, self.q)));
        }
        Ok(coords.iter().fold(0, |acc, &a| acc * self.n + a))
    }

    pub fn decode(&self, v: u64) -> Vec<u64> {
        (1..=self.q).map(|j| self.coord(v, j)).collect()
    }
}

impl Oracle for Product {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn domain_size(&self) -> u128 {
        (self.n as u128).pow(self.q)
    }

    fn color_count(&self) -> u64 {
        2 * self.q as u64 + self.base.color_count()
    }

    fn color_id(&self, t: [u64; 3]) -> u32 {
        for j in 1..=self.q {
            let (a, b, c) = (self.coord(t[0], j), self.coord(t[1], j), self.coord(t[2], j));
            if a == b && b == c {
                continue;
            }
            return if a < b && b < c {
                2 * self.q + self.base.color_id([a, b, c])
            } else if b == c {
                2 * (j - 1)
            } else {
                2 * (j - 1) + 1
            };
        }
        unreachable!("distinct vertices differ in some coordinate")
    }

    fn label(&self, id: u32) -> ColorLabel {
        if id < 2 * self.q {
            ColorLabel::Coord { j: id / 2 + 1, s: (id % 2) as u8 }
        } else {
            ColorLabel::Base { c: Box::new(self.base.label(id - 2 * self.q)) }
        }
    }
}

/// For a copy colored `Coord(j, s)`, the pattern vertices grouped by their
/// image's coordinate `j`, in increasing coordinate order for `s = 0` and
/// decreasing for `s = 1`. `None` for other labels.
pub fn coord_partition(product: &Product, copy: &Embedding, label: &ColorLabel) -> Option<OrderedPartition> {
    let ColorLabel::Coord { j, s } = *label else { return None };
    if j == 0 || j > product.dimension() {
        return None;
    }
    let mut groups: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for (v, &x) in copy.map.iter().enumerate() {
        groups.entry(product.coord(x, j)).or_default().push(v as u32);
    }
    let mut blocks: Vec<Vec<u32>> = groups.into_values().collect();
    if s == 1 {
        blocks.reverse();
    }
    Some(OrderedPartition::new(blocks))
}

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{mask_to_set, require_cap, triple_mask, Hypergraph3};

use super::collapse::closed_masks;
use super::OrderedPartition;

/// Quotient `H` on the block indices together with the induced block graphs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub h: Hypergraph3,
    pub parts: Vec<Hypergraph3>,
}

fn owners(g: &Hypergraph3, p: &OrderedPartition) -> Result<Vec<usize>> {
    p.block_index(g.n())
        .ok_or_else(|| Error::NotPartition(format!("{:?} on {} vertices", p.blocks, g.n())))
}

/// The quotient graph on block indices, or `None` if some edge meets a block
/// in exactly two vertices.
pub fn quotient(g: &Hypergraph3, p: &OrderedPartition) -> Result<Option<Hypergraph3>> {
    let owner = owners(g, p)?;
    let mut edges = Vec::new();
    for e in g.edges() {
        let [a, b, c] = [owner[e[0] as usize], owner[e[1] as usize], owner[e[2] as usize]];
        let distinct = (a != b) as u8 + (b != c) as u8 + (a != c) as u8;
        match distinct {
            3 => edges.push([a as u32, b as u32, c as u32]),
            0 => {}
            _ => return Ok(None),
        }
    }
    Ok(Some(Hypergraph3::from_triples_unchecked(p.len(), edges)))
}

/// Decomposes `g` along `p`. In strict mode some block must have at least two
/// vertices; otherwise any partition into at least two blocks is accepted.
pub fn decompose(g: &Hypergraph3, p: &OrderedPartition, strict: bool) -> Result<Option<Decomposition>> {
    owners(g, p)?;
    if p.len() < 2 {
        return Err(Error::InvalidParam(format!("decomposition needs at least 2 blocks, got {}", p.len())));
    }
    if strict && p.blocks.iter().all(|b| b.len() < 2) {
        return Err(Error::InvalidParam("strict decomposition needs a block with at least 2 vertices".into()));
    }
    let Some(h) = quotient(g, p)? else {
        return Ok(None);
    };
    let parts = p.blocks.iter().map(|b| g.induced(b)).collect::<Result<Vec<_>>>()?;
    Ok(Some(Decomposition { h, parts }))
}

/// All partitions of `V(g)` into at least two blocks, none of which any edge
/// meets in exactly two vertices. Blocks are listed by their least vertex.
pub fn closed_partitions(g: &Hypergraph3, cap: usize) -> Result<Vec<OrderedPartition>> {
    let mut out = Vec::new();
    for_each_closed_partition(g, cap, |blocks| {
        out.push(OrderedPartition::new(blocks.iter().map(|&b| mask_to_set(b)).collect()));
        ControlFlow::<()>::Continue(())
    })?;
    Ok(out)
}

/// Visits closed partitions (as block masks) until `visit` breaks.
pub(crate) fn for_each_closed_partition<B>(
    g: &Hypergraph3,
    cap: usize,
    mut visit: impl FnMut(&[u64]) -> ControlFlow<B>,
) -> Result<Option<B>> {
    let n = g.n();
    require_cap(n, cap, "closed partition enumeration")?;
    if n < 2 {
        return Ok(None);
    }
    let masks: Vec<u64> = g.edges().iter().map(|e| triple_mask(*e)).collect();
    let mut by_min: Vec<Vec<u64>> = vec![Vec::new(); n];
    for c in closed_masks(&masks, n) {
        let k = c.count_ones() as usize;
        if k >= 1 && k < n {
            by_min[c.trailing_zeros() as usize].push(c);
        }
    }
    for list in by_min.iter_mut() {
        list.sort_unstable_by_key(|&c| (c.count_ones(), crate::hypergraph::mask_to_set(c)));
    }
    let full = crate::hypergraph::full_mask(n);
    let mut blocks = Vec::new();
    Ok(rec(&by_min, full, 0, &mut blocks, &mut visit))
}

fn rec<B>(
    by_min: &[Vec<u64>],
    full: u64,
    covered: u64,
    blocks: &mut Vec<u64>,
    visit: &mut impl FnMut(&[u64]) -> ControlFlow<B>,
) -> Option<B> {
    if covered == full {
        return match visit(blocks) {
            ControlFlow::Break(b) => Some(b),
            ControlFlow::Continue(()) => None,
        };
    }
    let v = (!covered & full).trailing_zeros() as usize;
    for &c in &by_min[v] {
        if c & covered != 0 {
            continue;
        }
        blocks.push(c);
        let r = rec(by_min, full, covered | c, blocks, visit);
        blocks.pop();
        if r.is_some() {
            return r;
        }
    }
    None
}

//! Lazily evaluated edge colorings of complete 3-graphs, the binary toolkit
//! they are built from, and exhaustive searches for monochromatic copies.
//!
//! Every coloring implements [`Oracle`]: vertices are `u64` values in
//! `0..domain_size()`, triples are passed ascending, and each color has a
//! dense id in `0..color_count()` that [`Oracle::label`] turns into a
//! [`ColorLabel`].

mod address;
mod audit;
mod mono;
mod product;
mod random;
mod stepping;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use address::{build_oracle, OracleSpec};
pub use audit::{audit_coloring, AuditReport, PatternFinding, Predicate};
pub use mono::{find_mono_copy, find_mono_copy_with_budget, pattern_automorphisms, MonoCopy, DEFAULT_SEARCH_BUDGET};
pub use product::{coord_partition, Product};
pub use random::{random_tripartite_coloring, Rainbow, RandomTripartite, TripartiteDraw, RAINBOW_MAX_N};
pub use stepping::{bit, delta, phi_q, PhiQ};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ColorLabel {
    /// Stepping-up color: `t = δ(δ(x,y), δ(y,z))`, `s = [δ(x,y) > δ(y,z)]`.
    Pair { t: u32, s: u8 },
    /// Product color from the first coordinate `j` (1-based) where the three
    /// vectors differ, when two of them agree there.
    Coord { j: u32, s: u8 },
    /// Product color inherited from the base coloring.
    Base { c: Box<ColorLabel> },
    /// Plain numbered color, starting at 1.
    Index { i: u64 },
}

impl fmt::Display for ColorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColorLabel::Pair { t, s } => write!(f, "({t},{s})"),
            ColorLabel::Coord { j, s } => write!(f, "coord({j},{s})"),
            ColorLabel::Base { c } => write!(f, "base({c})"),
            ColorLabel::Index { i } => write!(f, "{i}"),
        }
    }
}

/// A total, pure coloring of the triples of `0..domain_size()`.
pub trait Oracle: Send + Sync {
    /// Address string that rebuilds this oracle, e.g. `phi-q:q=6`.
    fn name(&self) -> String;
    fn domain_size(&self) -> u128;
    fn color_count(&self) -> u64;
    /// Dense color id of an ascending in-domain triple. Inputs are not checked.
    fn color_id(&self, t: [u64; 3]) -> u32;
    fn label(&self, id: u32) -> ColorLabel;

    /// Checked evaluation.
    fn eval(&self, t: [u64; 3]) -> Result<ColorLabel> {
        check_triple(t, self.domain_size())?;
        Ok(self.label(self.color_id(t)))
    }
}

pub(crate) fn check_triple(t: [u64; 3], domain: u128) -> Result<()> {
    if !(t[0] < t[1] && t[1] < t[2]) {
        return Err(Error::Domain(format!("triple ({}, {}, {}) is not strictly ascending", t[0], t[1], t[2])));
    }
    if t[2] as u128 >= domain {
        return Err(Error::Domain(format!("vertex {} outside the domain of size {domain}", t[2])));
    }
    Ok(())
}

/// Checks that `window` lies inside the oracle's domain.
pub(crate) fn check_window(oracle: &dyn Oracle, window: &std::ops::Range<u64>) -> Result<()> {
    if window.start > window.end || window.end as u128 > oracle.domain_size() {
        return Err(Error::Domain(format!(
            "window {}..{} is not inside the domain of size {}",
            window.start,
            window.end,
            oracle.domain_size()
        )));
    }
    Ok(())
}

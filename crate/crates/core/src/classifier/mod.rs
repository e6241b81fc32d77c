//! Minimal level in the collapse hierarchy, membership in the
//! forward-colorable closure, the regime verdict, and certificate checking.
//!
//! Levels follow the fixed-point definition: `U_0` is the tripartite graphs,
//! `U_1` starts from those with an exact transversal, and for `k >= 1`
//! `G ∈ U_k` iff `G ∈ U_{k-1}`, or `k = 1` and `G` has an exact transversal,
//! or some collapsible `U` reduces `G` to `(H, G[U])` with `H ∈ U_{k-1}` and
//! `G[U] ∈ U_k`. Unrolling gives
//!
//! ```text
//! ℓ(G) = 0                                if G is tripartite
//!      = 1                                else if G has an exact transversal
//!      = min_U max(ℓ(H) + 1, ℓ(G[U]))     over collapsible U with both finite
//!      = ∞                                if no such U exists
//! ```
//!
//! A collapse can land at level 1 (quotient tripartite, part in `U_1`);
//! the chain `G_1 = Star(4)`, `G_{i+1} = x + A + B` needs this to sit at
//! level `i`.
//!
//! The recursion terminates because `v(H), v(G[U]) < v(G)`. Isolated vertices
//! change no level, so values are memoized on the canonical key of the graph
//! with its isolated vertices removed.

mod certificate;
mod check;
mod search;

use std::collections::HashMap;
use std::sync::OnceLock;

use parking_lot::Mutex;
use serde::{Deserialize, Serialize};

use crate::canon::CanonicalKey;
use crate::error::Result;
use crate::hypergraph::Hypergraph3;

pub use certificate::{Bound, CertNode, Certificate, Ell, ExhaustEntry, L1Entry, L1Reason, Lemma, Side};
pub use check::{check_l1, check_verdict, CheckError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Config {
    /// Largest vertex count (after removing isolated vertices) accepted.
    pub max_n: usize,
    /// Search nodes allowed per top-level query.
    pub budget: u64,
    /// Largest vertex count for forward-closure queries.
    pub l1_cap: usize,
    /// Require a block of size at least two in forward-closure decompositions.
    pub strict_l1: bool,
}

pub const DEFAULT_BUDGET: u64 = 10_000_000;

impl Default for Config {
    fn default() -> Self {
        Config { max_n: 24, budget: DEFAULT_BUDGET, l1_cap: 12, strict_l1: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    Polynomial,
    SingleExpZone,
    DoubleExp,
}

impl Regime {
    pub fn of(ell: Ell) -> Regime {
        match ell {
            Ell::Finite(0) => Regime::Polynomial,
            Ell::Finite(_) => Regime::SingleExpZone,
            Ell::Infinite => Regime::DoubleExp,
        }
    }
}

/// Inputs outside the "at least two edges" setting of the regime theorem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Degeneracy {
    Edgeless,
    SingleEdge,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub regime: Regime,
    pub min_ell: Ell,
    /// Proves `G ∈ U_{min_ell}`, or `G ∉ U` when `min_ell` is infinite.
    pub certificate: Certificate,
    /// Proves `G ∉ U_{min_ell - 1}` when `min_ell >= 1` is finite.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_bound: Option<Certificate>,
    pub bounds_note: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degenerate: Option<Degeneracy>,
}

impl Verdict {
    /// Upper bound on `r(G;q)` in the notation of the regime.
    pub fn bound(&self) -> String {
        match self.min_ell {
            Ell::Finite(0) => "q^{Θ(1)}".into(),
            Ell::Finite(1) => "2^{O(q log q)}".into(),
            Ell::Finite(k) => format!("2^{{O(q^{k} log q)}}"),
            Ell::Infinite => "2^{2^{O(q log q)}}".into(),
        }
    }

    /// One-line summary such as `regime=SingleExpZone min_ell=2 bound=2^{O(q^2 log q)}`.
    pub fn summary(&self) -> String {
        let mut s = format!("regime={:?} min_ell={} bound={}", self.regime, self.min_ell, self.bound());
        if let Some(d) = self.degenerate {
            s.push_str(match d {
                Degeneracy::Edgeless => " degenerate=edgeless",
                Degeneracy::SingleEdge => " degenerate=single_edge",
            });
        }
        s
    }
}

pub(crate) fn bounds_note(ell: Ell, g: &Hypergraph3) -> String {
    match g.edge_count() {
        0 => return format!("no Ramsey growth: r(G;q) = v(G) = {} for every q", g.n()),
        1 => return format!("fewer than two edges: r(G;q) = v(G) = {} for every q", g.n()),
        _ => {}
    }
    match ell {
        Ell::Finite(0) => "tripartite: r(G;q) = q^{Θ(1)}".into(),
        Ell::Finite(1) => "2^{Ω(q)} <= r(G;q) <= 2^{O(q log q)}".into(),
        Ell::Finite(k) => format!("2^{{Ω(q)}} <= r(G;q) <= 2^{{O(q^{k} log q)}}"),
        Ell::Infinite => "2^{2^{q/2}} <= r(G;q) <= 2^{2^{O(q log q)}}".into(),
    }
}

/// Outcome of a forward-closure query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct L1Verdict {
    pub member: bool,
    pub certificate: Certificate,
}

/// Holds the configuration and the memo tables, which persist across queries.
pub struct Classifier {
    config: Config,
    levels: Mutex<HashMap<CanonicalKey, Ell>>,
    l1: Mutex<HashMap<CanonicalKey, bool>>,
}

impl Classifier {
    pub fn new(config: Config) -> Self {
        Classifier { config, levels: Mutex::new(HashMap::new()), l1: Mutex::new(HashMap::new()) }
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    /// `(ℓ(G), certificate)`; the certificate proves membership at level
    /// `ℓ(G)`, or non-membership in every level.
    pub fn min_level(&self, g: &Hypergraph3) -> Result<(Ell, Certificate)> {
        let mut run = self.run();
        let ell = run.level_top(g)?;
        let cert = match ell {
            Ell::Finite(k) => run.member_cert(g, k)?,
            Ell::Infinite => run.exclusion_top(g, Bound::Unbounded)?,
        };
        Ok((ell, cert))
    }

    /// Just the level, without building a certificate.
    pub fn level(&self, g: &Hypergraph3) -> Result<Ell> {
        self.run().level_top(g)
    }

    pub fn classify(&self, g: &Hypergraph3) -> Result<Verdict> {
        let (min_ell, certificate) = self.min_level(g)?;
        let lower_bound = match min_ell {
            Ell::Finite(k) if k >= 1 => Some(self.run().exclusion_top(g, Bound::Level(k - 1))?),
            _ => None,
        };
        let degenerate = match g.edge_count() {
            0 => Some(Degeneracy::Edgeless),
            1 => Some(Degeneracy::SingleEdge),
            _ => None,
        };
        Ok(Verdict {
            regime: Regime::of(min_ell),
            min_ell,
            certificate,
            lower_bound,
            bounds_note: bounds_note(min_ell, g),
            degenerate,
        })
    }

    /// Forward-closure membership without a certificate.
    pub fn is_l1(&self, g: &Hypergraph3) -> Result<bool> {
        self.run().l1_top(g)
    }

    pub fn l1_member(&self, g: &Hypergraph3) -> Result<L1Verdict> {
        let mut run = self.run();
        let member = run.l1_top(g)?;
        let certificate = run.l1_cert(g)?;
        Ok(L1Verdict { member, certificate })
    }
}

fn default_classifier() -> &'static Classifier {
    static DEFAULT: OnceLock<Classifier> = OnceLock::new();
    DEFAULT.get_or_init(|| Classifier::new(Config::default()))
}

/// Minimal level with a certificate, using the shared default classifier.
pub fn min_level(g: &Hypergraph3) -> Result<(Ell, Certificate)> {
    default_classifier().min_level(g)
}

pub fn classify(g: &Hypergraph3) -> Result<Verdict> {
    default_classifier().classify(g)
}

pub fn l1_member(g: &Hypergraph3) -> Result<L1Verdict> {
    default_classifier().l1_member(g)
}

/// Re-validates a verdict from the definitions; see [`check_verdict`] for
/// the failing path.
pub fn check_certificate(g: &Hypergraph3, claimed: &Verdict) -> bool {
    check_verdict(g, claimed).is_ok()
}

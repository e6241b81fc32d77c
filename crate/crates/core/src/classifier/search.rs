use std::collections::HashMap;
use std::ops::ControlFlow;

use crate::analysis::{
    closed_partition_visitor, collapse, collapsible_sets_with_cap, exact_transversal_with_cap,
    forward_colorable_with_cap, is_tripartite_with_cap, quotient, strip_isolated, OrderedPartition,
};
use crate::canon::{canonical_form, canonical_key, CanonicalKey};
use crate::error::{Error, Result};
use crate::hypergraph::{mask_to_set, require_cap, Hypergraph3};

use super::certificate::{Bound, Certificate, Ell, ExhaustEntry, L1Entry, L1Reason, Lemma, Side};
use super::Classifier;

/// One top-level query: shares the classifier's memo tables and counts
/// search nodes against the budget.
pub(super) struct Run<'a> {
    c: &'a Classifier,
    nodes: u64,
    lemmas: Vec<Lemma>,
    lemma_ids: HashMap<(CanonicalKey, Bound), usize>,
}

impl Classifier {
    pub(super) fn run(&self) -> Run<'_> {
        Run { c: self, nodes: 0, lemmas: Vec::new(), lemma_ids: HashMap::new() }
    }
}

impl Run<'_> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.c.config.budget {
            return Err(Error::BudgetExceeded { what: "classification", budget: self.c.config.budget });
        }
        Ok(())
    }

    fn cap(&self) -> usize {
        self.c.config.max_n
    }

    pub(super) fn level_top(&mut self, g: &Hypergraph3) -> Result<Ell> {
        let s = strip_isolated(g);
        require_cap(s.graph.n(), self.cap(), "classification")?;
        self.level(&s.graph)
    }

    /// `ℓ` of a graph without isolated vertices.
    fn level_stripped(&mut self, g: &Hypergraph3) -> Result<Ell> {
        let key = canonical_key(g);
        if let Some(&ell) = self.c.levels.lock().get(&key) {
            return Ok(ell);
        }
        self.tick()?;
        let cap = self.cap();
        let ell = if is_tripartite_with_cap(g, cap)?.is_some() {
            Ell::Finite(0)
        } else if exact_transversal_with_cap(g, cap)?.is_some() {
            Ell::Finite(1)
        } else {
            let mut best = Ell::Infinite;
            for u in collapsible_sets_with_cap(g, cap)? {
                let c = collapse(g, &u)?;
                let Ell::Finite(lh) = self.level(&c.h)? else { continue };
                let floor = lh + 1;
                if Ell::Finite(floor) >= best {
                    continue;
                }
                let Ell::Finite(lf) = self.level(&c.f)? else { continue };
                best = best.min(Ell::Finite(floor.max(lf)));
                if best == Ell::Finite(1) {
                    break;
                }
            }
            best
        };
        self.c.levels.lock().insert(key, ell);
        Ok(ell)
    }

    fn level(&mut self, g: &Hypergraph3) -> Result<Ell> {
        let s = strip_isolated(g);
        self.level_stripped(&s.graph)
    }

    /// Proof that `g ∈ U_k`; requires `ℓ(g) <= k`.
    pub(super) fn member_cert(&mut self, g: &Hypergraph3, k: u32) -> Result<Certificate> {
        let s = strip_isolated(g);
        if !s.isolated.is_empty() {
            let child = self.member_cert(&s.graph, k)?;
            return Ok(Certificate::Strip { isolated: s.isolated, child: Box::new(child) });
        }
        let cap = self.cap();
        if let Some(p) = is_tripartite_with_cap(g, cap)? {
            return Ok(Certificate::Tripartite(p));
        }
        if let Some(w) = exact_transversal_with_cap(g, cap)? {
            return Ok(Certificate::Transversal(w));
        }
        let Ell::Finite(ell) = self.level(g)? else {
            unreachable!("member_cert called on a graph outside every level")
        };
        debug_assert!(ell <= k && ell >= 1);
        for u in collapsible_sets_with_cap(g, cap)? {
            let c = collapse(g, &u)?;
            if self.level(&c.h)? <= Ell::Finite(ell - 1) && self.level(&c.f)? <= Ell::Finite(ell) {
                let h = self.member_cert(&c.h, k - 1)?;
                let f = self.member_cert(&c.f, k)?;
                return Ok(Certificate::Collapse { set: u, level: k, h: Box::new(h), f: Box::new(f) });
            }
        }
        unreachable!("a collapse realizing the computed level exists")
    }

    /// Proof that `g ∉ U_k` (or `g ∉ U`); requires that to hold. Sub-proofs
    /// for isomorphic graphs are shared through lemmas.
    pub(super) fn exclusion_top(&mut self, g: &Hypergraph3, below: Bound) -> Result<Certificate> {
        self.lemmas.clear();
        self.lemma_ids.clear();
        let root = self.exclusion(g, below, false)?;
        if self.lemmas.is_empty() {
            return Ok(root);
        }
        Ok(Certificate::Shared { lemmas: std::mem::take(&mut self.lemmas), root: Box::new(root) })
    }

    fn exclusion(&mut self, g: &Hypergraph3, below: Bound, share: bool) -> Result<Certificate> {
        let s = strip_isolated(g);
        if !s.isolated.is_empty() {
            let child = self.exclusion(&s.graph, below, share)?;
            return Ok(Certificate::Strip { isolated: s.isolated, child: Box::new(child) });
        }
        if below == Bound::Level(0) {
            return Ok(Certificate::Exhausted { below, record: Vec::new() });
        }
        if !share {
            return self.exhaust(g, below);
        }
        let canon = canonical_form(g);
        let key = canon.key();
        if let Some(&index) = [Bound::Unbounded, below].iter().find_map(|&b| self.lemma_ids.get(&(key.clone(), b))) {
            return Ok(Certificate::Lemma { index, map: canon.labeling });
        }
        let cert = self.exhaust(&canon.graph, below)?;
        if matches!(&cert, Certificate::Exhausted { record, .. } if record.is_empty()) {
            return Ok(cert);
        }
        let index = self.lemmas.len();
        self.lemmas.push(Lemma { graph: canon.graph, certificate: cert });
        self.lemma_ids.insert((key, below), index);
        Ok(Certificate::Lemma { index, map: canon.labeling })
    }

    /// The exhaustion record of a graph without isolated vertices, `below >= 1`.
    fn exhaust(&mut self, g: &Hypergraph3, below: Bound) -> Result<Certificate> {
        let k = match below {
            Bound::Level(k) => Some(k),
            Bound::Unbounded => None,
        };
        let mut record = Vec::new();
        for u in collapsible_sets_with_cap(g, self.cap())? {
            let c = collapse(g, &u)?;
            let lh = self.level(&c.h)?;
            let (side, proof) = match k {
                Some(k) if lh > Ell::Finite(k - 1) => (Side::H, self.exclusion(&c.h, Bound::Level(k - 1), true)?),
                None if lh == Ell::Infinite => (Side::H, self.exclusion(&c.h, Bound::Unbounded, true)?),
                _ => (Side::F, self.exclusion(&c.f, below, true)?),
            };
            record.push(ExhaustEntry { set: u, side, proof });
        }
        Ok(Certificate::Exhausted { below, record })
    }

    pub(super) fn l1_top(&mut self, g: &Hypergraph3) -> Result<bool> {
        require_cap(g.n(), self.c.config.l1_cap, "forward-closure membership")?;
        self.l1(g)
    }

    fn l1(&mut self, g: &Hypergraph3) -> Result<bool> {
        let key = canonical_key(g);
        if let Some(&m) = self.c.l1.lock().get(&key) {
            return Ok(m);
        }
        self.tick()?;
        let member = forward_colorable_with_cap(g, self.c.config.l1_cap)?.is_some() || self.l1_partition(g)?.is_some();
        self.c.l1.lock().insert(key, member);
        Ok(member)
    }

    /// First admissible partition with a tripartite quotient and all blocks
    /// in the family, with the quotient's tripartition.
    fn l1_partition(&mut self, g: &Hypergraph3) -> Result<Option<(OrderedPartition, Certificate)>> {
        let strict = self.c.config.strict_l1;
        let found = closed_partition_visitor(g, self.c.config.l1_cap, |blocks| {
            if strict && blocks.iter().all(|b| b.count_ones() < 2) {
                return ControlFlow::Continue(());
            }
            let p = OrderedPartition::new(blocks.iter().map(|&b| mask_to_set(b)).collect());
            match self.l1_partition_works(g, &p) {
                Ok(Some(cert)) => ControlFlow::Break(Ok((p, cert))),
                Ok(None) => ControlFlow::Continue(()),
                Err(e) => ControlFlow::Break(Err(e)),
            }
        })?;
        found.transpose()
    }

    fn l1_partition_works(&mut self, g: &Hypergraph3, p: &OrderedPartition) -> Result<Option<Certificate>> {
        let q = quotient(g, p)?.expect("blocks are closed");
        let Some(tp) = is_tripartite_with_cap(&q, self.c.config.l1_cap)? else {
            return Ok(None);
        };
        for b in &p.blocks {
            if !self.l1(&g.induced(b)?)? {
                return Ok(None);
            }
        }
        Ok(Some(Certificate::Tripartite(tp)))
    }

    pub(super) fn l1_cert(&mut self, g: &Hypergraph3) -> Result<Certificate> {
        let cap = self.c.config.l1_cap;
        if let Some(p) = forward_colorable_with_cap(g, cap)? {
            return Ok(Certificate::Forward(p));
        }
        if let Some((partition, h)) = self.l1_partition(g)? {
            let parts = partition.blocks.iter().map(|b| self.l1_cert(&g.induced(b)?)).collect::<Result<Vec<_>>>()?;
            return Ok(Certificate::Decompose { partition, h: Box::new(h), parts });
        }
        let strict = self.c.config.strict_l1;
        let mut all = Vec::new();
        closed_partition_visitor(g, cap, |blocks| {
            if !(strict && blocks.iter().all(|b| b.count_ones() < 2)) {
                all.push(OrderedPartition::new(blocks.iter().map(|&b| mask_to_set(b)).collect()));
            }
            ControlFlow::<()>::Continue(())
        })?;
        let mut record = Vec::with_capacity(all.len());
        for partition in all {
            let q = quotient(g, &partition)?.expect("blocks are closed");
            let reason = if is_tripartite_with_cap(&q, cap)?.is_none() {
                L1Reason::Quotient
            } else {
                let mut reason = None;
                for (index, b) in partition.blocks.iter().enumerate() {
                    let part = g.induced(b)?;
                    if !self.l1(&part)? {
                        reason = Some(L1Reason::Part { index, proof: self.l1_cert(&part)? });
                        break;
                    }
                }
                reason.expect("a failing block exists when the partition does not work")
            };
            record.push(L1Entry { partition, reason });
        }
        Ok(Certificate::NotL1 { strict, record })
    }
}

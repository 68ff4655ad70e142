//! Sorting rules into axioms, theorems and underivables.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::kb::{canonical_text, cycles, dependents, Class, Graph, KnowledgeBase};
use super::{check_proof, prove, CheckError, Proof, ProveResult};
use crate::kernel::{Iep, MachParams, Program};
use crate::par;
use crate::structure::pe_integrity;

/// Which rules without an accepted proof are handed to the prover.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SearchScope {
    #[default]
    Off,
    Provisional,
    /// Every rule that is not already a theorem, axioms included.
    NonTheorems,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CandidateFault {
    #[error("no such rule")]
    UnknownRule,
    #[error("proof is for a different rule")]
    WrongTarget,
    #[error(transparent)]
    Check(#[from] CheckError),
}

#[derive(Clone, Debug, Default)]
pub struct PartitionReport {
    /// Candidate proofs that were discarded.
    pub rejected: Vec<(u32, CandidateFault)>,
    /// Rules proved by search in this pass.
    pub found: Vec<u32>,
    /// Rules whose proofs were dropped to break dependency cycles.
    pub demoted: Vec<u32>,
    /// Demoted rules proved again without their dependents.
    pub recovered: Vec<u32>,
    /// Lemma rules added to the knowledge base.
    pub lemmas: Vec<u32>,
    pub changed: bool,
}

struct Accepted {
    proofs: BTreeMap<u32, (Proof, Vec<u32>)>,
}

impl Accepted {
    fn graph(&self) -> Graph {
        self.proofs.iter().map(|(i, (_, c))| (*i, c.iter().copied().filter(|d| self.proofs.contains_key(d)).collect())).collect()
    }

    fn insert(&mut self, id: u32, pf: Proof) {
        let conn = pf.connection_list().into_iter().collect();
        self.proofs.insert(id, (pf, conn));
    }
}

/// Reclassifies every rule of `kb`.
///
/// Candidates are the current theorem proofs, then `extra`, then whatever
/// search finds. Dependency cycles are broken by dropping the proof of the
/// member with the larger current weight (ties: smaller id); that member is retried
/// without its dependents when search is on. Finally unproven rules some
/// proof uses become axioms and the rest underivable.
pub fn partition(kb: &mut KnowledgeBase, extra: BTreeMap<u32, Proof>, mach: &MachParams, scope: SearchScope) -> PartitionReport {
    let before = kb.class.clone();
    let mut report = PartitionReport::default();
    let mut acc = Accepted { proofs: BTreeMap::new() };

    let mut candidates: BTreeMap<u32, Proof> = kb
        .class
        .iter()
        .filter_map(|(i, c)| match c {
            Class::Theorem { proof, .. } => Some((*i, proof.clone())),
            _ => None,
        })
        .collect();
    candidates.extend(extra);
    for (id, pf) in candidates {
        match verify(kb, id, &pf) {
            Ok(()) => acc.insert(id, pf),
            Err(f) => report.rejected.push((id, f)),
        }
    }

    if scope != SearchScope::Off {
        let targets: Vec<u32> = kb
            .class
            .iter()
            .filter(|(i, c)| {
                !acc.proofs.contains_key(i)
                    && match scope {
                        SearchScope::Provisional => matches!(c, Class::Provisional),
                        _ => true,
                    }
            })
            .map(|(i, _)| *i)
            .collect();
        let results = par::map(mach.parallel, &targets, |id| prove(&kb.rules[id], &kb.rules, mach).ok());
        for (id, r) in targets.into_iter().zip(results) {
            if let Some(r) = r {
                let pf = adopt(kb, &mut acc, r, &mut report.lemmas);
                acc.insert(id, pf);
                report.found.push(id);
            }
        }
    }

    break_cycles(&kb.weights, &mut acc, &mut report.demoted);

    if scope != SearchScope::Off {
        for &d in &report.demoted.clone() {
            let mut excluded = dependents(&acc.graph(), d);
            excluded.insert(d);
            let rules: BTreeMap<u32, Iep> = kb.rules.iter().filter(|(i, _)| !excluded.contains(i)).map(|(i, r)| (*i, r.clone())).collect();
            if let Ok(r) = prove(&kb.rules[&d], &rules, mach) {
                let pf = adopt(kb, &mut acc, r, &mut report.lemmas);
                acc.insert(d, pf);
                report.recovered.push(d);
            }
        }
        // Lemma ids are fresh and recovered proofs avoid their dependents,
        // so this only matters if a lemma proof closed a loop.
        break_cycles(&kb.weights, &mut acc, &mut report.demoted);
    }

    let used: BTreeSet<u32> = acc.proofs.values().flat_map(|(_, c)| c.iter().copied()).collect();
    let ids: Vec<u32> = kb.rules.keys().copied().collect();
    for id in ids {
        let class = match acc.proofs.remove(&id) {
            Some((proof, connections)) => Class::Theorem { proof, connections },
            None if used.contains(&id) => Class::Axiom,
            None => Class::Underivable,
        };
        kb.class.insert(id, class);
    }
    kb.refresh_weights().expect("partition leaves an acyclic graph");
    report.changed = kb.class != before;
    report
}

fn verify(kb: &KnowledgeBase, id: u32, pf: &Proof) -> Result<(), CandidateFault> {
    let rule = kb.rules.get(&id).ok_or(CandidateFault::UnknownRule)?;
    if canonical_text(rule) != canonical_text(&pf.target) {
        return Err(CandidateFault::WrongTarget);
    }
    check_proof(pf, &kb.rules)?;
    Ok(())
}

/// Moves the lemmas of a search result into `kb` under fresh ids and
/// returns the main proof rewritten to cite them.
fn adopt(kb: &mut KnowledgeBase, acc: &mut Accepted, r: ProveResult, added: &mut Vec<u32>) -> Proof {
    let mut map: BTreeMap<u32, u32> = BTreeMap::new();
    for l in &r.lemmas {
        let known = kb.find(&l.rule);
        let id = known.unwrap_or_else(|| {
            let id = kb.next_id();
            kb.insert_as(id, l.rule.clone(), Class::Provisional);
            added.push(id);
            id
        });
        map.insert(l.rule.id, id);
    }
    let remap = |i: u32| map.get(&i).copied().unwrap_or(i);
    for l in &r.lemmas {
        let id = map[&l.rule.id];
        if !acc.proofs.contains_key(&id) {
            let mut pf = l.proof.map_rules(remap);
            pf.target = pf.target.with_id(id);
            acc.insert(id, pf);
        }
    }
    r.proof.map_rules(remap)
}

fn break_cycles(weights: &BTreeMap<u32, u64>, acc: &mut Accepted, demoted: &mut Vec<u32>) {
    loop {
        let g = acc.graph();
        let cyc = cycles(&g);
        if cyc.is_empty() {
            return;
        }
        for comp in cyc {
            // Current weights decide; for rules new to the base, count the
            // dependents left once the component's internal edges are cut.
            let inside: BTreeSet<u32> = comp.iter().copied().collect();
            let cut: Graph = g
                .iter()
                .map(|(t, cs)| {
                    let keep = cs.iter().copied().filter(|c| !(inside.contains(t) && inside.contains(c))).collect();
                    (*t, keep)
                })
                .collect();
            let pick = comp
                .iter()
                .copied()
                .max_by_key(|m| (weights.get(m).copied().unwrap_or(0), dependents(&cut, *m).len(), std::cmp::Reverse(*m)))
                .expect("components are nonempty");
            acc.proofs.remove(&pick);
            demoted.push(pick);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reduction {
    /// No proper sub-program was shown to suffice within the bounds.
    Unreduced,
    /// The conclusion already follows from the kept premise rows.
    Reducible { kept: Vec<usize>, proof: Proof },
}

/// Tries to prove the conclusion of `c` from proper sub-programs of its
/// premise, largest first. `rules` should not contain `c` itself.
pub fn reduce_premise(c: &Iep, rules: &BTreeMap<u32, Iep>, mach: &MachParams) -> Reduction {
    let n = c.premise.len();
    if n == 0 || n > 16 {
        return Reduction::Unreduced;
    }
    let mut masks: Vec<u32> = (0..(1u32 << n) - 1).collect();
    masks.sort_by_key(|m| (std::cmp::Reverse(m.count_ones()), std::cmp::Reverse(*m)));
    for m in masks {
        let kept: Vec<usize> = (0..n).filter(|i| m & (1 << i) != 0).collect();
        let rows = kept.iter().map(|&i| c.premise.rows[i].clone()).collect();
        let sub = Iep { id: 0, premise: Program::new(rows), conclusion: c.conclusion.clone() };
        if pe_integrity(&sub, mach).is_err() {
            continue;
        }
        if let Ok(r) = prove(&sub, rules, mach) {
            return Reduction::Reducible { kept, proof: r.proof };
        }
    }
    Reduction::Unreduced
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{shipped, Kind};
    use crate::kernel::parse_rule_text;

    fn axioms() -> BTreeMap<u32, Iep> {
        shipped().entries.into_iter().filter(|e| e.kind == Kind::Axiom).map(|e| (e.id, e.rule)).collect()
    }

    #[test]
    fn superfluous_premise_rows_are_found() {
        let ep = parse_rule_text("eqn [a b] []\ntypen [c] []\n-----\neqn [b a] []").unwrap();
        let Reduction::Reducible { kept, proof } = reduce_premise(&ep, &axioms(), &MachParams::default()) else { panic!("not reduced") };
        assert_eq!(kept, vec![0]);
        assert_eq!(proof.target.premise.len(), 1);
    }

    #[test]
    fn irreducible_rules_are_unchanged() {
        let m = MachParams::default();
        let nat2a = parse_rule_text("add [a b] [c]\n-----\nadd [b a] [d]").unwrap();
        assert_eq!(reduce_premise(&nat2a, &axioms(), &m), Reduction::Unreduced);
        let bare = parse_rule_text("-----\nlt [0 1] []").unwrap();
        assert_eq!(reduce_premise(&bare, &axioms(), &m), Reduction::Unreduced);
    }

    #[test]
    fn unused_unproven_rules_are_underivable() {
        let mut kb = KnowledgeBase::new();
        kb.insert(parse_rule_text("add [a b] [c]\n-----\nadd [b a] [d]").unwrap());
        let r = partition(&mut kb, BTreeMap::new(), &MachParams::default(), SearchScope::Provisional);
        assert!(r.found.is_empty());
        assert_eq!(kb.class[&1], Class::Underivable);
        assert_eq!(kb.weights[&1], 0);
    }

    #[test]
    fn search_adopts_found_proofs() {
        let mut kb = KnowledgeBase::new();
        let refl = kb.insert(parse_rule_text("typen [a] []\n-----\neqn [a a] []").unwrap());
        let sym = kb.insert(parse_rule_text("eqn [a b] []\n-----\neqn [b a] []").unwrap());
        let r = partition(&mut kb, BTreeMap::new(), &MachParams::default(), SearchScope::Provisional);
        assert!(r.changed);
        assert_eq!(r.found, vec![sym]);
        assert_eq!(kb.class[&refl], Class::Axiom);
        let Class::Theorem { connections, .. } = &kb.class[&sym] else { panic!("{:?}", kb.class[&sym]) };
        assert_eq!(connections, &vec![refl]);
        assert_eq!(kb.weights[&refl], 1);
        kb.validate().unwrap();
    }
}

//! The partitioned rule list and the dependency weights over it.

use std::collections::{BTreeMap, BTreeSet};

use petgraph::algo::{tarjan_scc, toposort};
use petgraph::graphmap::DiGraphMap;
use thiserror::Error;

use super::Proof;
use crate::corpus::{Corpus, Entry, Kind, Namer, Trailer};
use crate::kernel::{render_rule_text, Iep, NameTable};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Class {
    Axiom,
    Theorem { proof: Proof, connections: Vec<u32> },
    Provisional,
    Underivable,
}

impl Class {
    pub fn kind(&self) -> Kind {
        match self {
            Class::Axiom => Kind::Axiom,
            Class::Theorem { .. } => Kind::Theorem,
            Class::Provisional => Kind::Provisional,
            Class::Underivable => Kind::Underivable,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum KbError {
    #[error("theorem {theorem} depends on unknown rule {id}")]
    UnknownReference { theorem: u32, id: u32 },
    #[error("dependency cycle through {0:?}")]
    Cycle(Vec<u32>),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum WeightMode {
    /// Number of distinct theorems whose transitive dependencies include the rule.
    #[default]
    Dependents,
    /// Number of distinct dependency paths from any theorem to the rule.
    Paths,
}

/// Dependency edges: theorem id → its connection list.
pub type Graph = BTreeMap<u32, Vec<u32>>;

#[derive(Clone, Debug, Default)]
pub struct KnowledgeBase {
    pub rules: BTreeMap<u32, Iep>,
    pub class: BTreeMap<u32, Class>,
    pub weights: BTreeMap<u32, u64>,
    names: BTreeMap<u32, Namer>,
    /// Canonical rule text → id.
    keys: BTreeMap<String, u32>,
}

impl KnowledgeBase {
    pub fn new() -> KnowledgeBase {
        KnowledgeBase::default()
    }

    /// Loads rules, classes and proofs. Weights are recomputed, not copied.
    pub fn from_corpus(c: &Corpus) -> KnowledgeBase {
        let mut kb = KnowledgeBase::new();
        for e in &c.entries {
            let class = match (&e.kind, &e.proof) {
                (Kind::Axiom, _) => Class::Axiom,
                (Kind::Underivable, _) => Class::Underivable,
                (Kind::Theorem, Some(p)) => {
                    let connections = e.connections.clone().unwrap_or_else(|| p.connection_list().into_iter().collect());
                    Class::Theorem { proof: p.clone(), connections }
                }
                _ => Class::Provisional,
            };
            kb.insert_as(e.id, e.rule.clone(), class);
            kb.names.insert(e.id, e.namer.clone());
        }
        kb.weights = compute_weights(&kb.graph(), kb.rules.keys().copied(), WeightMode::Dependents).unwrap_or_default();
        kb
    }

    pub fn next_id(&self) -> u32 {
        self.rules.keys().next_back().map_or(1, |m| m + 1)
    }

    /// Adds a provisional rule under the next free id.
    pub fn insert(&mut self, rule: Iep) -> u32 {
        let id = self.next_id();
        self.insert_as(id, rule, Class::Provisional);
        id
    }

    pub fn insert_as(&mut self, id: u32, rule: Iep, class: Class) {
        self.keys.entry(canonical_text(&rule)).or_insert(id);
        self.rules.insert(id, rule.with_id(id));
        self.class.insert(id, class);
        self.names.entry(id).or_insert_with(|| Namer::from_table(&NameTable::new()));
    }

    /// The id of a rule with the same canonical text, if any.
    pub fn find(&self, rule: &Iep) -> Option<u32> {
        self.keys.get(&canonical_text(rule)).copied()
    }

    pub fn ids(&self, kind: Kind) -> Vec<u32> {
        self.class.iter().filter(|(_, c)| c.kind() == kind).map(|(i, _)| *i).collect()
    }

    pub fn graph(&self) -> Graph {
        self.class
            .iter()
            .filter_map(|(i, c)| match c {
                Class::Theorem { connections, .. } => Some((*i, connections.clone())),
                _ => None,
            })
            .collect()
    }

    /// Connection lists reference known ids and the dependency graph is acyclic.
    pub fn validate(&self) -> Result<Vec<u32>, KbError> {
        let g = self.graph();
        for (t, cs) in &g {
            if let Some(&id) = cs.iter().find(|c| !self.rules.contains_key(c)) {
                return Err(KbError::UnknownReference { theorem: *t, id });
            }
        }
        dependency_order(&g)
    }

    pub fn refresh_weights(&mut self) -> Result<(), KbError> {
        self.weights = compute_weights(&self.graph(), self.rules.keys().copied(), WeightMode::Dependents)?;
        Ok(())
    }

    pub fn tally(&self) -> Trailer {
        let n = |k: Kind| Some(self.ids(k).len());
        Trailer { axioms: n(Kind::Axiom), provisional: n(Kind::Provisional), theorems: n(Kind::Theorem), underivable: n(Kind::Underivable) }
    }

    pub fn to_corpus(&self) -> Corpus {
        let entries = self
            .rules
            .iter()
            .map(|(id, r)| {
                let class = self.class.get(id).cloned().unwrap_or(Class::Provisional);
                let mut e = Entry::new(*id, class.kind(), r.clone());
                e.weight = Some(self.weights.get(id).copied().unwrap_or(0));
                if let Class::Theorem { proof, connections } = class {
                    e.connections = Some(connections);
                    e.proof = Some(proof);
                }
                e.namer = self.names.get(id).cloned().unwrap_or_else(|| Namer::from_table(&NameTable::new()));
                e
            })
            .collect();
        let mut c = Corpus { entries, trailer: None };
        c.trailer = Some(c.tally());
        c
    }
}

pub(crate) fn canonical_text(r: &Iep) -> String {
    render_rule_text(&r.canonical().with_id(0))
}

fn digraph(g: &Graph) -> DiGraphMap<u32, ()> {
    let mut d = DiGraphMap::new();
    let nodes: BTreeSet<u32> = g.iter().flat_map(|(k, vs)| std::iter::once(*k).chain(vs.iter().copied())).collect();
    for v in nodes {
        d.add_node(v);
    }
    for (t, cs) in g {
        for c in cs {
            d.add_edge(*t, *c, ());
        }
    }
    d
}

/// Strongly connected components, dependencies first, members sorted.
pub fn sccs(g: &Graph) -> Vec<Vec<u32>> {
    let mut out = tarjan_scc(&digraph(g));
    for c in &mut out {
        c.sort_unstable();
    }
    out
}

/// Components that contain a cycle (size > 1, or a self-loop).
pub fn cycles(g: &Graph) -> Vec<Vec<u32>> {
    sccs(g)
        .into_iter()
        .filter(|c| c.len() > 1 || g.get(&c[0]).is_some_and(|vs| vs.contains(&c[0])))
        .collect()
}

/// Dependencies before dependents.
pub fn dependency_order(g: &Graph) -> Result<Vec<u32>, KbError> {
    if let Some(c) = cycles(g).into_iter().next() {
        return Err(KbError::Cycle(c));
    }
    let mut order = toposort(&digraph(g), None).expect("no cycles");
    order.reverse();
    Ok(order)
}

/// Transitive dependencies of every node.
pub fn closures(g: &Graph) -> Result<BTreeMap<u32, BTreeSet<u32>>, KbError> {
    let mut out: BTreeMap<u32, BTreeSet<u32>> = BTreeMap::new();
    for v in dependency_order(g)? {
        let mut s = BTreeSet::new();
        for &c in g.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
            s.insert(c);
            s.extend(out.get(&c).into_iter().flatten().copied());
        }
        out.insert(v, s);
    }
    Ok(out)
}

/// Nodes that reach `target` through at least one edge.
pub fn dependents(g: &Graph, target: u32) -> BTreeSet<u32> {
    let mut rev: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for (t, cs) in g {
        for c in cs {
            rev.entry(*c).or_default().push(*t);
        }
    }
    let mut seen = BTreeSet::new();
    let mut stack = vec![target];
    while let Some(v) = stack.pop() {
        for &t in rev.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
            if seen.insert(t) {
                stack.push(t);
            }
        }
    }
    seen
}

/// Weights of `ids` over the theorem dependency graph.
pub fn compute_weights(g: &Graph, ids: impl IntoIterator<Item = u32>, mode: WeightMode) -> Result<BTreeMap<u32, u64>, KbError> {
    let mut w: BTreeMap<u32, u64> = ids.into_iter().map(|i| (i, 0)).collect();
    match mode {
        WeightMode::Dependents => {
            for deps in closures(g)?.values() {
                for d in deps {
                    *w.entry(*d).or_default() += 1;
                }
            }
        }
        WeightMode::Paths => {
            // paths(i) = Σ over edges t → i of (1 + paths(t)); dependents come last in topological order.
            let order = dependency_order(g)?;
            let mut paths: BTreeMap<u32, u64> = BTreeMap::new();
            for &t in order.iter().rev() {
                let through = 1 + paths.get(&t).copied().unwrap_or(0);
                for &c in g.get(&t).map(Vec::as_slice).unwrap_or(&[]) {
                    *paths.entry(c).or_default() += through;
                }
            }
            for (i, p) in paths {
                w.insert(i, p);
            }
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(edges: &[(u32, &[u32])]) -> Graph {
        edges.iter().map(|(t, cs)| (*t, cs.to_vec())).collect()
    }

    #[test]
    fn chain_weights_agree_across_modes() {
        let chain = g(&[(3, &[2]), (2, &[1])]);
        for mode in [WeightMode::Dependents, WeightMode::Paths] {
            let w = compute_weights(&chain, 1..=3, mode).unwrap();
            assert_eq!((w[&1], w[&2], w[&3]), (2, 1, 0));
        }
    }

    #[test]
    fn diamond_separates_modes() {
        let d = g(&[(4, &[2, 3]), (2, &[1]), (3, &[1])]);
        assert_eq!(compute_weights(&d, 1..=4, WeightMode::Dependents).unwrap()[&1], 3);
        assert_eq!(compute_weights(&d, 1..=4, WeightMode::Paths).unwrap()[&1], 4);
    }

    #[test]
    fn empty_and_single_edge() {
        assert!(compute_weights(&Graph::new(), 1..=3, WeightMode::Dependents).unwrap().values().all(|&w| w == 0));
        let one = g(&[(2, &[1])]);
        assert_eq!(compute_weights(&one, 1..=2, WeightMode::Dependents).unwrap()[&1], 1);
    }

    #[test]
    fn cycles_are_reported() {
        let c = g(&[(1, &[2]), (2, &[1]), (3, &[1])]);
        assert_eq!(cycles(&c), vec![vec![1, 2]]);
        assert_eq!(compute_weights(&c, 1..=3, WeightMode::Paths), Err(KbError::Cycle(vec![1, 2])));
        assert_eq!(cycles(&g(&[(5, &[5])])), vec![vec![5]]);
    }

    #[test]
    fn dependency_order_puts_dependencies_first() {
        let d = g(&[(4, &[2, 3]), (2, &[1]), (3, &[1])]);
        let order = dependency_order(&d).unwrap();
        let pos = |x| order.iter().position(|&v| v == x).unwrap();
        assert!(pos(1) < pos(2) && pos(2) < pos(4) && pos(3) < pos(4));
        assert_eq!(dependents(&d, 1), BTreeSet::from([2, 3, 4]));
    }
}

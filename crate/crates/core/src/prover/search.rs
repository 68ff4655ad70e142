//! Bounded forward proof search.
//!
//! Facts are saturated round by round (semi-naive: every new fact uses at
//! least one fact from the previous round) under IOT, sr1, rule application
//! and single-step disjunction splits. Output labels are fresh per fact and
//! bounded in depth, so saturation terminates. When a branch of a
//! disjunction needs a multi-step refutation, a nested search refutes the
//! operand from the premise and the refutation is packaged as a falsity
//! lemma, which the outer split then applies in one step.

use std::collections::{BTreeSet, HashMap, HashSet};

use thiserror::Error;

use super::proof::{check_proof, iot_vars, match_row, sr1_inputs, CheckError, Justification, Line, Proof, RuleSource, Sigma, Step};
use crate::kernel::{Ap, Iep, Label, MachParams, Statement};

/// A falsity rule proved during search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma {
    pub rule: Iep,
    pub proof: Proof,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProveResult {
    pub proof: Proof,
    /// Lemmas the proof (transitively) applies, in id order.
    pub lemmas: Vec<Lemma>,
    pub facts: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ProveError {
    #[error("not found within bounds ({facts} statements derived)")]
    NotFound { facts: usize },
    #[error("found proof failed to check: {0}")]
    Unchecked(CheckError),
}

#[derive(Clone, Debug)]
pub struct ProveOptions {
    /// First id handed to lemmas.
    pub lemma_base: u32,
    /// Extra label-depth allowance tried in turn.
    pub slacks: Vec<u32>,
}

impl Default for ProveOptions {
    fn default() -> Self {
        ProveOptions { lemma_base: 1000, slacks: vec![0, 1, 2] }
    }
}

type Key = (Ap, [Label; 2]);

fn key(s: &Statement) -> Key {
    (s.ap, s.x)
}

#[derive(Clone, Debug)]
struct Fact {
    stmt: Statement,
    just: Justification,
    round: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Class {
    Old,
    Delta,
    All,
}

struct Pool {
    next_id: u32,
    lemmas: Vec<(u32, Lemma)>,
    /// Refutation attempts by assumption set.
    tried: HashMap<Vec<Statement>, Option<u32>>,
    derived: usize,
}

struct Engine<'r> {
    rules: Vec<(u32, &'r Iep)>,
    lemma_rules: Vec<(u32, Iep)>,
    facts: Vec<Fact>,
    keys: HashMap<Key, usize>,
    by_ap: HashMap<Ap, Vec<usize>>,
    index: HashMap<(Ap, usize, Label), Vec<usize>>,
    depth: HashMap<Label, u32>,
    max_depth: u32,
    next_label: u32,
    premise_len: usize,
    goal: Statement,
    found: Option<usize>,
    focus: HashSet<Label>,
    max_facts: usize,
    max_rounds: usize,
    split_depth: usize,
    mach: &'r MachParams,
}

struct BranchResults {
    refuted: Option<Step>,
    derived: Vec<(Statement, Step)>,
}

fn bit(ap: Ap) -> u16 {
    1 << ap as u16
}

fn premise_mask(rule: &Iep) -> u16 {
    rule.premise.rows.iter().fold(0, |m, s| m | bit(s.ap))
}

fn depth_of(depth: &HashMap<Label, u32>, l: Label) -> u32 {
    depth.get(&l).copied().unwrap_or(0)
}

/// Label depths over a program: primary inputs 0, outputs one more than
/// their deepest input.
fn label_depths(rows: &[Statement]) -> HashMap<Label, u32> {
    let mut d = HashMap::new();
    for s in rows {
        let din = s.inputs().iter().map(|&l| depth_of(&d, l)).max().unwrap_or(0);
        for &o in s.outputs() {
            d.insert(o, din + 1);
        }
    }
    d
}

impl<'r> Engine<'r> {
    fn new(
        target: &Iep,
        rules: Vec<(u32, &'r Iep)>,
        lemma_rules: Vec<(u32, Iep)>,
        slack: u32,
        split_depth: usize,
        mach: &'r MachParams,
    ) -> Engine<'r> {
        let conc = target.concatenation();
        let depth = label_depths(&target.premise.rows);
        let max_depth = label_depths(&conc.rows).values().copied().max().unwrap_or(0) + slack;
        let focus: HashSet<Label> = if target.conclusion.is_false() {
            target.premise.rows.last().map(|s| s.inputs().iter().copied().filter(|l| l.is_var()).collect()).unwrap_or_default()
        } else {
            target.conclusion.inputs().iter().copied().filter(|l| l.is_var()).collect()
        };
        let mut e = Engine {
            rules,
            lemma_rules,
            facts: Vec::new(),
            keys: HashMap::new(),
            by_ap: HashMap::new(),
            index: HashMap::new(),
            depth,
            max_depth,
            next_label: target.max_var().max(mach.nvar) + 1,
            premise_len: target.premise.len(),
            goal: target.conclusion,
            found: None,
            focus,
            max_facts: mach.max_derived_statements,
            max_rounds: mach.max_proof_depth,
            split_depth,
            mach,
        };
        for s in &target.premise.rows {
            let id = e.facts.len();
            e.facts.push(Fact { stmt: *s, just: Justification::Premise, round: 0 });
            e.register(id);
        }
        e
    }

    fn register(&mut self, id: usize) {
        let s = self.facts[id].stmt;
        self.keys.entry(key(&s)).or_insert(id);
        self.by_ap.entry(s.ap).or_default().push(id);
        for (j, l) in s.x.iter().chain(s.y.iter()).enumerate() {
            if !l.is_null() {
                self.index.entry((s.ap, j, *l)).or_default().push(id);
            }
        }
        if self.found.is_none() && s.same_shape(&self.goal) && id + 1 >= self.premise_len {
            self.found = Some(id);
        }
    }

    fn derived(&self) -> usize {
        self.facts.len() - self.premise_len
    }

    /// Inserts a candidate unless its shape is known or its outputs would be
    /// too deep. Outputs of `s` are replaced by fresh labels.
    fn insert(&mut self, mut s: Statement, just: Justification, round: usize) -> bool {
        if self.keys.contains_key(&key(&s)) || self.derived() >= self.max_facts {
            return false;
        }
        if s.ap.out_arity() > 0 {
            let din = s.inputs().iter().map(|&l| depth_of(&self.depth, l)).max().unwrap_or(0);
            if din + 1 > self.max_depth {
                return false;
            }
            for i in 0..s.ap.out_arity() {
                let l = Label::Var(self.next_label);
                self.next_label += 1;
                self.depth.insert(l, din + 1);
                s.y[i] = l;
            }
        }
        let id = self.facts.len();
        self.facts.push(Fact { stmt: s, just, round });
        self.register(id);
        true
    }

    fn in_class(&self, id: usize, class: Class, round: usize) -> bool {
        let r = self.facts[id].round;
        match class {
            Class::Old => r + 1 < round,
            Class::Delta => r + 1 == round,
            Class::All => r < round,
        }
    }

    fn candidates(&self, pat: &Statement, sigma: &Sigma) -> &[usize] {
        let mut best: Option<&[usize]> = None;
        for (j, l) in pat.x.iter().chain(pat.y.iter()).enumerate() {
            let bound = match l {
                Label::Var(v) => sigma.get(v).copied(),
                Label::Null => None,
                c => Some(*c),
            };
            if let Some(b) = bound {
                let list = self.index.get(&(pat.ap, j, b)).map(Vec::as_slice).unwrap_or(&[]);
                if best.is_none_or(|x| list.len() < x.len()) {
                    best = Some(list);
                }
            }
        }
        best.unwrap_or_else(|| self.by_ap.get(&pat.ap).map(Vec::as_slice).unwrap_or(&[]))
    }

    /// Backtracking join of `pats` against facts. Row `pin.0` matches the
    /// virtual statement `pin.1` (recorded as fact `pin.2`); `skip` is never
    /// matched by other rows.
    #[allow(clippy::too_many_arguments)]
    fn join(
        &self,
        pats: &[Statement],
        classes: &[Class],
        round: usize,
        pin: Option<(usize, Statement, usize)>,
        i: usize,
        sigma: &mut Sigma,
        chosen: &mut Vec<usize>,
        out: &mut dyn FnMut(&Sigma, &[usize]),
    ) {
        if i == pats.len() {
            out(sigma, chosen);
            return;
        }
        if let Some((q, s, id)) = pin {
            if q == i {
                let mut sg = sigma.clone();
                if match_row(&mut sg, &pats[i], &s) {
                    chosen.push(id);
                    self.join(pats, classes, round, pin, i + 1, &mut sg, chosen, out);
                    chosen.pop();
                }
                return;
            }
        }
        let skip = pin.map(|p| p.2);
        for &id in self.candidates(&pats[i], sigma) {
            if Some(id) == skip || !self.in_class(id, classes[i], round) {
                continue;
            }
            let mut sg = sigma.clone();
            if match_row(&mut sg, &pats[i], &self.facts[id].stmt) {
                chosen.push(id);
                self.join(pats, classes, round, pin, i + 1, &mut sg, chosen, out);
                chosen.pop();
            }
        }
    }

    fn all_rules(&self) -> impl Iterator<Item = (u32, &Iep)> + '_ {
        self.rules.iter().map(|(i, r)| (*i, *r)).chain(self.lemma_rules.iter().map(|(i, r)| (*i, r)))
    }

    /// Names with at least one fact, of any round.
    fn present(&self) -> u16 {
        self.by_ap.iter().filter(|(_, v)| !v.is_empty()).fold(0, |m, (a, _)| m | bit(*a))
    }

    fn conclude(rule: &Iep, sigma: &Sigma) -> Statement {
        super::proof::instantiate(rule, sigma, &mut || Label::Null)
    }

    /// One semi-naive round; returns candidate facts in deterministic order.
    fn round_candidates(&self, round: usize) -> Vec<(Statement, Justification)> {
        let mut out: Vec<(Statement, Justification)> = Vec::new();
        let delta: Vec<usize> = (0..self.facts.len()).filter(|&i| self.in_class(i, Class::Delta, round)).collect();
        let have = self.present();
        let fresh = delta.iter().fold(0, |m, &d| m | bit(self.facts[d].stmt.ap));
        // Rule applications, pivoting on the first row bound to a delta fact.
        for (rid, rule) in self.all_rules() {
            let pats = &rule.premise.rows;
            if pats.is_empty() {
                if round == 1 {
                    out.push((Self::conclude(rule, &Sigma::new()), Justification::Step(Step::Iep { rule: rid, refs: vec![] })));
                }
                continue;
            }
            if premise_mask(rule) & !have != 0 {
                continue;
            }
            for p in 0..pats.len() {
                if bit(pats[p].ap) & fresh == 0 {
                    continue;
                }
                let classes: Vec<Class> =
                    (0..pats.len()).map(|i| if i < p { Class::Old } else if i == p { Class::Delta } else { Class::All }).collect();
                self.join(pats, &classes, round, None, 0, &mut Sigma::new(), &mut Vec::new(), &mut |sg, ch| {
                    out.push((Self::conclude(rule, sg), Justification::Step(Step::Iep { rule: rid, refs: ch.to_vec() })));
                });
            }
        }
        for &d in &delta {
            let s = self.facts[d].stmt;
            for v in iot_vars(&s) {
                out.push((Statement::new(Ap::Typen, &[v], &[]), Justification::Step(Step::Iot(d))));
            }
        }
        // sr1: delta equality against any target, and delta target against old equalities.
        let eqs: Vec<usize> = self.by_ap.get(&Ap::Eqn).cloned().unwrap_or_default();
        for &e in eqs.iter().filter(|&&e| self.in_class(e, Class::Delta, round)) {
            for t in 0..self.facts.len() {
                if self.in_class(t, Class::All, round) {
                    self.push_sr1(t, e, &mut out);
                }
            }
        }
        for &t in &delta {
            for &e in eqs.iter().filter(|&&e| self.in_class(e, Class::Old, round)) {
                self.push_sr1(t, e, &mut out);
            }
        }
        self.split_candidates(round, &mut out);
        out
    }

    fn push_sr1(&self, t: usize, e: usize, out: &mut Vec<(Statement, Justification)>) {
        // Rewriting an equality with itself only permutes its own sides.
        if t == e {
            return;
        }
        let (ts, es) = (self.facts[t].stmt, self.facts[e].stmt);
        for xs in sr1_inputs(&ts, &es) {
            let mut s = ts;
            s.x = xs;
            out.push((s, Justification::Step(Step::Sr1 { target: t, eq: e })));
        }
    }

    /// Single-step consequences of assuming `op` in place of disjunction fact `d`.
    fn branch(&self, d: usize, op: Statement, round: usize) -> BranchResults {
        let mut res = BranchResults { refuted: None, derived: vec![(op, Step::Dcr2(d))] };
        let have = self.present() | bit(op.ap);
        for (rid, rule) in self.all_rules() {
            let m = premise_mask(rule);
            if m & bit(op.ap) == 0 || m & !have != 0 {
                continue;
            }
            let pats = &rule.premise.rows;
            for q in 0..pats.len() {
                if pats[q].ap != op.ap {
                    continue;
                }
                let classes = vec![Class::All; pats.len()];
                let mut local: Vec<(Statement, Step)> = Vec::new();
                self.join(pats, &classes, round, Some((q, op, d)), 0, &mut Sigma::new(), &mut Vec::new(), &mut |sg, ch| {
                    local.push((Self::conclude(rule, sg), Step::Iep { rule: rid, refs: ch.to_vec() }));
                });
                for (s, st) in local {
                    if s.is_false() {
                        res.refuted.get_or_insert(st);
                    } else {
                        res.derived.push((s, st));
                    }
                }
            }
        }
        if let Some(es) = self.by_ap.get(&Ap::Eqn) {
            for &e in es.iter().filter(|&&e| e != d && self.in_class(e, Class::All, round)) {
                for xs in sr1_inputs(&op, &self.facts[e].stmt) {
                    let mut s = op;
                    s.x = xs;
                    res.derived.push((s, Step::Sr1 { target: d, eq: e }));
                }
            }
        }
        if op.ap == Ap::Eqn {
            for t in (0..self.facts.len()).filter(|&t| t != d && self.in_class(t, Class::All, round)) {
                let ts = self.facts[t].stmt;
                for xs in sr1_inputs(&ts, &op) {
                    let mut s = ts;
                    s.x = xs;
                    res.derived.push((s, Step::Sr1 { target: t, eq: d }));
                }
            }
        }
        res
    }

    fn split_candidates(&self, round: usize, out: &mut Vec<(Statement, Justification)>) {
        for d in 0..self.facts.len() {
            let ds = self.facts[d].stmt;
            if !ds.ap.is_disjunction() || !self.in_class(d, Class::All, round) {
                continue;
            }
            let ops = ds.operands().expect("disjunction");
            let b = [self.branch(d, ops[0], round), self.branch(d, ops[1], round)];
            emit_split(&b, out);
        }
    }

    fn saturate(&mut self, first_round: usize) -> usize {
        let mut round = first_round;
        while self.found.is_none() && round < first_round + self.max_rounds && self.derived() < self.max_facts {
            let cands = self.round_candidates(round);
            let mut added = false;
            for (s, j) in cands {
                if self.insert(s, j, round) {
                    added = true;
                    if self.found.is_some() {
                        break;
                    }
                }
            }
            round += 1;
            if !added {
                break;
            }
        }
        round
    }

    /// Tries to refute disjunction operands with nested searches and adds
    /// the resulting split facts. Returns whether anything was added.
    fn lemma_phase(&mut self, pool: &mut Pool, round: usize) -> bool {
        if self.split_depth == 0 {
            return false;
        }
        let premise: Vec<Statement> = self.facts[..self.premise_len].iter().map(|f| f.stmt).collect();
        let disj: Vec<usize> = (0..self.facts.len())
            .filter(|&d| {
                let s = self.facts[d].stmt;
                s.ap.is_disjunction() && s.inputs().iter().all(|l| self.focus.contains(l))
            })
            .collect();
        let mut added = false;
        for d in disj {
            let ops = self.facts[d].stmt.operands().expect("disjunction");
            let mut refuted: [Option<Step>; 2] = [None, None];
            for (k, op) in ops.iter().enumerate() {
                if let Some(id) = self.refute(&premise, *op, pool) {
                    let rule = &pool.lemmas.iter().find(|(i, _)| *i == id).expect("lemma").1.rule;
                    let mut refs: Vec<usize> = rule.premise.rows[..rule.premise.len() - 1]
                        .iter()
                        .map(|s| premise.iter().position(|p| p == s).expect("premise row"))
                        .collect();
                    refs.push(d);
                    if !self.lemma_rules.iter().any(|(i, _)| *i == id) {
                        self.lemma_rules.push((id, rule.clone()));
                    }
                    refuted[k] = Some(Step::Iep { rule: id, refs });
                }
            }
            let mut cands = Vec::new();
            match (&refuted[0], &refuted[1]) {
                (Some(a), Some(b)) => cands.push((Statement::FALSE, Justification::Split(a.clone(), b.clone()))),
                (Some(a), None) => cands.push((ops[1], Justification::Split(a.clone(), Step::Dcr2(d)))),
                (None, Some(b)) => cands.push((ops[0], Justification::Split(Step::Dcr2(d), b.clone()))),
                (None, None) => {}
            }
            for (s, j) in cands {
                added |= self.insert(s, j, round);
            }
            if self.found.is_some() {
                break;
            }
        }
        added
    }

    /// Refutes `premise + op` by a nested search; returns the lemma id.
    fn refute(&self, premise: &[Statement], op: Statement, pool: &mut Pool) -> Option<u32> {
        let mut assumption = premise.to_vec();
        assumption.push(op);
        if let Some(r) = pool.tried.get(&assumption) {
            return *r;
        }
        pool.tried.insert(assumption.clone(), None);
        let target = Iep::new(assumption.clone(), Statement::FALSE);
        let lemma_rules: Vec<(u32, Iep)> = pool.lemmas.iter().map(|(i, l)| (*i, l.rule.clone())).collect();
        let mut nested = Engine::new(
            &target,
            self.rules.clone(),
            lemma_rules,
            self.max_depth.saturating_sub(label_depths(&target.concatenation().rows).values().copied().max().unwrap_or(0)),
            self.split_depth - 1,
            self.mach,
        );
        nested.max_facts = self.max_facts / 4;
        let found = nested.run(pool);
        pool.derived += nested.derived();
        let goal = found?;
        // Lemma premise: the premise rows the refutation uses, then the operand.
        let used = nested.ancestors(goal);
        let keep: Vec<usize> = (0..nested.premise_len - 1).filter(|i| used.contains(i)).collect();
        let mut rows: Vec<Statement> = keep.iter().map(|&i| nested.facts[i].stmt).collect();
        rows.push(op);
        let rule = Iep::new(rows, Statement::FALSE);
        let mut premise_ids = keep;
        premise_ids.push(nested.premise_len - 1);
        let proof = nested.extract(goal, &rule, &premise_ids);
        let id = pool.next_id;
        pool.next_id += 1;
        pool.lemmas.push((id, Lemma { rule: rule.clone().with_id(id), proof }));
        pool.tried.insert(assumption, Some(id));
        Some(id)
    }

    fn run(&mut self, pool: &mut Pool) -> Option<usize> {
        let mut round = self.saturate(1);
        let mut phases = 0;
        while self.found.is_none() && phases < 2 && self.derived() < self.max_facts {
            if !self.lemma_phase(pool, round) {
                break;
            }
            phases += 1;
            round = self.saturate(round + 1);
        }
        self.found
    }

    fn ancestors(&self, goal: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![goal];
        while let Some(i) = stack.pop() {
            if seen.insert(i) {
                stack.extend(self.facts[i].just.refs());
            }
        }
        seen
    }

    /// Proof of `target` whose premise lines are the facts `premise_ids`
    /// followed by the goal's derived ancestors in derivation order.
    fn extract(&self, goal: usize, target: &Iep, premise_ids: &[usize]) -> Proof {
        let used = self.ancestors(goal);
        let mut order: Vec<usize> = premise_ids.to_vec();
        order.extend(used.iter().copied().filter(|&i| i >= self.premise_len));
        let pos: HashMap<usize, usize> = order.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let lines = order
            .iter()
            .map(|&i| {
                let f = &self.facts[i];
                let just = if i < self.premise_len { Justification::Premise } else { f.just.map_refs(|r| pos[&r]) };
                Line { stmt: f.stmt, just }
            })
            .collect();
        Proof { target: target.clone(), lines }
    }
}

/// Emits split results: a refuted branch lets the other branch's results
/// through; results common to both branches join.
fn emit_split(b: &[BranchResults; 2], out: &mut Vec<(Statement, Justification)>) {
    match (&b[0].refuted, &b[1].refuted) {
        (Some(r0), Some(r1)) => out.push((Statement::FALSE, Justification::Split(r0.clone(), r1.clone()))),
        (Some(r0), None) => {
            for (s, st) in &b[1].derived {
                out.push((*s, Justification::Split(r0.clone(), st.clone())));
            }
        }
        (None, Some(r1)) => {
            for (s, st) in &b[0].derived {
                out.push((*s, Justification::Split(st.clone(), r1.clone())));
            }
        }
        (None, None) => {
            let mut right: HashMap<Key, &Step> = HashMap::new();
            for (s, st) in &b[1].derived {
                if !matches!(st, Step::Dcr2(_)) {
                    right.entry(key(s)).or_insert(st);
                }
            }
            for (s, st) in &b[0].derived {
                if matches!(st, Step::Dcr2(_)) {
                    continue;
                }
                if let Some(st1) = right.get(&key(s)) {
                    out.push((*s, Justification::Split(st.clone(), (*st1).clone())));
                }
            }
        }
    }
}

/// Lemma ids referenced by a proof.
fn lemma_refs(p: &Proof, lemmas: &HashMap<u32, &Lemma>) -> Vec<u32> {
    p.connection_list().into_iter().filter(|i| lemmas.contains_key(i)).collect()
}

/// Searches for a proof of `target` from `rules`.
pub fn prove_with(
    target: &Iep,
    rules: &[(u32, &Iep)],
    mach: &MachParams,
    opts: &ProveOptions,
) -> Result<ProveResult, ProveError> {
    let mut total = 0;
    for &slack in &opts.slacks {
        let mut pool = Pool { next_id: opts.lemma_base, lemmas: Vec::new(), tried: HashMap::new(), derived: 0 };
        let mut e = Engine::new(target, rules.to_vec(), Vec::new(), slack, mach.max_split_depth.saturating_sub(1), mach);
        let found = e.run(&mut pool);
        total += e.derived() + pool.derived;
        let Some(goal) = found else { continue };
        let all: Vec<usize> = (0..e.premise_len).collect();
        let proof = e.extract(goal, target, &all);
        let by_id: HashMap<u32, &Lemma> = pool.lemmas.iter().map(|(i, l)| (*i, l)).collect();
        let mut needed = BTreeSet::new();
        let mut stack = lemma_refs(&proof, &by_id);
        while let Some(i) = stack.pop() {
            if needed.insert(i) {
                stack.extend(lemma_refs(&by_id[&i].proof, &by_id));
            }
        }
        let lemmas: Vec<Lemma> = needed.iter().map(|i| by_id[i].clone()).collect();
        let mut src: HashMap<u32, Iep> = rules.iter().map(|(i, r)| (*i, (*r).clone())).collect();
        for l in &lemmas {
            src.insert(l.rule.id, l.rule.clone());
        }
        for l in &lemmas {
            check_proof(&l.proof, &src).map_err(ProveError::Unchecked)?;
        }
        check_proof(&proof, &src).map_err(ProveError::Unchecked)?;
        return Ok(ProveResult { proof, lemmas, facts: total });
    }
    Err(ProveError::NotFound { facts: total })
}

/// `prove_with` over every rule of `source` except the target's own id.
pub fn prove(target: &Iep, rules: &std::collections::BTreeMap<u32, Iep>, mach: &MachParams) -> Result<ProveResult, ProveError> {
    let list: Vec<(u32, &Iep)> = rules.iter().filter(|(i, _)| target.id == 0 || **i != target.id).map(|(i, r)| (*i, r)).collect();
    let base = rules.keys().max().map_or(1, |m| m + 1).max(1000);
    prove_with(target, &list, mach, &ProveOptions { lemma_base: base, ..ProveOptions::default() })
}

impl RuleSource for [(u32, Iep)] {
    fn rule(&self, id: u32) -> Option<&Iep> {
        self.iter().find(|(i, _)| *i == id).map(|(_, r)| r)
    }
}

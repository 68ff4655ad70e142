//! Proof objects, the four derivation primitives and the proof checker.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::kernel::{Ap, Iep, Label, Statement};

/// A single derivation step. Indices are zero-based line positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    Iot(usize),
    Sr1 { target: usize, eq: usize },
    Iep { rule: u32, refs: Vec<usize> },
    /// Disjunction contraction: the branch operand itself.
    Dcr2(usize),
}

impl Step {
    pub fn refs(&self) -> Vec<usize> {
        match self {
            Step::Iot(r) | Step::Dcr2(r) => vec![*r],
            Step::Sr1 { target, eq } => vec![*target, *eq],
            Step::Iep { refs, .. } => refs.clone(),
        }
    }

    fn map_refs(&self, f: &impl Fn(usize) -> usize) -> Step {
        match self {
            Step::Iot(r) => Step::Iot(f(*r)),
            Step::Dcr2(r) => Step::Dcr2(f(*r)),
            Step::Sr1 { target, eq } => Step::Sr1 { target: f(*target), eq: f(*eq) },
            Step::Iep { rule, refs } => Step::Iep { rule: *rule, refs: refs.iter().map(|r| f(*r)).collect() },
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[usize]| v.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(" ");
        match self {
            Step::Iot(r) => write!(f, "iot [{}]", r + 1),
            Step::Dcr2(r) => write!(f, "dcr2 [{}]", r + 1),
            Step::Sr1 { target, eq } => write!(f, "sr1 [{} {}]", target + 1, eq + 1),
            Step::Iep { rule, refs } => write!(f, "{rule} [{}]", list(refs)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Justification {
    Premise,
    Step(Step),
    Split(Step, Step),
}

impl Justification {
    pub fn refs(&self) -> Vec<usize> {
        match self {
            Justification::Premise => Vec::new(),
            Justification::Step(s) => s.refs(),
            Justification::Split(a, b) => [a.refs(), b.refs()].concat(),
        }
    }

    pub fn rules(&self) -> Vec<u32> {
        let of = |s: &Step| match s {
            Step::Iep { rule, .. } => Some(*rule),
            _ => None,
        };
        match self {
            Justification::Premise => Vec::new(),
            Justification::Step(s) => of(s).into_iter().collect(),
            Justification::Split(a, b) => of(a).into_iter().chain(of(b)).collect(),
        }
    }

    pub fn map_refs(&self, f: impl Fn(usize) -> usize) -> Justification {
        match self {
            Justification::Premise => Justification::Premise,
            Justification::Step(s) => Justification::Step(s.map_refs(&f)),
            Justification::Split(a, b) => Justification::Split(a.map_refs(&f), b.map_refs(&f)),
        }
    }
}

impl Justification {
    /// Rewrites the rule labels of every IEP step.
    pub fn map_rules(&self, f: impl Fn(u32) -> u32) -> Justification {
        let g = |s: &Step| match s {
            Step::Iep { rule, refs } => Step::Iep { rule: f(*rule), refs: refs.clone() },
            other => other.clone(),
        };
        match self {
            Justification::Premise => Justification::Premise,
            Justification::Step(s) => Justification::Step(g(s)),
            Justification::Split(a, b) => Justification::Split(g(a), g(b)),
        }
    }
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Premise => f.write_str("premise"),
            Justification::Step(s) => s.fmt(f),
            Justification::Split(a, b) => write!(f, "{a} {b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub stmt: Statement,
    pub just: Justification,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proof {
    pub target: Iep,
    pub lines: Vec<Line>,
}

impl Proof {
    /// Distinct rule labels the proof applies (IOT, sr1 and dcr2 excluded).
    pub fn connection_list(&self) -> BTreeSet<u32> {
        self.lines.iter().flat_map(|l| l.just.rules()).collect()
    }

    pub fn map_rules(&self, f: impl Fn(u32) -> u32) -> Proof {
        let lines = self.lines.iter().map(|l| Line { stmt: l.stmt.clone(), just: l.just.map_rules(&f) }).collect();
        Proof { target: self.target.clone(), lines }
    }

    /// Proof lines rendered with the given variable names.
    pub fn render_lines(&self, names: &dyn Fn(u32) -> String) -> String {
        let mut out = String::new();
        for (i, l) in self.lines.iter().enumerate() {
            out.push_str(&format!("  {} {}  {}\n", i + 1, l.stmt.display(names), l.just));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ApplyError {
    #[error("reference {0} is not an earlier line")]
    BadRef(usize),
    #[error("no variable slot in referenced line")]
    NoVariable,
    #[error("line {0} is not an equality")]
    NotEquality(usize),
    #[error("no occurrence to substitute")]
    NoOccurrence,
    #[error("substitution does not produce the claimed statement")]
    Sr1Mismatch,
    #[error("unknown rule {0}")]
    UnknownRule(u32),
    #[error("sublist has {found} lines, rule premise has {expected}")]
    SublistLength { expected: usize, found: usize },
    #[error("premise row {0} does not match its referenced line")]
    RowMismatch(usize),
    #[error("line {0} is not a disjunction")]
    NotDisjunction(usize),
    #[error("cannot infer the disjunction line")]
    NoDisjunction,
    #[error("dcr2 on both branches")]
    DoubleDcr2,
    #[error("dcr2 requires the other branch to be refuted")]
    Dcr2Unrefuted,
    #[error("branch results differ")]
    BranchMismatch,
    #[error("derived statement differs from the claimed one")]
    ResultMismatch,
    #[error("step not allowed inside a split")]
    BadBranchStep,
}

/// Variables map to any label; constants and nulls must agree exactly.
pub type Sigma = HashMap<u32, Label>;

pub(crate) fn bind(sigma: &mut Sigma, pat: Label, val: Label) -> bool {
    match pat {
        Label::Var(v) => match sigma.get(&v) {
            Some(&l) => l == val,
            None => {
                sigma.insert(v, val);
                true
            }
        },
        other => other == val,
    }
}

/// Extends `sigma` so that `pat` maps onto `stmt`, or returns false.
/// Outputs are matched like inputs: a consistent sublist is structurally a
/// copy of the premise.
pub fn match_row(sigma: &mut Sigma, pat: &Statement, stmt: &Statement) -> bool {
    if pat.ap != stmt.ap {
        return false;
    }
    pat.x.iter().zip(&stmt.x).chain(pat.y.iter().zip(&stmt.y)).all(|(&p, &s)| bind(sigma, p, s))
}

/// Matches a rule premise against the referenced statements.
pub fn match_premise(rule: &Iep, stmts: &[Statement]) -> Result<Sigma, ApplyError> {
    if rule.premise.len() != stmts.len() {
        return Err(ApplyError::SublistLength { expected: rule.premise.len(), found: stmts.len() });
    }
    let mut sigma = Sigma::new();
    for (i, (p, s)) in rule.premise.rows.iter().zip(stmts).enumerate() {
        if !match_row(&mut sigma, p, s) {
            return Err(ApplyError::RowMismatch(i));
        }
    }
    Ok(sigma)
}

/// The rule conclusion under `sigma` with outputs drawn from `fresh`.
pub fn instantiate(rule: &Iep, sigma: &Sigma, fresh: &mut impl FnMut() -> Label) -> Statement {
    let c = rule.conclusion;
    let mut s = c;
    for (i, l) in c.x.iter().enumerate() {
        s.x[i] = match l {
            Label::Var(v) => sigma.get(v).copied().unwrap_or(*l),
            other => *other,
        };
    }
    for (i, l) in c.y.iter().enumerate() {
        if !l.is_null() {
            s.y[i] = fresh();
        }
    }
    s
}

/// IOT: `typen[v]` for the chosen variable of line `r`.
pub fn apply_iot(lines: &[Statement], r: usize, var: Label) -> Result<Statement, ApplyError> {
    let src = lines.get(r).ok_or(ApplyError::BadRef(r))?;
    if !var.is_var() || !src.slots().any(|l| l == var) {
        return Err(ApplyError::NoVariable);
    }
    Ok(Statement::new(Ap::Typen, &[var], &[]))
}

/// The candidate labels IOT may type in a statement.
pub fn iot_vars(s: &Statement) -> Vec<Label> {
    let mut v: Vec<Label> = Vec::new();
    for l in s.slots().filter(|l| l.is_var()) {
        if !v.contains(&l) {
            v.push(l);
        }
    }
    v
}

/// Every input list obtainable from `target` by sr1 with `eqn[x y]`: a
/// nonempty subset of the occurrences of `x` replaced by `y`, or of `y` by `x`.
pub fn sr1_inputs(target: &Statement, eq: &Statement) -> Vec<[Label; 2]> {
    if eq.ap != Ap::Eqn || target.is_false() {
        return Vec::new();
    }
    let (x, y) = (eq.x[0], eq.x[1]);
    if x == y {
        return Vec::new();
    }
    let n = target.ap.in_arity();
    let mut out: Vec<[Label; 2]> = Vec::new();
    for (from, to) in [(x, y), (y, x)] {
        let pos: Vec<usize> = (0..n).filter(|&i| target.x[i] == from).collect();
        for mask in 1u32..(1 << pos.len()) {
            let mut xs = target.x;
            for (k, &p) in pos.iter().enumerate() {
                if mask & (1 << k) != 0 {
                    xs[p] = to;
                }
            }
            if !out.contains(&xs) {
                out.push(xs);
            }
        }
    }
    out
}

/// sr1 with the first admissible substitution and fresh outputs.
pub fn apply_sr1(
    lines: &[Statement],
    target: usize,
    eq: usize,
    fresh: &mut impl FnMut() -> Label,
) -> Result<Statement, ApplyError> {
    let t = lines.get(target).ok_or(ApplyError::BadRef(target))?;
    let e = lines.get(eq).ok_or(ApplyError::BadRef(eq))?;
    if e.ap != Ap::Eqn {
        return Err(ApplyError::NotEquality(eq));
    }
    let xs = *sr1_inputs(t, e).first().ok_or(ApplyError::NoOccurrence)?;
    let mut s = *t;
    s.x = xs;
    for i in 0..s.ap.out_arity() {
        s.y[i] = fresh();
    }
    Ok(s)
}

/// Applies a rule to the referenced lines.
pub fn apply_iep(
    lines: &[Statement],
    rule: &Iep,
    refs: &[usize],
    fresh: &mut impl FnMut() -> Label,
) -> Result<Statement, ApplyError> {
    let stmts = refs.iter().map(|&r| lines.get(r).copied().ok_or(ApplyError::BadRef(r))).collect::<Result<Vec<_>, _>>()?;
    let sigma = match_premise(rule, &stmts)?;
    Ok(instantiate(rule, &sigma, fresh))
}

/// Rules available to a checker or search, by label.
pub trait RuleSource {
    fn rule(&self, id: u32) -> Option<&Iep>;
}

impl RuleSource for BTreeMap<u32, Iep> {
    fn rule(&self, id: u32) -> Option<&Iep> {
        self.get(&id)
    }
}

impl RuleSource for HashMap<u32, Iep> {
    fn rule(&self, id: u32) -> Option<&Iep> {
        self.get(&id)
    }
}

/// A rule source layered over another (lemmas over a knowledge base).
pub struct Layered<'a, A: RuleSource + ?Sized, B: RuleSource + ?Sized>(pub &'a A, pub &'a B);

impl<A: RuleSource + ?Sized, B: RuleSource + ?Sized> RuleSource for Layered<'_, A, B> {
    fn rule(&self, id: u32) -> Option<&Iep> {
        self.0.rule(id).or_else(|| self.1.rule(id))
    }
}

enum Outcome {
    Refuted,
    Derived,
}

/// Checks one step against `claimed`; `lines` already carries any branch
/// substitution. `claimed` only needs to agree up to outputs.
fn check_step(
    step: &Step,
    lines: &[Statement],
    claimed: &Statement,
    rules: &dyn RuleSource,
    operand_of: Option<usize>,
) -> Result<Outcome, ApplyError> {
    let get = |r: usize| lines.get(r).copied().ok_or(ApplyError::BadRef(r));
    let shape_ok = |s: &Statement| if s.same_shape(claimed) { Ok(Outcome::Derived) } else { Err(ApplyError::ResultMismatch) };
    match step {
        Step::Iot(r) => {
            let src = get(*r)?;
            if claimed.ap == Ap::Typen && claimed.x[0].is_var() && src.slots().any(|l| l == claimed.x[0]) {
                Ok(Outcome::Derived)
            } else {
                Err(ApplyError::NoVariable)
            }
        }
        Step::Sr1 { target, eq } => {
            let (t, e) = (get(*target)?, get(*eq)?);
            if e.ap != Ap::Eqn {
                return Err(ApplyError::NotEquality(*eq));
            }
            let options = sr1_inputs(&t, &e);
            if options.is_empty() {
                return Err(ApplyError::NoOccurrence);
            }
            if claimed.ap == t.ap && options.contains(&claimed.x) {
                Ok(Outcome::Derived)
            } else {
                Err(ApplyError::Sr1Mismatch)
            }
        }
        Step::Iep { rule, refs } => {
            let r = rules.rule(*rule).ok_or(ApplyError::UnknownRule(*rule))?;
            let mut n = 0u32;
            let s = apply_iep(lines, r, refs, &mut || {
                n += 1;
                Label::Var(u32::MAX - n)
            })?;
            if s.is_false() {
                Ok(Outcome::Refuted)
            } else {
                shape_ok(&s)
            }
        }
        Step::Dcr2(d) => match operand_of {
            Some(od) if od == *d => shape_ok(&get(*d)?),
            Some(_) => Err(ApplyError::BadRef(*d)),
            None => Err(ApplyError::BadBranchStep),
        },
    }
}

fn split_candidates(a: &Step, b: &Step, lines: &[Statement]) -> Vec<usize> {
    let disj = |i: &usize| lines.get(*i).is_some_and(|s| s.ap.is_disjunction());
    let mut c: Vec<usize> = match (a, b) {
        (Step::Dcr2(d), _) | (_, Step::Dcr2(d)) => vec![*d],
        _ => {
            let rb: HashSet<usize> = b.refs().into_iter().collect();
            a.refs().into_iter().filter(|r| rb.contains(r)).collect()
        }
    };
    c.sort_unstable();
    c.dedup();
    c.retain(disj);
    c
}

/// Checks a split on disjunction line `d`.
fn check_split_at(
    d: usize,
    pair: [&Step; 2],
    lines: &[Statement],
    claimed: &Statement,
    rules: &dyn RuleSource,
) -> Result<(), ApplyError> {
    let ops = lines[d].operands().ok_or(ApplyError::NotDisjunction(d))?;
    let mut outcomes = Vec::with_capacity(2);
    for (step, op) in pair.iter().zip(ops) {
        let mut view = lines.to_vec();
        view[d] = op;
        outcomes.push(check_step(step, &view, claimed, rules, Some(d)));
    }
    let dcr = pair.map(|s| matches!(s, Step::Dcr2(_)));
    if dcr[0] && dcr[1] {
        return Err(ApplyError::DoubleDcr2);
    }
    let (o0, o1) = (outcomes.remove(0), outcomes.remove(0));
    // A branch that fails to match the claim is acceptable only if refuted.
    match (o0, o1) {
        (Ok(Outcome::Refuted), Ok(Outcome::Refuted)) => {
            if claimed.is_false() {
                Ok(())
            } else {
                Err(ApplyError::ResultMismatch)
            }
        }
        (Ok(Outcome::Refuted), Ok(Outcome::Derived)) | (Ok(Outcome::Derived), Ok(Outcome::Refuted)) => Ok(()),
        (Ok(Outcome::Derived), Ok(Outcome::Derived)) => {
            if dcr[0] || dcr[1] {
                Err(ApplyError::Dcr2Unrefuted)
            } else {
                Ok(())
            }
        }
        (Err(e), _) | (_, Err(e)) => Err(if e == ApplyError::ResultMismatch { ApplyError::BranchMismatch } else { e }),
    }
}

/// Checks a split, inferring the disjunction line from the pairs.
pub fn apply_split_check(
    a: &Step,
    b: &Step,
    lines: &[Statement],
    claimed: &Statement,
    rules: &dyn RuleSource,
) -> Result<usize, ApplyError> {
    let cands = split_candidates(a, b, lines);
    let mut last = ApplyError::NoDisjunction;
    for d in cands {
        match check_split_at(d, [a, b], lines, claimed, rules) {
            Ok(()) => return Ok(d),
            Err(e) => last = e,
        }
    }
    Err(last)
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("line {line}: {reason}")]
    Line { line: usize, reason: LineFault },
    #[error("final line does not match the conclusion")]
    Conclusion,
    #[error("declared connection list {declared:?} differs from {actual:?}")]
    ConnectionList { declared: Vec<u32>, actual: Vec<u32> },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LineFault {
    #[error("premise line differs from the rule premise")]
    Premise,
    #[error("output label not fresh")]
    StaleOutput,
    #[error(transparent)]
    Apply(#[from] ApplyError),
    #[error("too few lines")]
    Missing,
}

impl CheckError {
    /// One-based failing line, if the failure is line-local.
    pub fn line(&self) -> Option<usize> {
        match self {
            CheckError::Line { line, .. } => Some(*line),
            _ => None,
        }
    }
}

/// Replays every line and returns the recomputed connection list.
pub fn check_proof(pf: &Proof, rules: &dyn RuleSource) -> Result<BTreeSet<u32>, CheckError> {
    let premise = &pf.target.premise.rows;
    let fault = |i: usize, reason: LineFault| CheckError::Line { line: i + 1, reason };
    if pf.lines.len() < premise.len() || pf.lines.is_empty() {
        return Err(fault(pf.lines.len(), LineFault::Missing));
    }
    let mut stmts: Vec<Statement> = Vec::with_capacity(pf.lines.len());
    let mut seen: HashSet<Label> = HashSet::new();
    for (i, line) in pf.lines.iter().enumerate() {
        if i < premise.len() {
            if line.just != Justification::Premise || line.stmt != premise[i] {
                return Err(fault(i, LineFault::Premise));
            }
        } else {
            let outs = line.stmt.outputs();
            if outs.iter().any(|l| seen.contains(l)) || (outs.len() > 1 && outs[0] == outs[1]) {
                return Err(fault(i, LineFault::StaleOutput));
            }
            let r = match &line.just {
                Justification::Premise => Err(ApplyError::BadRef(i)),
                Justification::Step(Step::Dcr2(_)) => Err(ApplyError::BadBranchStep),
                Justification::Step(s) => {
                    if s.refs().iter().any(|&r| r >= i) {
                        Err(ApplyError::BadRef(s.refs().into_iter().find(|&r| r >= i).unwrap_or(i)))
                    } else {
                        match check_step(s, &stmts, &line.stmt, rules, None) {
                            Ok(Outcome::Refuted) if line.stmt.is_false() => Ok(()),
                            Ok(Outcome::Refuted) => Err(ApplyError::ResultMismatch),
                            Ok(Outcome::Derived) => Ok(()),
                            Err(e) => Err(e),
                        }
                    }
                }
                Justification::Split(a, b) => {
                    if line.just.refs().iter().any(|&r| r >= i) {
                        Err(ApplyError::BadRef(i))
                    } else {
                        apply_split_check(a, b, &stmts, &line.stmt, rules).map(|_| ())
                    }
                }
            };
            r.map_err(|e| fault(i, e.into()))?;
        }
        seen.extend(line.stmt.slots().filter(|l| !l.is_null()));
        stmts.push(line.stmt);
    }
    let last = stmts.last().ok_or(CheckError::Conclusion)?;
    if !last.same_shape(&pf.target.conclusion) {
        return Err(CheckError::Conclusion);
    }
    Ok(pf.connection_list())
}

/// `check_proof` plus comparison with a declared connection list (as sets).
pub fn check_theorem(pf: &Proof, declared: &[u32], rules: &dyn RuleSource) -> Result<BTreeSet<u32>, CheckError> {
    let actual = check_proof(pf, rules)?;
    let decl: BTreeSet<u32> = declared.iter().copied().collect();
    if decl != actual {
        return Err(CheckError::ConnectionList { declared: decl.into_iter().collect(), actual: actual.into_iter().collect() });
    }
    Ok(actual)
}

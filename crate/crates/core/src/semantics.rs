//! Evaluation of statements and programs over `{0..=mnat}` and exhaustive
//! soundness checking of rules.

use std::fmt;

use thiserror::Error;

use crate::kernel::{Ap, Iep, Label, MachParams, Program, Statement};
use crate::par;

/// Values of variable labels. Constants are valued implicitly.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Valuation {
    values: Vec<Option<u64>>,
}

impl Valuation {
    pub fn new() -> Valuation {
        Valuation::default()
    }

    pub fn from_pairs(pairs: &[(u32, u64)]) -> Valuation {
        let mut v = Valuation::new();
        for &(k, x) in pairs {
            v.set(k, x);
        }
        v
    }

    pub fn get(&self, var: u32) -> Option<u64> {
        self.values.get(var as usize).copied().flatten()
    }

    pub fn set(&mut self, var: u32, value: u64) {
        let i = var as usize;
        if self.values.len() <= i {
            self.values.resize(i + 1, None);
        }
        self.values[i] = Some(value);
    }

    pub fn value_of(&self, label: Label, mnat: u64) -> Option<u64> {
        match label {
            Label::Var(k) => self.get(k),
            Label::Const(c) => Some(c.value(mnat)),
            Label::Null => None,
        }
    }

    /// Assigned `(variable, value)` pairs in label order.
    pub fn pairs(&self) -> Vec<(u32, u64)> {
        self.values.iter().enumerate().filter_map(|(k, v)| v.map(|x| (k as u32, x))).collect()
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.pairs().into_iter().map(|(k, x)| format!("{}={}", crate::kernel::var_name(k), x)).collect();
        f.write_str(&parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HaltCause {
    /// A computed value exceeded `mnat`.
    TypeBound,
    /// A relation check failed.
    RelationFalse,
    /// The falsity statement never computes.
    Falsity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunOutcome {
    Computable(Valuation),
    Halted { row: usize, cause: HaltCause },
}

impl RunOutcome {
    pub fn is_computable(&self) -> bool {
        matches!(self, RunOutcome::Computable(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("input label {0:?} has no value")]
    Unvalued(Label),
}

fn relation(ap: Ap, a: u64, b: u64) -> bool {
    match ap {
        Ap::Eqn => a == b,
        Ap::Lt => a < b,
        _ => unreachable!("not a relation"),
    }
}

/// Evaluates one statement. A computable computation extends `env` with its output.
pub fn eval_statement(s: &Statement, env: &mut Valuation, mach: &MachParams) -> Result<Option<HaltCause>, EvalError> {
    let mut vals = [0u64; 2];
    for (i, &l) in s.inputs().iter().enumerate() {
        vals[i] = env.value_of(l, mach.mnat).ok_or(EvalError::Unvalued(l))?;
    }
    match eval_values(s, vals, mach.mnat) {
        Ok(Some(out)) => {
            if let Label::Var(k) = s.y[0] {
                env.set(k, out);
            }
            Ok(None)
        }
        Ok(None) => Ok(None),
        Err(cause) => Ok(Some(cause)),
    }
}

/// Evaluation on input values: a halt, or the computed output value if any.
fn eval_values(s: &Statement, vals: [u64; 2], mnat: u64) -> Result<Option<u64>, HaltCause> {
    let [a, b] = vals;
    match s.ap {
        Ap::False => Err(HaltCause::Falsity),
        Ap::Typen => Ok(None),
        Ap::Eqn | Ap::Lt => {
            if relation(s.ap, a, b) {
                Ok(None)
            } else {
                Err(HaltCause::RelationFalse)
            }
        }
        Ap::Add | Ap::Mult => {
            let v = if s.ap == Ap::Add { a.checked_add(b) } else { a.checked_mul(b) };
            match v {
                Some(v) if v <= mnat => Ok(Some(v)),
                _ => Err(HaltCause::TypeBound),
            }
        }
        Ap::Le | Ap::Trich => {
            if disjunction_holds(s, vals) {
                Ok(None)
            } else {
                Err(HaltCause::RelationFalse)
            }
        }
    }
}

/// A disjunction computes iff one of its operands does.
fn disjunction_holds(s: &Statement, vals: [u64; 2]) -> bool {
    let ops = s.ap.signature().operands.expect("disjunction");
    ops.iter().any(|op| {
        let v = [vals[op.args[0]], vals[op.args[1]]];
        match op.ap {
            Ap::Lt | Ap::Eqn => relation(op.ap, v[0], v[1]),
            Ap::Le => v[0] < v[1] || v[0] == v[1],
            _ => unreachable!("operand"),
        }
    })
}

/// Runs the rows in order; the first halt aborts.
pub fn run_program(p: &Program, inputs: &Valuation, mach: &MachParams) -> Result<RunOutcome, EvalError> {
    run_rows(&p.rows, inputs.clone(), mach)
}

pub fn run_rows(rows: &[Statement], mut env: Valuation, mach: &MachParams) -> Result<RunOutcome, EvalError> {
    for (row, s) in rows.iter().enumerate() {
        if let Some(cause) = eval_statement(s, &mut env, mach)? {
            return Ok(RunOutcome::Halted { row, cause });
        }
    }
    Ok(RunOutcome::Computable(env))
}

pub fn primary_inputs(p: &Program) -> Vec<Label> {
    p.primary_inputs()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Sound,
    Unsound,
    Vacuous,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Sound => "sound",
            Verdict::Unsound => "unsound",
            Verdict::Vacuous => "vacuous",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoundnessVerdict {
    pub verdict: Verdict,
    /// Assignments under which the premise is computable.
    pub witness_count: u64,
    pub counterexample: Option<Valuation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SoundnessError {
    #[error("{count} primary inputs exceed the enumeration cap of {cap}")]
    EnumerationCap { count: usize, cap: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Clone, Copy, Default)]
struct Sweep {
    witnesses: u64,
    first_bad: Option<u64>,
}

/// Decodes enumeration index `idx` into a valuation of `vars`; the first
/// variable varies fastest.
fn nth_valuation(vars: &[u32], idx: u64, base: u64) -> Valuation {
    let mut v = Valuation::new();
    let mut rest = idx;
    for &k in vars {
        v.set(k, rest % base);
        rest /= base;
    }
    v
}

/// Exhaustive check over every assignment of the premise's primary inputs.
///
/// The reported counterexample is the first failing assignment in
/// enumeration order, where the first primary input varies fastest.
pub fn soundness_check(rule: &Iep, mach: &MachParams) -> Result<SoundnessVerdict, SoundnessError> {
    let vars: Vec<u32> = rule
        .premise
        .primary_inputs()
        .into_iter()
        .filter_map(|l| match l {
            Label::Var(k) => Some(k),
            _ => None,
        })
        .collect();
    if vars.len() > mach.max_enumeration_vars {
        return Err(SoundnessError::EnumerationCap { count: vars.len(), cap: mach.max_enumeration_vars });
    }
    // Conclusion inputs outside the premise cannot be valued.
    for &l in rule.conclusion.inputs() {
        if l.is_var() && !rule.premise.rows.iter().any(|s| s.slots().any(|m| m == l)) {
            return Err(SoundnessError::Eval(EvalError::Unvalued(l)));
        }
    }
    let base = mach.mnat + 1;
    let total = base.checked_pow(vars.len() as u32).unwrap_or(u64::MAX);
    let falsity = rule.conclusion.is_false();

    let probe = |idx: u64| -> Result<(bool, bool), EvalError> {
        let env = nth_valuation(&vars, idx, base);
        match run_rows(&rule.premise.rows, env, mach)? {
            RunOutcome::Halted { .. } => Ok((false, false)),
            RunOutcome::Computable(mut env) => {
                if falsity {
                    return Ok((true, true));
                }
                let ok = eval_statement(&rule.conclusion, &mut env, mach)?.is_none();
                Ok((true, !ok))
            }
        }
    };
    // Validate once so the sweep itself cannot fail.
    probe(0)?;
    let sweep = par::fold_range(
        mach.parallel,
        total,
        4096,
        Sweep::default(),
        |mut acc, idx| {
            let (witness, bad) = probe(idx).expect("validated");
            acc.witnesses += witness as u64;
            if bad && acc.first_bad.is_none() {
                acc.first_bad = Some(idx);
            }
            acc
        },
        |a, b| Sweep { witnesses: a.witnesses + b.witnesses, first_bad: a.first_bad.or(b.first_bad) },
    );
    let counterexample = sweep.first_bad.map(|i| nth_valuation(&vars, i, base));
    let verdict = match (counterexample.is_some(), sweep.witnesses) {
        (true, _) => Verdict::Unsound,
        (false, 0) if falsity => Verdict::Sound,
        (false, 0) => Verdict::Vacuous,
        (false, _) => Verdict::Sound,
    };
    Ok(SoundnessVerdict { verdict, witness_count: sweep.witnesses, counterexample })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::parse_rule_text;

    fn mach(mnat: u64) -> MachParams {
        MachParams::default().with_mnat(mnat)
    }

    fn single(text: &str) -> Statement {
        crate::kernel::parse_statement(text, &mut crate::kernel::NameTable::new()).unwrap()
    }

    #[test]
    fn add_bound_halts() {
        let s = single("add [a b] [c]");
        let mut env = Valuation::from_pairs(&[(1, 7), (2, 8)]);
        assert_eq!(eval_statement(&s, &mut env, &mach(10)).unwrap(), Some(HaltCause::TypeBound));
        let mut env = Valuation::from_pairs(&[(1, 3), (2, 4)]);
        assert_eq!(eval_statement(&s, &mut env, &mach(10)).unwrap(), None);
        assert_eq!(env.get(3), Some(7));
    }

    #[test]
    fn lt_irreflexive() {
        let s = single("lt [a b] []");
        let mut env = Valuation::from_pairs(&[(1, 5), (2, 5)]);
        assert_eq!(eval_statement(&s, &mut env, &mach(10)).unwrap(), Some(HaltCause::RelationFalse));
    }

    #[test]
    fn trich_always_computes() {
        // Independent oracle: trichotomy of the integers.
        let s = single("trich [a b] []");
        let m = mach(12);
        for a in 0..=12 {
            for b in 0..=12 {
                let mut env = Valuation::from_pairs(&[(1, a), (2, b)]);
                assert_eq!(eval_statement(&s, &mut env, &m).unwrap(), None, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn le_matches_integer_order() {
        let s = single("le [a b] []");
        for a in 0..=6 {
            for b in 0..=6 {
                let mut env = Valuation::from_pairs(&[(1, a), (2, b)]);
                assert_eq!(eval_statement(&s, &mut env, &mach(6)).unwrap().is_none(), a <= b);
            }
        }
    }

    #[test]
    fn unvalued_input_is_an_error() {
        let s = single("typen [a] []");
        assert!(eval_statement(&s, &mut Valuation::new(), &mach(3)).is_err());
    }

    #[test]
    fn run_program_examples() {
        let r = parse_rule_text("add [a b] [c]\n-----\nadd [b a] [d]").unwrap();
        let out = run_program(&r.premise, &Valuation::from_pairs(&[(1, 3), (2, 4)]), &mach(10)).unwrap();
        match out {
            RunOutcome::Computable(env) => assert_eq!(env.get(3), Some(7)),
            other => panic!("{other:?}"),
        }
        let r = parse_rule_text("add [a b] [d]\nadd [d c] [x]\nadd [b c] [e]\n-----\nadd [a e] [y]").unwrap();
        let out = run_program(&r.premise, &Valuation::from_pairs(&[(1, 4), (2, 4), (4, 4)]), &mach(10)).unwrap();
        assert_eq!(out, RunOutcome::Halted { row: 1, cause: HaltCause::TypeBound });
        assert!(run_program(&Program::default(), &Valuation::new(), &mach(10)).unwrap().is_computable());
    }

    #[test]
    fn soundness_examples() {
        let r = parse_rule_text("add [a b] [c]\n-----\nadd [b a] [d]").unwrap();
        let v = soundness_check(&r, &mach(12)).unwrap();
        assert_eq!(v.verdict, Verdict::Sound);

        let r = parse_rule_text("typen [a] []\ntypen [b] []\n-----\nadd [a b] [c]").unwrap();
        let v = soundness_check(&r, &mach(10)).unwrap();
        assert_eq!(v.verdict, Verdict::Unsound);
        assert_eq!(v.counterexample.unwrap().pairs(), vec![(1, 10), (2, 1)]);

        let r = parse_rule_text("lt [a a] []\n-----\nfalse").unwrap();
        let v = soundness_check(&r, &mach(12)).unwrap();
        assert_eq!((v.verdict, v.witness_count), (Verdict::Sound, 0));

        let r = parse_rule_text("-----\nlt [0 1] []").unwrap();
        let v = soundness_check(&r, &mach(12)).unwrap();
        assert_eq!((v.verdict, v.witness_count), (Verdict::Sound, 1));
    }

    #[test]
    fn vacuous_and_cap() {
        let r = parse_rule_text("lt [a a] []\n-----\ntypen [a] []").unwrap();
        let v = soundness_check(&r, &mach(5)).unwrap();
        assert_eq!(v.verdict, Verdict::Vacuous);
        let r = parse_rule_text("eqn [a b] []\neqn [c d] []\neqn [e f] []\n-----\neqn [a a] []").unwrap();
        let e = soundness_check(&r, &mach(3)).unwrap_err();
        assert_eq!(e, SoundnessError::EnumerationCap { count: 6, cap: 5 });
    }

    #[test]
    fn falsity_with_witness_is_unsound() {
        let r = parse_rule_text("lt [a b] []\n-----\nfalse").unwrap();
        let v = soundness_check(&r, &mach(4)).unwrap();
        assert_eq!(v.verdict, Verdict::Unsound);
        assert_eq!(v.counterexample.unwrap().pairs(), vec![(1, 0), (2, 1)]);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let r = parse_rule_text("add [a b] [c]\n-----\nadd [c b] [d]").unwrap();
        let mut m = mach(9);
        let par = soundness_check(&r, &m).unwrap();
        m.parallel = false;
        assert_eq!(par, soundness_check(&r, &m).unwrap());
    }
}

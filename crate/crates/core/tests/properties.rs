use std::collections::{BTreeMap, BTreeSet};

use pecr::conjecture::{generate_conjectures, Status, TemplateGroup};
use pecr::corpus::{shipped, Corpus, Kind};
use pecr::kernel::{parse_rule_text, render_rule_text};
use pecr::prover::{partition, KnowledgeBase, SearchScope};
use pecr::semantics::{run_rows, soundness_check, RunOutcome, Valuation, Verdict};
use pecr::structure::{binary_template, decompose, pe_integrity, structurally_equivalent, IoMatrix};
use pecr::{Ap, Constant, Iep, Label, MachParams, Program, Statement};
use proptest::prelude::*;

const NAMES: [Ap; 7] = [Ap::Typen, Ap::Eqn, Ap::Lt, Ap::Add, Ap::Mult, Ap::Le, Ap::Trich];
const CONSTS: [Constant; 3] = [Constant::Zero, Constant::One, Constant::Mnat];

/// Picks an input label: a constant, an existing label, or a fresh variable.
fn pick(seed: u8, known: &mut Vec<Label>, next: &mut u32) -> Label {
    match seed % 8 {
        7 => Label::Const(CONSTS[(seed / 8) as usize % 3]),
        s if (s as usize) < known.len() * 2 && s % 2 == 0 => known[(seed as usize / 2) % known.len()],
        _ => {
            let l = Label::Var(*next);
            *next += 1;
            known.push(l);
            l
        }
    }
}

fn statement(ap: Ap, seeds: &[u8], known: &mut Vec<Label>, next: &mut u32) -> Statement {
    let inputs: Vec<Label> = (0..ap.in_arity()).map(|i| pick(seeds[i], known, next)).collect();
    let mut outputs = Vec::new();
    for _ in 0..ap.out_arity() {
        outputs.push(Label::Var(*next));
        *next += 1;
    }
    known.extend(&outputs);
    Statement::new(ap, &inputs, &outputs)
}

/// Single-assignment rules with fresh outputs: always well formed.
fn rule() -> impl Strategy<Value = Iep> {
    let row = (0..NAMES.len(), prop::array::uniform2(any::<u8>()));
    (prop::collection::vec(row.clone(), 1..=3), row).prop_map(|(rows, (cn, cs))| {
        let (mut known, mut next) = (Vec::new(), 1);
        let premise = rows.iter().map(|(n, s)| statement(NAMES[*n], s, &mut known, &mut next)).collect();
        // Conclusion inputs come from the premise alone.
        let mut frozen = next;
        let mut c = statement(NAMES[cn], &cs, &mut known, &mut frozen);
        for l in c.x.iter_mut() {
            if let Label::Var(v) = *l {
                if v >= next {
                    *l = known.first().copied().unwrap_or(Label::Const(Constant::Zero));
                }
            }
        }
        Iep::new(premise, c)
    })
}

/// Rule with its variables renamed injectively into 1..=26.
fn relabeled(r: &Iep, offset: u32) -> Iep {
    let n = 26;
    let f = |l: Label| match l {
        Label::Var(v) => Label::Var((v - 1 + offset) % n + 1),
        other => other,
    };
    Iep::new(r.premise.rows.iter().map(|s| s.map_labels(f)).collect(), r.conclusion.map_labels(f))
}

fn mach2() -> MachParams {
    MachParams::default().with_mnat(2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn generated_rules_are_well_formed(r in rule()) {
        prop_assert!(r.premise.validate().is_ok(), "{}", render_rule_text(&r));
    }

    #[test]
    fn decomposition_sums_back(r in rule()) {
        let p = r.concatenation();
        let m = IoMatrix::of(&p);
        let d = decompose(&m);
        prop_assert_eq!(d.sum(), m);
        for x in d.binding() {
            let ok = if x.label.is_var() { x.cells.len() >= 2 } else { !x.cells.is_empty() };
            prop_assert!(ok);
        }
        let labels: BTreeSet<Label> = d.members.iter().map(|x| x.label).collect();
        prop_assert_eq!(labels.len(), d.members.len());
    }

    #[test]
    fn matrix_encoding_round_trips(r in rule()) {
        let p = r.concatenation();
        let back = Program::from_matrix(&p.to_matrix(26).unwrap(), 26).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn rule_text_round_trips(r in rule()) {
        let c = r.canonical();
        let text = render_rule_text(&c);
        prop_assert_eq!(parse_rule_text(&text).unwrap(), c);
    }

    #[test]
    fn templates_ignore_variable_names(r in rule(), offset in 0u32..26) {
        let s = relabeled(&r, offset);
        prop_assert_eq!(binary_template(&r), binary_template(&s));
        prop_assert!(structurally_equivalent(&r, &s, true));
        prop_assert_eq!(r.canonical(), s.canonical());
    }

    #[test]
    fn structural_equivalence_is_an_equivalence(a in rule(), b in rule(), k in 0u32..26, strong in any::<bool>()) {
        let a2 = relabeled(&a, k);
        prop_assert!(structurally_equivalent(&a, &a, strong));
        prop_assert_eq!(structurally_equivalent(&a, &b, strong), structurally_equivalent(&b, &a, strong));
        // a ~ a2 always, so b ~ a exactly when b ~ a2.
        prop_assert_eq!(structurally_equivalent(&b, &a, strong), structurally_equivalent(&b, &a2, strong));
        if strong && structurally_equivalent(&a, &b, true) {
            prop_assert!(structurally_equivalent(&a, &b, false));
        }
    }

    #[test]
    fn verdicts_carry_their_evidence(r in rule()) {
        let mach = mach2();
        let Ok(v) = soundness_check(&r, &mach) else { return Ok(()) };
        match v.verdict {
            Verdict::Unsound => {
                let env = v.counterexample.clone().expect("unsound verdict without counterexample");
                let RunOutcome::Computable(env) = run_rows(&r.premise.rows, env, &mach).unwrap() else {
                    return Err(TestCaseError::fail("counterexample does not satisfy the premise"));
                };
                prop_assert!(!run_rows(&[r.conclusion], env, &mach).unwrap().is_computable());
            }
            Verdict::Vacuous => prop_assert_eq!(v.witness_count, 0),
            Verdict::Sound => {
                prop_assert!(v.counterexample.is_none());
                prop_assert!(v.witness_count > 0 || r.conclusion.is_false());
            }
        }
    }

    #[test]
    fn sound_rules_compute_end_to_end(r in rule(), vals in prop::collection::vec(0u64..=2, 6)) {
        let mach = mach2();
        let Ok(v) = soundness_check(&r, &mach) else { return Ok(()) };
        prop_assume!(v.verdict == Verdict::Sound && !r.conclusion.is_false());
        let vars: Vec<u32> = r.premise.primary_inputs().into_iter().filter_map(|l| if let Label::Var(k) = l { Some(k) } else { None }).collect();
        let pairs: Vec<(u32, u64)> = vars.iter().zip(&vals).map(|(k, x)| (*k, *x)).collect();
        let env = Valuation::from_pairs(&pairs);
        if run_rows(&r.premise.rows, env.clone(), &mach).unwrap().is_computable() {
            prop_assert!(run_rows(&r.concatenation().rows, env, &mach).unwrap().is_computable());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn survivors_are_sound_and_distinct(names in prop::collection::vec(0..NAMES.len(), 2)) {
        let mach = mach2();
        let names: Vec<Ap> = names.iter().map(|i| NAMES[*i]).collect();
        let g = generate_conjectures(&TemplateGroup::new(1).with_names(&names), &mach);
        let mut seen = BTreeSet::new();
        for c in &g.survivors {
            prop_assert_eq!(&c.status, &Status::Sound);
            prop_assert!(c.iep.premise.len() <= mach.max_premise_len);
            prop_assert!(pe_integrity(&c.iep, &mach).is_ok());
            prop_assert_eq!(soundness_check(&c.iep, &mach).unwrap().verdict, Verdict::Sound);
            prop_assert!(seen.insert(render_rule_text(&c.iep.canonical())), "duplicate survivor");
        }
        prop_assert!(g.rejected.iter().all(|c| c.status != Status::Sound));
        prop_assert_eq!(g, generate_conjectures(&TemplateGroup::new(1).with_names(&names), &mach));
    }

    /// Partitioning any prefix-closed part of the corpus keeps the
    /// dependency graph acyclic and zero weights exactly on unused rules.
    #[test]
    fn partitioned_subsets_stay_consistent(drop in prop::collection::btree_set(1u32..=115, 0..20)) {
        let full = shipped();
        let corpus = Corpus { entries: full.entries.into_iter().filter(|e| !drop.contains(&e.id)).collect(), trailer: None };
        let mut kb = KnowledgeBase::from_corpus(&corpus);
        partition(&mut kb, BTreeMap::new(), &MachParams::default(), SearchScope::Off);
        prop_assert!(kb.validate().is_ok());
        let used: BTreeSet<u32> = kb
            .class
            .values()
            .filter_map(|c| match c {
                pecr::prover::Class::Theorem { connections, .. } => Some(connections.clone()),
                _ => None,
            })
            .flatten()
            .collect();
        for id in kb.rules.keys() {
            prop_assert_eq!(kb.weights[id] == 0, !used.contains(id), "rule {}", id);
            if kb.class[id].kind() == Kind::Underivable {
                prop_assert!(!used.contains(id));
            }
        }
        let t = kb.tally();
        prop_assert_eq!(t.axioms.unwrap() + t.theorems.unwrap() + t.underivable.unwrap() + t.provisional.unwrap(), kb.rules.len());
    }
}

use pecr::corpus::{shipped, Kind};
use pecr::prover::{check_proof, check_theorem, Justification, Proof, Step};
use pecr::semantics::{run_rows, RunOutcome, Valuation};
use pecr::{Label, MachParams};

/// Every derived line must compute on every valuation that makes the
/// premise compute. Falsity targets have no such valuation.
fn replay(pf: &Proof, mnat: u64, max_vars: usize) -> Result<(), String> {
    let mach = MachParams::default().with_mnat(mnat);
    let premise = &pf.target.premise.rows;
    let vars: Vec<u32> = pf.target.premise.primary_inputs().into_iter().filter_map(|l| if let Label::Var(v) = l { Some(v) } else { None }).collect();
    if vars.len() > max_vars {
        return Ok(());
    }
    let derived: Vec<_> = pf.lines.iter().filter(|l| l.just != Justification::Premise).map(|l| l.stmt).collect();
    let base = mnat + 1;
    for n in 0..base.pow(vars.len() as u32) {
        let pairs: Vec<(u32, u64)> = vars.iter().enumerate().map(|(i, v)| (*v, n / base.pow(i as u32) % base)).collect();
        let env = Valuation::from_pairs(&pairs);
        let RunOutcome::Computable(env) = run_rows(premise, env, &mach).map_err(|e| e.to_string())? else { continue };
        match run_rows(&derived, env, &mach).map_err(|e| e.to_string())? {
            RunOutcome::Computable(_) => {}
            RunOutcome::Halted { row, cause } => return Err(format!("derived line {} halts ({cause:?}) at {pairs:?}", row + 1)),
        }
    }
    Ok(())
}

fn theorems() -> Vec<(u32, Proof, Vec<u32>)> {
    shipped()
        .entries
        .into_iter()
        .filter(|e| e.kind == Kind::Theorem)
        .map(|e| (e.id, e.proof.expect("every theorem has a proof"), e.connections.unwrap_or_default()))
        .collect()
}

#[test]
fn every_transcribed_proof_checks() {
    let rules = shipped().rules();
    let mut failures = Vec::new();
    for (id, pf, conn) in theorems() {
        if let Err(err) = check_theorem(&pf, &conn, &rules) {
            failures.push(format!("theorem {id}: {err}"));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn transcribed_proofs_replay_semantically() {
    for (id, pf, _) in theorems() {
        replay(&pf, 2, 5).unwrap_or_else(|e| panic!("theorem {id} at mnat 2: {e}"));
        replay(&pf, 12, 3).unwrap_or_else(|e| panic!("theorem {id} at mnat 12: {e}"));
    }
}

fn shift_ref(s: &Step, k: usize, limit: usize, seen: &mut usize) -> Step {
    let mut f = |r: usize| {
        let here = *seen == k;
        *seen += 1;
        match here {
            true if r + 1 < limit => r + 1,
            true if r > 0 => r - 1,
            _ => r,
        }
    };
    match s {
        Step::Iot(r) => Step::Iot(f(*r)),
        Step::Dcr2(r) => Step::Dcr2(f(*r)),
        Step::Sr1 { target, eq } => {
            let t = f(*target);
            Step::Sr1 { target: t, eq: f(*eq) }
        }
        Step::Iep { rule, refs } => Step::Iep { rule: *rule, refs: refs.iter().map(|r| f(*r)).collect() },
    }
}

/// Each single moved reference is either rejected or yields a proof that
/// still replays.
#[test]
fn moved_references_are_caught_or_harmless() {
    let rules = shipped().rules();
    let (mut total, mut caught) = (0, 0);
    for (id, pf, conn) in theorems() {
        for i in 0..pf.lines.len() {
            for k in 0..pf.lines[i].just.refs().len() {
                let mut m = pf.clone();
                let mut seen = 0;
                m.lines[i].just = match &pf.lines[i].just {
                    Justification::Step(s) => Justification::Step(shift_ref(s, k, i, &mut seen)),
                    Justification::Split(a, b) => {
                        let a = shift_ref(a, k, i, &mut seen);
                        Justification::Split(a, shift_ref(b, k, i, &mut seen))
                    }
                    j => j.clone(),
                };
                if m == pf {
                    continue;
                }
                total += 1;
                if check_theorem(&m, &conn, &rules).is_err() {
                    caught += 1;
                } else {
                    replay(&m, 2, 5).unwrap_or_else(|e| panic!("accepted mutant of theorem {id} line {}: {e}", i + 1));
                }
            }
        }
    }
    assert!(caught * 100 >= total * 95, "caught {caught}/{total}");
}

#[test]
fn swapped_rule_labels_are_caught_or_harmless() {
    let rules = shipped().rules();
    let ids: Vec<u32> = rules.keys().copied().collect();
    for (id, pf, _) in theorems() {
        for i in 0..pf.lines.len() {
            let Justification::Step(Step::Iep { rule, refs }) = &pf.lines[i].just else { continue };
            let mut m = pf.clone();
            let other = ids[(ids.iter().position(|x| x == rule).unwrap() + 1) % ids.len()];
            m.lines[i].just = Justification::Step(Step::Iep { rule: other, refs: refs.clone() });
            if check_proof(&m, &rules).is_ok() {
                replay(&m, 2, 5).unwrap_or_else(|e| panic!("accepted mutant of theorem {id} line {}: {e}", i + 1));
            }
        }
    }
}

#[test]
fn altered_statements_fail_at_their_line() {
    let rules = shipped().rules();
    for (id, pf, _) in theorems() {
        let last = pf.lines.len() - 1;
        let mut m = pf.clone();
        m.lines[last].stmt.ap = if m.lines[last].stmt.ap == pecr::Ap::Typen { pecr::Ap::Eqn } else { pecr::Ap::Typen };
        let err = check_proof(&m, &rules).expect_err("altered conclusion accepted");
        assert_eq!(err.line(), Some(last + 1), "theorem {id}: {err}");
    }
}

#[test]
fn replay_oracle_detects_false_lines() {
    use pecr::kernel::parse_rule_text;
    use pecr::prover::Line;
    let target = parse_rule_text("typen [a] []\ntypen [b] []\n-----\ntypen [a] []").unwrap();
    let bogus = parse_rule_text("typen [a] []\ntypen [b] []\n-----\nadd [a b] [c]").unwrap();
    let mut lines: Vec<Line> = target.premise.rows.iter().map(|s| Line { stmt: *s, just: Justification::Premise }).collect();
    lines.push(Line { stmt: bogus.conclusion, just: Justification::Step(Step::Iep { rule: 1, refs: vec![0, 1] }) });
    let pf = Proof { target, lines };
    assert!(replay(&pf, 2, 5).unwrap_err().contains("derived line 1"));
}

use pecr::conjecture::parse_groups;
use pecr::corpus::{parse_corpus, Kind};
use pecr::kernel::parse_rule_text;
use pecr::pipeline::{run, PipelineConfig};
use pecr::prover::KnowledgeBase;
use pecr::structure::structurally_equivalent;
use pecr::MachParams;

// One-row groups with the name sequence fixed per shape; the acceptance
// target runs the unconstrained alphabet.
const ONE_ROW: &str = "group 1 names=add,add\ngroup 1 names=mult,mult\ngroup 1 names=eqn,eqn\ngroup 1 names=lt,le\n";

fn smoke() -> pecr::pipeline::Report {
    let mach = MachParams::default();
    let groups = parse_groups(ONE_ROW, &mach).unwrap();
    run(&PipelineConfig::new(mach, groups))
}

fn has(kb: &KnowledgeBase, text: &str) -> bool {
    let r = parse_rule_text(text).unwrap();
    kb.rules.iter().any(|(id, x)| {
        matches!(kb.class[id].kind(), Kind::Axiom | Kind::Theorem) && structurally_equivalent(x, &r, true)
    })
}

#[test]
fn one_row_groups_regenerate_the_basic_rules() {
    let r = smoke();
    assert!(r.converged);
    for text in [
        "add [a b] [c]\n-----\nadd [b a] [d]",
        "mult [a b] [c]\n-----\nmult [b a] [d]",
        "eqn [a b] []\n-----\neqn [b a] []",
        "lt [a b] []\n-----\nle [a b] []",
    ] {
        assert!(has(&r.kb, text), "missing {text:?}");
    }
    let closure = parse_rule_text("add [a b] [c]\n-----\nadd [c b] [d]").unwrap();
    assert!(r.kb.find(&closure).is_none());
    assert!(r.iterations[0].rejected > 0);
    r.kb.validate().unwrap();

    let text = r.to_string();
    let back = parse_corpus(&text, 26).unwrap();
    assert_eq!(back.trailer, Some(back.tally()));
    assert_eq!(back.entries.len(), r.kb.rules.len());
    assert_eq!(text, smoke().to_string(), "reruns must be byte-identical");
}

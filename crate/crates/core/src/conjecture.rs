//! Template enumeration, name instantiation and conjecture filtering.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::kernel::{render_rule_text, Ap, Constant, Iep, MachParams, NX};
use crate::par;
use crate::semantics::{soundness_check, SoundnessError, Verdict};
use crate::structure::{canonicalize, materialize, pe_integrity, BinaryTemplate, Cell, PeReject, Tag, TemplateMember, WIDTH};

/// Constraint on the program-name column of a group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NameConstraint {
    Any,
    /// One AP per row, conclusion last.
    Explicit(Vec<Ap>),
    /// Repetition pattern such as `AAB`: equal letters get equal names,
    /// distinct letters distinct names.
    Pattern(Vec<u8>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplateGroup {
    pub premise_rows: usize,
    pub names: NameConstraint,
    /// Names available to unconstrained and pattern rows.
    pub alphabet: Vec<Ap>,
    pub budget: Option<usize>,
}

impl TemplateGroup {
    pub fn new(premise_rows: usize) -> TemplateGroup {
        TemplateGroup { premise_rows, names: NameConstraint::Any, alphabet: Ap::ALL.to_vec(), budget: None }
    }

    pub fn with_names(mut self, names: &[Ap]) -> TemplateGroup {
        self.names = NameConstraint::Explicit(names.to_vec());
        self
    }

    pub fn rows(&self) -> usize {
        self.premise_rows + 1
    }

    fn explicit(&self) -> Option<&[Ap]> {
        match &self.names {
            NameConstraint::Explicit(n) => Some(n),
            _ => None,
        }
    }
}

impl fmt::Display for TemplateGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "group {}", self.premise_rows)?;
        match &self.names {
            NameConstraint::Any => {}
            NameConstraint::Explicit(n) => {
                let n: Vec<&str> = n.iter().map(|a| a.name()).collect();
                write!(f, " names={}", n.join(","))?;
            }
            NameConstraint::Pattern(p) => write!(f, " pattern={}", String::from_utf8_lossy(p))?,
        }
        if self.alphabet != Ap::ALL {
            let n: Vec<&str> = self.alphabet.iter().map(|a| a.name()).collect();
            write!(f, " alphabet={}", n.join(","))?;
        }
        if let Some(b) = self.budget {
            write!(f, " budget={b}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct GroupParseError {
    pub line: usize,
    pub msg: String,
}

fn parse_names(s: &str) -> Option<Vec<Ap>> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            Ap::from_name(t).or_else(|| t.parse::<u32>().ok().and_then(Ap::from_label))
        })
        .collect()
}

/// Parses a group file: `group <rows> [names=a,b|pattern=AAB] [alphabet=a,b] [budget=n]`,
/// `#` comments and blank lines allowed.
pub fn parse_groups(text: &str, mach: &MachParams) -> Result<Vec<TemplateGroup>, GroupParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let err = |msg: String| GroupParseError { line: i + 1, msg };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut toks = line.split_whitespace();
        if toks.next() != Some("group") {
            return Err(err("expected `group`".into()));
        }
        let rows: usize = toks.next().and_then(|t| t.parse().ok()).ok_or_else(|| err("expected premise row count".into()))?;
        if rows > mach.max_premise_len {
            return Err(err(format!("{rows} premise rows exceeds maximum {}", mach.max_premise_len)));
        }
        let mut g = TemplateGroup::new(rows);
        for t in toks {
            let (k, v) = t.split_once('=').ok_or_else(|| err(format!("bad option `{t}`")))?;
            match k {
                "names" => {
                    let n = parse_names(v).ok_or_else(|| err(format!("unknown name in `{v}`")))?;
                    if n.len() != rows + 1 {
                        return Err(err(format!("names lists {} rows, group has {}", n.len(), rows + 1)));
                    }
                    if n[..rows].contains(&Ap::False) {
                        return Err(err("false allowed only as the conclusion".into()));
                    }
                    g.names = NameConstraint::Explicit(n);
                }
                "pattern" => {
                    if v.len() != rows + 1 || !v.bytes().all(|b| b.is_ascii_alphabetic()) {
                        return Err(err(format!("pattern `{v}` must have {} letters", rows + 1)));
                    }
                    g.names = NameConstraint::Pattern(v.bytes().collect());
                }
                "alphabet" => {
                    let n = parse_names(v).ok_or_else(|| err(format!("unknown name in `{v}`")))?;
                    g.alphabet = n.into_iter().filter(|a| *a != Ap::False).collect();
                }
                "budget" => g.budget = Some(v.parse().map_err(|_| err(format!("bad budget `{v}`")))?),
                _ => return Err(err(format!("unknown option `{k}`"))),
            }
        }
        out.push(g);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplateEnumeration {
    pub templates: Vec<BinaryTemplate>,
    pub truncated: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Choice {
    Free,
    Block(usize),
    Const(Constant),
}

struct Enumerator<'a> {
    cells: Vec<Cell>,
    rows: usize,
    budget: usize,
    out: &'a mut Vec<BinaryTemplate>,
    truncated: bool,
}

impl Enumerator<'_> {
    fn run(&mut self, k: usize, assign: &mut Vec<Choice>, blocks: usize) {
        if self.truncated {
            return;
        }
        if k == self.cells.len() {
            if let Some(t) = self.build(assign, blocks) {
                if self.out.len() == self.budget {
                    self.truncated = true;
                    return;
                }
                self.out.push(t);
            }
            return;
        }
        let (r, c) = self.cells[k];
        let output = c >= NX;
        let conclusion = r + 1 == self.rows;
        let mut choices = vec![Choice::Free];
        if !output {
            choices.extend((0..blocks).map(Choice::Block));
        }
        // A conclusion input opening a block would be absent from the premise.
        if !conclusion {
            choices.push(Choice::Block(blocks));
        }
        if !output {
            choices.extend([Constant::Zero, Constant::One, Constant::Mnat].map(Choice::Const));
        }
        for ch in choices {
            assign.push(ch);
            let nb = if ch == Choice::Block(blocks) { blocks + 1 } else { blocks };
            self.run(k + 1, assign, nb);
            assign.pop();
        }
    }

    fn build(&self, assign: &[Choice], blocks: usize) -> Option<BinaryTemplate> {
        let mut var_cells = vec![Vec::new(); blocks];
        let mut const_cells: Vec<(Constant, Vec<Cell>)> = Vec::new();
        for (&cell, &ch) in self.cells.iter().zip(assign) {
            match ch {
                Choice::Free => {}
                Choice::Block(b) => var_cells[b].push(cell),
                Choice::Const(k) => match const_cells.iter_mut().find(|(c, _)| *c == k) {
                    Some((_, v)) => v.push(cell),
                    None => const_cells.push((k, vec![cell])),
                },
            }
        }
        if var_cells.iter().any(|v| v.len() < 2) {
            return None;
        }
        let members = var_cells
            .into_iter()
            .map(|cells| TemplateMember { tag: Tag::Var, cells })
            .chain(const_cells.into_iter().map(|(k, cells)| TemplateMember { tag: Tag::Const(k), cells }))
            .collect();
        Some(canonicalize(&BinaryTemplate { rows: self.rows, members, names: None }))
    }
}

fn slot_used(ap: Ap, c: usize) -> bool {
    if c < NX {
        c < ap.in_arity()
    } else {
        c - NX < ap.out_arity()
    }
}

/// All binding templates for the group's shape in a fixed depth-first
/// order. Slots that an explicit name column leaves unused are skipped, as
/// is the conclusion output (always fresh).
pub fn enumerate_templates(g: &TemplateGroup, mach: &MachParams) -> TemplateEnumeration {
    let rows = g.rows();
    let mut cells = Vec::new();
    for r in 0..rows {
        for c in 0..WIDTH {
            if r + 1 == rows && c >= NX {
                continue;
            }
            if let Some(names) = g.explicit() {
                if !slot_used(names[r], c) {
                    continue;
                }
            }
            cells.push((r, c));
        }
    }
    let mut out = Vec::new();
    let mut e = Enumerator { cells, rows, budget: g.budget.unwrap_or(mach.template_budget), out: &mut out, truncated: false };
    e.run(0, &mut Vec::new(), 0);
    let truncated = e.truncated;
    TemplateEnumeration { templates: out, truncated }
}

fn row_admits(t: &BinaryTemplate, r: usize, ap: Ap) -> bool {
    t.members.iter().flat_map(|m| m.cells.iter()).filter(|(rr, _)| *rr == r).all(|&(_, c)| slot_used(ap, c))
}

/// Name columns compatible with the template's slot usage, in
/// lexicographic order of AP labels, and the rules they materialize.
pub fn instantiate_names(t: &BinaryTemplate, names: &NameConstraint, alphabet: &[Ap]) -> Vec<(Vec<Ap>, Iep)> {
    let rows = t.rows;
    let mut alphabet = alphabet.to_vec();
    alphabet.sort();
    alphabet.dedup();
    let choices: Vec<Vec<Ap>> = (0..rows)
        .map(|r| {
            let mut opts = alphabet.clone();
            if r + 1 == rows {
                opts.insert(0, Ap::False);
            }
            opts.retain(|&ap| row_admits(t, r, ap));
            opts
        })
        .collect();
    let mut seqs: Vec<Vec<Ap>> = vec![Vec::new()];
    for opts in &choices {
        seqs = seqs.into_iter().flat_map(|s| opts.iter().map(move |&a| [s.clone(), vec![a]].concat())).collect();
    }
    seqs.retain(|s| match names {
        NameConstraint::Any => true,
        NameConstraint::Explicit(n) => s == n,
        NameConstraint::Pattern(p) => {
            (0..rows).all(|i| (0..rows).all(|j| (p[i] == p[j]) == (s[i] == s[j])))
                && (!s[..rows - 1].contains(&Ap::False))
        }
    });
    if let NameConstraint::Explicit(n) = names {
        if seqs.is_empty() && n.len() == rows && (0..rows).all(|r| row_admits(t, r, n[r])) {
            seqs.push(n.clone());
        }
    }
    seqs.into_iter().filter_map(|s| materialize(t, &s).map(|r| (s, r))).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rejection {
    Integrity(PeReject),
    Unsound,
    Vacuous,
    OverCap,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::Integrity(r) => write!(f, "integrity {r}"),
            Rejection::Unsound => f.write_str("unsound"),
            Rejection::Vacuous => f.write_str("vacuous"),
            Rejection::OverCap => f.write_str("over enumeration cap"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Provisional,
    Sound,
    Rejected(Rejection),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conjecture {
    pub iep: Iep,
    pub template_id: usize,
    pub names: Vec<Ap>,
    pub status: Status,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GenerationStats {
    pub templates: usize,
    pub truncated: bool,
    pub candidates: usize,
    pub duplicates: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Generation {
    pub survivors: Vec<Conjecture>,
    pub rejected: Vec<Conjecture>,
    pub stats: GenerationStats,
}

fn classify(r: &Iep, mach: &MachParams) -> Status {
    if let Err(e) = pe_integrity(r, mach) {
        return Status::Rejected(Rejection::Integrity(e));
    }
    match soundness_check(r, mach) {
        Ok(v) => match v.verdict {
            Verdict::Sound => Status::Sound,
            Verdict::Unsound => Status::Rejected(Rejection::Unsound),
            Verdict::Vacuous => Status::Rejected(Rejection::Vacuous),
        },
        Err(SoundnessError::EnumerationCap { .. }) => Status::Rejected(Rejection::OverCap),
        Err(SoundnessError::Eval(_)) => Status::Rejected(Rejection::Integrity(PeReject::Malformed)),
    }
}

/// Templates → names → integrity → soundness → dedup, in enumeration order.
pub fn generate_conjectures(g: &TemplateGroup, mach: &MachParams) -> Generation {
    let e = enumerate_templates(g, mach);
    let mut candidates = Vec::new();
    for (tid, t) in e.templates.iter().enumerate() {
        for (names, iep) in instantiate_names(t, &g.names, &g.alphabet) {
            candidates.push(Conjecture { iep, template_id: tid, names, status: Status::Provisional });
        }
    }
    let statuses = par::map(mach.parallel, &candidates, |c| classify(&c.iep, mach));
    let mut gen = Generation {
        stats: GenerationStats { templates: e.templates.len(), truncated: e.truncated, candidates: candidates.len(), duplicates: 0 },
        ..Generation::default()
    };
    let mut seen = HashSet::new();
    for (mut c, s) in candidates.into_iter().zip(statuses) {
        c.status = s;
        if c.status != Status::Sound {
            gen.rejected.push(c);
        } else if seen.insert(render_rule_text(&c.iep.canonical())) {
            gen.survivors.push(c);
        } else {
            gen.stats.duplicates += 1;
        }
    }
    gen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::parse_rule_text;
    use crate::structure::binary_template;

    fn texts(g: &Generation) -> Vec<String> {
        g.survivors.iter().map(|c| render_rule_text(&c.iep)).collect()
    }

    #[test]
    fn one_row_templates_cover_commutativity_shapes() {
        let e = enumerate_templates(&TemplateGroup::new(1), &MachParams::default());
        assert!(!e.truncated);
        let nat2a = binary_template(&parse_rule_text("add [a b] [c]\n-----\nadd [b a] [d]").unwrap()).shape_only();
        let nat1b = binary_template(&parse_rule_text("eqn [a b] []\n-----\neqn [b a] []").unwrap()).shape_only();
        assert!(e.templates.contains(&nat2a));
        assert!(e.templates.contains(&nat1b));
        assert_eq!(e, enumerate_templates(&TemplateGroup::new(1), &MachParams::default()));
        let set: HashSet<_> = e.templates.iter().collect();
        assert_eq!(set.len(), e.templates.len());
    }

    #[test]
    fn empty_premise_templates_are_constant_only() {
        let e = enumerate_templates(&TemplateGroup::new(0), &MachParams::default());
        assert!(e.templates.iter().all(|t| t.members.iter().all(|m| m.tag != Tag::Var)));
        let ord4 = binary_template(&parse_rule_text("-----\nlt [0 1] []").unwrap()).shape_only();
        assert!(e.templates.contains(&ord4));
    }

    #[test]
    fn instantiation_examples() {
        let t = binary_template(&parse_rule_text("add [a b] [c]\n-----\nadd [b a] [d]").unwrap()).shape_only();
        let render = |n: &[Ap]| {
            instantiate_names(&t, &NameConstraint::Explicit(n.to_vec()), &Ap::ALL)
                .first()
                .map(|(_, r)| render_rule_text(r))
        };
        assert_eq!(render(&[Ap::Add, Ap::Add]).unwrap(), "add [a b] [c]\n-----\nadd [b a] [d]");
        assert_eq!(render(&[Ap::Mult, Ap::Mult]).unwrap(), "mult [a b] [c]\n-----\nmult [b a] [d]");
        assert_eq!(render(&[Ap::Eqn, Ap::Eqn]).unwrap(), "eqn [a b] []\n-----\neqn [b a] []");
        assert!(render(&[Ap::Typen, Ap::Add]).is_none());
    }

    #[test]
    fn add_group_survivors() {
        let g = TemplateGroup::new(1).with_names(&[Ap::Add, Ap::Add]);
        let m = MachParams::default();
        let gen = generate_conjectures(&g, &m);
        let s = texts(&gen);
        assert!(s.contains(&"add [a b] [c]\n-----\nadd [b a] [d]".to_string()));
        let bad = "add [a b] [c]\n-----\nadd [c b] [d]";
        assert!(!s.contains(&bad.to_string()));
        assert!(gen
            .rejected
            .iter()
            .any(|c| render_rule_text(&c.iep) == bad && c.status == Status::Rejected(Rejection::Unsound)));
        assert_eq!(gen, generate_conjectures(&g, &m));
    }

    #[test]
    fn empty_premise_group_yields_zero_lt_one() {
        let gen = generate_conjectures(&TemplateGroup::new(0), &MachParams::default());
        assert!(texts(&gen).contains(&"-----\nlt [0 1] []".to_string()));
        for c in &gen.survivors {
            assert_eq!(pe_integrity(&c.iep, &MachParams::default()), Ok(()));
        }
    }

    #[test]
    fn sequential_matches_parallel() {
        let g = TemplateGroup::new(1).with_names(&[Ap::Lt, Ap::Le]);
        let m = MachParams::default();
        let seq = MachParams { parallel: false, ..m.clone() };
        assert_eq!(generate_conjectures(&g, &m), generate_conjectures(&g, &seq));
    }

    #[test]
    fn group_file_parsing() {
        let m = MachParams::default();
        let gs = parse_groups("# groups\ngroup 1 names=add,add budget=10\n\ngroup 2 pattern=AAB\ngroup 0 alphabet=lt,eqn\n", &m).unwrap();
        assert_eq!(gs.len(), 3);
        assert_eq!(gs[0].names, NameConstraint::Explicit(vec![Ap::Add, Ap::Add]));
        assert_eq!(gs[0].budget, Some(10));
        assert_eq!(gs[1].names, NameConstraint::Pattern(b"AAB".to_vec()));
        assert_eq!(gs[2].alphabet, vec![Ap::Lt, Ap::Eqn]);
        assert_eq!(parse_groups(&gs[0].to_string(), &m).unwrap()[0], gs[0]);
        assert_eq!(parse_groups("group 1 names=add\n", &m).unwrap_err().line, 1);
        assert!(parse_groups("group 9\n", &m).is_err());
        assert!(parse_groups("grp 1\n", &m).is_err());
    }

    #[test]
    fn pattern_constraint() {
        let t = binary_template(&parse_rule_text("add [a b] [c]\n-----\nadd [b a] [d]").unwrap()).shape_only();
        let seqs = instantiate_names(&t, &NameConstraint::Pattern(b"AA".to_vec()), &Ap::ALL);
        assert!(seqs.iter().all(|(s, _)| s[0] == s[1]));
        assert!(seqs.iter().any(|(s, _)| s[0] == Ap::Eqn));
    }

    #[test]
    fn budget_truncates() {
        let mut g = TemplateGroup::new(2);
        g.budget = Some(3);
        let e = enumerate_templates(&g, &MachParams::default());
        assert_eq!(e.templates.len(), 3);
        assert!(e.truncated);
    }
}

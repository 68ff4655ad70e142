//! I/O matrix decomposition into single-label binding matrices, binary
//! templates, structural equivalence and program-extension integrity tests.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::kernel::{Ap, Constant, Iep, IoViolation, Label, MachParams, Program, Statement, NX, NY};

/// Width of an I/O matrix row.
pub const WIDTH: usize = NX + NY;

/// A program's I/O slots, one row per statement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IoMatrix {
    pub rows: Vec<[Label; WIDTH]>,
}

impl IoMatrix {
    pub fn of(p: &Program) -> IoMatrix {
        IoMatrix { rows: p.rows.iter().map(io_row).collect() }
    }

    pub fn to_ints(&self, nvar: u32) -> Result<Vec<Vec<u32>>, crate::kernel::KernelError> {
        self.rows.iter().map(|r| r.iter().map(|l| l.encode(nvar)).collect()).collect()
    }
}

fn io_row(s: &Statement) -> [Label; WIDTH] {
    let mut r = [Label::Null; WIDTH];
    r[..NX].copy_from_slice(&s.x);
    r[NX..].copy_from_slice(&s.y);
    r
}

pub type Cell = (usize, usize);

/// The single-label part of an I/O matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelMatrix {
    pub label: Label,
    pub cells: Vec<Cell>,
    pub binding: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BindingDecomposition {
    pub shape: (usize, usize),
    /// One member per distinct nonzero label, in first-appearance order.
    pub members: Vec<LabelMatrix>,
}

impl BindingDecomposition {
    pub fn binding(&self) -> impl Iterator<Item = &LabelMatrix> {
        self.members.iter().filter(|m| m.binding)
    }

    /// Matrix sum of all members.
    pub fn sum(&self) -> IoMatrix {
        let mut rows = vec![[Label::Null; WIDTH]; self.shape.0];
        for m in &self.members {
            for &(r, c) in &m.cells {
                rows[r][c] = m.label;
            }
        }
        IoMatrix { rows }
    }
}

/// Splits an I/O matrix into one matrix per distinct label. A variable
/// matrix is binding when it has at least two entries; a constant matrix
/// always is.
pub fn decompose(m: &IoMatrix) -> BindingDecomposition {
    let mut members: Vec<LabelMatrix> = Vec::new();
    for (r, row) in m.rows.iter().enumerate() {
        for (c, &l) in row.iter().enumerate() {
            if l.is_null() {
                continue;
            }
            match members.iter_mut().find(|x| x.label == l) {
                Some(x) => x.cells.push((r, c)),
                None => members.push(LabelMatrix { label: l, cells: vec![(r, c)], binding: false }),
            }
        }
    }
    for x in &mut members {
        x.binding = x.label.is_const() || x.cells.len() >= 2;
    }
    BindingDecomposition { shape: (m.rows.len(), WIDTH), members }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    Var,
    Const(Constant),
}

/// A binarized binding matrix: its nonzero cells and whether it binds a
/// variable or a particular constant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TemplateMember {
    pub tag: Tag,
    pub cells: Vec<Cell>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryTemplate {
    pub rows: usize,
    pub members: Vec<TemplateMember>,
    /// Program-name column, when known.
    pub names: Option<Vec<Ap>>,
}

impl BinaryTemplate {
    /// Whether the member cells satisfy the member-size invariant.
    pub fn is_well_formed(&self) -> bool {
        self.members.iter().all(|m| match m.tag {
            Tag::Var => m.cells.len() >= 2,
            Tag::Const(_) => !m.cells.is_empty(),
        })
    }

    /// Template without its name column.
    pub fn shape_only(&self) -> BinaryTemplate {
        BinaryTemplate { rows: self.rows, members: self.members.clone(), names: None }
    }
}

impl fmt::Display for BinaryTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rows={}", self.rows)?;
        for m in &self.members {
            let tag = match m.tag {
                Tag::Var => "var".to_string(),
                Tag::Const(c) => format!("const:{}", c.token()),
            };
            write!(f, " {tag}{{")?;
            for (i, (r, c)) in m.cells.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "({r},{c})")?;
            }
            f.write_str("}")?;
        }
        if let Some(names) = &self.names {
            let n: Vec<&str> = names.iter().map(|a| a.name()).collect();
            write!(f, " names=[{}]", n.join(","))?;
        }
        Ok(())
    }
}

/// Sorts members (and their cells) into the canonical total order.
pub fn canonicalize(t: &BinaryTemplate) -> BinaryTemplate {
    let mut members: Vec<TemplateMember> = t
        .members
        .iter()
        .map(|m| {
            let mut cells = m.cells.clone();
            cells.sort_unstable();
            cells.dedup();
            TemplateMember { tag: m.tag, cells }
        })
        .collect();
    members.sort();
    BinaryTemplate { rows: t.rows, members, names: t.names.clone() }
}

pub fn program_template(p: &Program) -> BinaryTemplate {
    let d = decompose(&IoMatrix::of(p));
    let members = d
        .binding()
        .map(|m| TemplateMember {
            tag: match m.label {
                Label::Const(c) => Tag::Const(c),
                _ => Tag::Var,
            },
            cells: m.cells.clone(),
        })
        .collect();
    canonicalize(&BinaryTemplate { rows: p.len(), members, names: Some(p.rows.iter().map(|s| s.ap).collect()) })
}

/// Canonical binary binding template of `conc[premise conclusion]`.
pub fn binary_template(r: &Iep) -> BinaryTemplate {
    program_template(&r.concatenation())
}

/// Repetition pattern of a name column: each name replaced by the index of
/// its first occurrence.
pub fn name_pattern(names: &[Ap]) -> Vec<usize> {
    let mut seen: Vec<Ap> = Vec::new();
    names
        .iter()
        .map(|a| match seen.iter().position(|b| b == a) {
            Some(i) => i,
            None => {
                seen.push(*a);
                seen.len() - 1
            }
        })
        .collect()
}

/// Weak mode compares binding templates; strong mode also compares the
/// repetition pattern of the program names.
pub fn structurally_equivalent(r1: &Iep, r2: &Iep, strong: bool) -> bool {
    let (t1, t2) = (binary_template(r1), binary_template(r2));
    if t1.shape_only() != t2.shape_only() {
        return false;
    }
    !strong || name_pattern(t1.names.as_deref().unwrap_or(&[])) == name_pattern(t2.names.as_deref().unwrap_or(&[]))
}

/// Builds the rule whose binding template is `t` and whose name column is
/// `names`: one fresh variable per variable member, the named constant per
/// constant member, fresh singleton variables in the remaining used slots.
/// Returns `None` when a member cell falls in a slot the arity leaves unused
/// or a constant lands in an output slot.
pub fn materialize(t: &BinaryTemplate, names: &[Ap]) -> Option<Iep> {
    if names.len() != t.rows || t.rows == 0 {
        return None;
    }
    let used = |r: usize, c: usize| {
        let ap = names[r];
        if c < NX {
            c < ap.in_arity()
        } else {
            c - NX < ap.out_arity()
        }
    };
    let mut grid: Vec<[Option<usize>; WIDTH]> = vec![[None; WIDTH]; t.rows];
    for (i, m) in t.members.iter().enumerate() {
        for &(r, c) in &m.cells {
            if r >= t.rows || c >= WIDTH || !used(r, c) || grid[r][c].is_some() {
                return None;
            }
            if matches!(m.tag, Tag::Const(_)) && c >= NX {
                return None;
            }
            grid[r][c] = Some(i);
        }
    }
    let mut member_label: Vec<Option<Label>> = vec![None; t.members.len()];
    let mut next = 0u32;
    let mut fresh = || {
        next += 1;
        Label::Var(next)
    };
    let mut rows = Vec::with_capacity(t.rows);
    for (r, &ap) in names.iter().enumerate() {
        let mut s = Statement { ap, x: [Label::Null; NX], y: [Label::Null; NY] };
        for c in 0..WIDTH {
            if !used(r, c) {
                continue;
            }
            let l = match grid[r][c] {
                Some(i) => match t.members[i].tag {
                    Tag::Const(k) => Label::Const(k),
                    Tag::Var => *member_label[i].get_or_insert_with(&mut fresh),
                },
                None => fresh(),
            };
            if c < NX {
                s.x[c] = l;
            } else {
                s.y[c - NX] = l;
            }
        }
        rows.push(s);
    }
    let conclusion = rows.pop()?;
    Some(Iep::new(rows, conclusion))
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PeReject {
    #[error("(i) I/O dependency: {0}")]
    IoDependency(IoViolation),
    #[error("(ii) conclusion output not fresh")]
    NotFresh,
    #[error("(iii) conclusion input absent from the premise")]
    UnboundConclusionInput(Label),
    #[error("(iv) premise longer than {max}")]
    TooLong { len: usize, max: usize },
    #[error("malformed slots")]
    Malformed,
}

/// Program-extension structural integrity.
pub fn pe_integrity(r: &Iep, mach: &MachParams) -> Result<(), PeReject> {
    let conc = r.concatenation();
    if !conc.rows.iter().all(Statement::check_slots) {
        return Err(PeReject::Malformed);
    }
    let premise_labels: HashSet<Label> = r.premise.rows.iter().flat_map(|s| s.slots()).collect();
    let mut primary: HashSet<Label> = r.premise.primary_inputs().into_iter().collect();
    let unbound: Vec<Label> =
        r.conclusion.inputs().iter().copied().filter(|l| l.is_var() && !premise_labels.contains(l)).collect();
    primary.extend(unbound.iter().copied());
    let violations = crate::kernel::validate_io_dependency(&conc.rows, &primary);
    let last = conc.rows.len() - 1;
    // Reusing a premise label as the conclusion output is reported as (ii).
    if let Some(v) = violations.iter().find(|v| v.row < last).or(violations.first()) {
        let stale = v.row == last && r.conclusion.outputs().iter().any(|l| premise_labels.contains(l));
        return Err(if stale { PeReject::NotFresh } else { PeReject::IoDependency(*v) });
    }
    if r.conclusion.outputs().iter().any(|l| premise_labels.contains(l)) {
        return Err(PeReject::NotFresh);
    }
    if let Some(&l) = unbound.first() {
        return Err(PeReject::UnboundConclusionInput(l));
    }
    if r.premise.len() > mach.max_premise_len {
        return Err(PeReject::TooLong { len: r.premise.len(), max: mach.max_premise_len });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{parse_rule_text, Label::Var};

    fn rule(t: &str) -> Iep {
        parse_rule_text(t).unwrap()
    }

    const NAT_2A: &str = "add [a b] [c]\n-----\nadd [b a] [d]";
    const NAT_2B: &str = "add [a b] [c]\nadd [b a] [d]\n-----\neqn [d c] []";

    #[test]
    fn decompose_commutativity() {
        let r = rule(NAT_2A);
        let d = decompose(&IoMatrix::of(&r.concatenation()));
        assert_eq!(d.members.len(), 4);
        let flags: Vec<(Label, bool)> = d.members.iter().map(|m| (m.label, m.binding)).collect();
        assert_eq!(flags, vec![(Var(1), true), (Var(2), true), (Var(3), false), (Var(4), false)]);
        assert_eq!(d.members[0].cells, vec![(0, 0), (1, 1)]);
        assert_eq!(d.members[1].cells, vec![(0, 1), (1, 0)]);

        let d = decompose(&IoMatrix::of(&rule(NAT_2B).concatenation()));
        assert_eq!(d.members.len(), 4);
        assert!(d.members.iter().all(|m| m.binding));
    }

    #[test]
    fn constant_member_binds() {
        let r = rule("typen [a] []\n-----\nadd [0 a] [b]");
        let d = decompose(&IoMatrix::of(&r.concatenation()));
        let zero = d.members.iter().find(|m| m.label == Label::Const(Constant::Zero)).unwrap();
        assert_eq!(zero.cells.len(), 1);
        assert!(zero.binding);
    }

    #[test]
    fn sum_reconstructs_matrix() {
        let r = rule("add [a b] [d]\nadd [d c] [x]\nadd [b c] [e]\n-----\nadd [a e] [y]");
        let m = IoMatrix::of(&r.concatenation());
        assert_eq!(decompose(&m).sum(), m);
    }

    #[test]
    fn template_equivalences() {
        assert_eq!(binary_template(&rule(NAT_2A)).shape_only(), binary_template(&rule("mult [a b] [c]\n-----\nmult [b a] [d]")).shape_only());
        assert_ne!(binary_template(&rule(NAT_2A)).shape_only(), binary_template(&rule(NAT_2B)).shape_only());
        let nat1c = rule("eqn [a b] []\neqn [b c] []\n-----\neqn [a c] []");
        let ord3 = rule("lt [a b] []\nlt [b c] []\n-----\nlt [a c] []");
        assert!(structurally_equivalent(&nat1c, &ord3, true));
        assert!(structurally_equivalent(&rule(NAT_2A), &rule("eqn [a b] []\n-----\neqn [b a] []"), false));
    }

    #[test]
    fn canonicalize_is_idempotent_and_order_free() {
        let t = binary_template(&rule(NAT_2B));
        assert_eq!(canonicalize(&t), t);
        let mut shuffled = t.clone();
        shuffled.members.reverse();
        assert_eq!(canonicalize(&shuffled), t);
        let swapped = rule("add [b a] [c]\n-----\nadd [a b] [d]");
        assert_eq!(binary_template(&swapped), binary_template(&rule(NAT_2A)));
    }

    #[test]
    fn materialize_roundtrip() {
        let t = binary_template(&rule(NAT_2A));
        let back = materialize(&t, &[Ap::Add, Ap::Add]).unwrap();
        assert_eq!(back, rule(NAT_2A));
        let eqn = materialize(&t, &[Ap::Eqn, Ap::Eqn]).unwrap();
        assert_eq!(crate::kernel::render_rule_text(&eqn), "eqn [a b] []\n-----\neqn [b a] []");
        assert!(materialize(&t, &[Ap::Typen, Ap::Add]).is_none());
    }

    #[test]
    fn pe_integrity_clauses() {
        let m = MachParams::default();
        let nat9b = rule("mult [a b] [u]\nmult [a c] [v]\nadd [u v] [y]\nadd [b c] [d]\n-----\nmult [a d] [x]");
        assert_eq!(pe_integrity(&nat9b, &m), Ok(()));
        let unbound = rule("typen [a] []\n-----\neqn [a b] []");
        assert!(matches!(pe_integrity(&unbound, &m), Err(PeReject::UnboundConclusionInput(_))));
        let long = rule("typen [a] []\ntypen [a] []\ntypen [a] []\ntypen [a] []\ntypen [a] []\ntypen [a] []\n-----\neqn [a a] []");
        assert!(matches!(pe_integrity(&long, &m), Err(PeReject::TooLong { len: 6, max: 5 })));
        let stale = Iep::new(
            vec![Statement::new(Ap::Add, &[Var(1), Var(2)], &[Var(3)])],
            Statement::new(Ap::Add, &[Var(1), Var(2)], &[Var(3)]),
        );
        assert_eq!(pe_integrity(&stale, &m), Err(PeReject::NotFresh));
    }
}

//! Atomic programs, statements, programs and rules (IEPs), with the
//! line-oriented rule text format and the integer-matrix encoding.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

/// Input slot width of every statement.
pub const NX: usize = 2;
/// Output slot width of every statement.
pub const NY: usize = 1;

/// Atomic program names. The discriminant is the integer program-name label;
/// `False` (0) is reserved for the falsity statement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ap {
    False = 0,
    Typen = 1,
    Eqn = 2,
    Lt = 3,
    Add = 4,
    Mult = 5,
    Le = 6,
    Trich = 7,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ApKind {
    Falsity,
    TypeCheck,
    RelationCheck,
    Computation,
    Disjunction,
}

/// One operand of a disjunction: the operand program applied to the
/// disjunction's own inputs in the given order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Operand {
    pub ap: Ap,
    pub args: [usize; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ApSignature {
    pub ap: Ap,
    pub name: &'static str,
    pub in_arity: usize,
    pub out_arity: usize,
    pub kind: ApKind,
    pub operands: Option<[Operand; 2]>,
}

const SIGNATURES: [ApSignature; 8] = [
    ApSignature { ap: Ap::False, name: "false", in_arity: 0, out_arity: 0, kind: ApKind::Falsity, operands: None },
    ApSignature { ap: Ap::Typen, name: "typen", in_arity: 1, out_arity: 0, kind: ApKind::TypeCheck, operands: None },
    ApSignature { ap: Ap::Eqn, name: "eqn", in_arity: 2, out_arity: 0, kind: ApKind::RelationCheck, operands: None },
    ApSignature { ap: Ap::Lt, name: "lt", in_arity: 2, out_arity: 0, kind: ApKind::RelationCheck, operands: None },
    ApSignature { ap: Ap::Add, name: "add", in_arity: 2, out_arity: 1, kind: ApKind::Computation, operands: None },
    ApSignature { ap: Ap::Mult, name: "mult", in_arity: 2, out_arity: 1, kind: ApKind::Computation, operands: None },
    ApSignature {
        ap: Ap::Le,
        name: "le",
        in_arity: 2,
        out_arity: 0,
        kind: ApKind::Disjunction,
        operands: Some([Operand { ap: Ap::Lt, args: [0, 1] }, Operand { ap: Ap::Eqn, args: [0, 1] }]),
    },
    ApSignature {
        ap: Ap::Trich,
        name: "trich",
        in_arity: 2,
        out_arity: 0,
        kind: ApKind::Disjunction,
        operands: Some([Operand { ap: Ap::Lt, args: [1, 0] }, Operand { ap: Ap::Le, args: [0, 1] }]),
    },
];

impl Ap {
    /// All non-falsity atomic programs in label order.
    pub const ALL: [Ap; 7] = [Ap::Typen, Ap::Eqn, Ap::Lt, Ap::Add, Ap::Mult, Ap::Le, Ap::Trich];

    pub fn signature(self) -> &'static ApSignature {
        &SIGNATURES[self as usize]
    }

    pub fn label(self) -> u32 {
        self as u32
    }

    pub fn from_label(label: u32) -> Option<Ap> {
        SIGNATURES.get(label as usize).map(|s| s.ap)
    }

    pub fn name(self) -> &'static str {
        self.signature().name
    }

    pub fn from_name(name: &str) -> Option<Ap> {
        SIGNATURES.iter().find(|s| s.name == name).map(|s| s.ap)
    }

    pub fn in_arity(self) -> usize {
        self.signature().in_arity
    }

    pub fn out_arity(self) -> usize {
        self.signature().out_arity
    }

    pub fn is_disjunction(self) -> bool {
        self.signature().kind == ApKind::Disjunction
    }
}

impl fmt::Display for Ap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constant {
    Zero,
    One,
    Mnat,
}

impl Constant {
    pub const ALL: [Constant; 3] = [Constant::Zero, Constant::One, Constant::Mnat];

    /// Position in the constant list, starting at 1.
    pub fn index(self) -> u32 {
        match self {
            Constant::Zero => 1,
            Constant::One => 2,
            Constant::Mnat => 3,
        }
    }

    pub fn value(self, mnat: u64) -> u64 {
        match self {
            Constant::Zero => 0,
            Constant::One => 1,
            Constant::Mnat => mnat,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Constant::Zero => "0",
            Constant::One => "1",
            Constant::Mnat => "mnat",
        }
    }

    pub fn from_token(tok: &str) -> Option<Constant> {
        Constant::ALL.into_iter().find(|c| c.token() == tok)
    }
}

/// An I/O slot label: null, a variable, or one of the constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Null,
    Var(u32),
    Const(Constant),
}

impl Label {
    pub fn is_null(self) -> bool {
        self == Label::Null
    }

    pub fn is_var(self) -> bool {
        matches!(self, Label::Var(_))
    }

    pub fn is_const(self) -> bool {
        matches!(self, Label::Const(_))
    }

    /// Integer label: 0 for null, `k` for variable `k`, `nvar + m` for constant `m`.
    pub fn encode(self, nvar: u32) -> Result<u32, KernelError> {
        match self {
            Label::Null => Ok(0),
            Label::Var(k) if k >= 1 && k <= nvar => Ok(k),
            Label::Var(k) => Err(KernelError::VariableOutOfRange { label: k, nvar }),
            Label::Const(c) => Ok(nvar + c.index()),
        }
    }

    pub fn decode(raw: u32, nvar: u32) -> Result<Label, KernelError> {
        match raw {
            0 => Ok(Label::Null),
            k if k <= nvar => Ok(Label::Var(k)),
            k if k == nvar + 1 => Ok(Label::Const(Constant::Zero)),
            k if k == nvar + 2 => Ok(Label::Const(Constant::One)),
            k if k == nvar + 3 => Ok(Label::Const(Constant::Mnat)),
            k => Err(KernelError::LabelOutOfRange { label: k, nvar }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("variable label {label} exceeds nvar = {nvar}")]
    VariableOutOfRange { label: u32, nvar: u32 },
    #[error("integer label {label} is outside 0..={} for nvar = {nvar}", nvar + 3)]
    LabelOutOfRange { label: u32, nvar: u32 },
    #[error("unknown program-name label {0}")]
    UnknownProgramLabel(u32),
    #[error("matrix row {row} has width {width}, expected {expected}")]
    RowWidth { row: usize, width: usize, expected: usize },
    #[error("row {row}: slot usage does not match the arity of {ap}")]
    SlotUsage { row: usize, ap: Ap },
    #[error(transparent)]
    Io(#[from] IoViolation),
}

/// One atomic-program instance `[pn x y]` with fixed-width slots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Statement {
    pub ap: Ap,
    pub x: [Label; NX],
    pub y: [Label; NY],
}

impl Statement {
    pub const FALSE: Statement = Statement { ap: Ap::False, x: [Label::Null; NX], y: [Label::Null; NY] };

    /// Builds a statement from its used input and output labels; unused
    /// trailing slots are null. Panics if the label counts do not match the
    /// arity, which is a programming error.
    pub fn new(ap: Ap, inputs: &[Label], outputs: &[Label]) -> Statement {
        assert_eq!(inputs.len(), ap.in_arity(), "input arity of {ap}");
        assert_eq!(outputs.len(), ap.out_arity(), "output arity of {ap}");
        let mut x = [Label::Null; NX];
        let mut y = [Label::Null; NY];
        x[..inputs.len()].copy_from_slice(inputs);
        y[..outputs.len()].copy_from_slice(outputs);
        Statement { ap, x, y }
    }

    pub fn is_false(&self) -> bool {
        self.ap == Ap::False
    }

    /// Used input slots (by arity).
    pub fn inputs(&self) -> &[Label] {
        &self.x[..self.ap.in_arity()]
    }

    /// Used output slots (by arity).
    pub fn outputs(&self) -> &[Label] {
        &self.y[..self.ap.out_arity()]
    }

    /// All slots, inputs first.
    pub fn slots(&self) -> impl Iterator<Item = Label> + '_ {
        self.x.iter().chain(self.y.iter()).copied()
    }

    pub fn vars(&self) -> impl Iterator<Item = u32> + '_ {
        self.slots().filter_map(|l| match l {
            Label::Var(v) => Some(v),
            _ => None,
        })
    }

    pub fn map_labels(&self, mut f: impl FnMut(Label) -> Label) -> Statement {
        let mut s = *self;
        for l in s.x.iter_mut().chain(s.y.iter_mut()) {
            if !l.is_null() {
                *l = f(*l);
            }
        }
        s
    }

    /// Same program name and inputs; outputs may differ.
    pub fn same_shape(&self, other: &Statement) -> bool {
        self.ap == other.ap && self.x == other.x
    }

    /// The operand statements if this is a disjunction.
    pub fn operands(&self) -> Option<[Statement; 2]> {
        let ops = self.ap.signature().operands?;
        Some(ops.map(|op| Statement::new(op.ap, &[self.x[op.args[0]], self.x[op.args[1]]], &[])))
    }

    /// Checks slot usage against the arity and that outputs are variables.
    pub fn check_slots(&self) -> bool {
        let (ni, no) = (self.ap.in_arity(), self.ap.out_arity());
        self.x.iter().enumerate().all(|(i, l)| (i < ni) != l.is_null())
            && self.y.iter().enumerate().all(|(i, l)| if i < no { l.is_var() } else { l.is_null() })
    }

    pub fn display<'a>(&'a self, names: &'a dyn Fn(u32) -> String) -> StatementDisplay<'a> {
        StatementDisplay { stmt: self, names }
    }
}

pub struct StatementDisplay<'a> {
    stmt: &'a Statement,
    names: &'a dyn Fn(u32) -> String,
}

impl fmt::Display for StatementDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.stmt;
        if s.is_false() {
            return f.write_str("false");
        }
        let fmt_list = |labels: &[Label]| -> String {
            labels
                .iter()
                .map(|l| match *l {
                    Label::Var(v) => (self.names)(v),
                    Label::Const(c) => c.token().to_string(),
                    Label::Null => "_".to_string(),
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        write!(f, "{} [{}] [{}]", s.ap, fmt_list(s.inputs()), fmt_list(s.outputs()))
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.display(&var_name).fmt(f)
    }
}

/// Default variable name: `a`..`z` for 1..=26, `v<k>` beyond.
pub fn var_name(k: u32) -> String {
    if (1..=26).contains(&k) {
        char::from(b'a' + (k - 1) as u8).to_string()
    } else {
        format!("v{k}")
    }
}

/// Which I/O dependency condition failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IoCondition {
    /// Output labels are pairwise distinct.
    A,
    /// Outputs are never constants.
    B,
    /// Inputs are primary inputs or outputs of earlier rows.
    C,
    /// No variable becomes an output after having appeared earlier.
    D,
}

impl fmt::Display for IoCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            IoCondition::A => "a",
            IoCondition::B => "b",
            IoCondition::C => "c",
            IoCondition::D => "d",
        };
        f.write_str(c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("I/O dependency violation ({condition}) at row {row}")]
pub struct IoViolation {
    /// Zero-based row index.
    pub row: usize,
    pub condition: IoCondition,
    pub label: Label,
}

/// Checks the I/O dependency conditions against an explicit primary-input set.
/// Returns every violation in row order; the first one is the reported failure.
pub fn validate_io_dependency(rows: &[Statement], primary_inputs: &HashSet<Label>) -> Vec<IoViolation> {
    let mut violations = Vec::new();
    let mut outputs: HashSet<Label> = HashSet::new();
    let mut seen: HashSet<Label> = primary_inputs.iter().copied().collect();
    for (row, s) in rows.iter().enumerate() {
        for &l in s.inputs() {
            if l.is_var() && !primary_inputs.contains(&l) && !outputs.contains(&l) {
                violations.push(IoViolation { row, condition: IoCondition::C, label: l });
            }
        }
        for &l in s.inputs() {
            if l.is_var() {
                seen.insert(l);
            }
        }
        for &l in s.outputs() {
            if l.is_null() {
                continue;
            }
            if l.is_const() {
                violations.push(IoViolation { row, condition: IoCondition::B, label: l });
                continue;
            }
            if outputs.contains(&l) {
                violations.push(IoViolation { row, condition: IoCondition::A, label: l });
            } else if seen.contains(&l) {
                violations.push(IoViolation { row, condition: IoCondition::D, label: l });
            }
            outputs.insert(l);
            seen.insert(l);
        }
    }
    violations
}

/// Non-constant input labels not produced by an earlier row, in first-appearance order.
pub fn primary_inputs(rows: &[Statement]) -> Vec<Label> {
    let mut produced = HashSet::new();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for s in rows {
        for &l in s.inputs() {
            if l.is_var() && !produced.contains(&l) && seen.insert(l) {
                out.push(l);
            }
        }
        for &l in s.outputs() {
            if l.is_var() {
                produced.insert(l);
            }
        }
    }
    out
}

/// An ordered list of statements.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Program {
    pub rows: Vec<Statement>,
}

impl Program {
    pub fn new(rows: Vec<Statement>) -> Program {
        Program { rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn primary_inputs(&self) -> Vec<Label> {
        primary_inputs(&self.rows)
    }

    pub fn output_labels(&self) -> BTreeSet<Label> {
        self.rows.iter().flat_map(|s| s.outputs().iter().copied()).filter(|l| l.is_var()).collect()
    }

    /// Validates against the derived primary inputs.
    pub fn validate(&self) -> Result<(), IoViolation> {
        let primary: HashSet<Label> = self.primary_inputs().into_iter().collect();
        match validate_io_dependency(&self.rows, &primary).first() {
            Some(v) => Err(*v),
            None => Ok(()),
        }
    }

    /// Integer matrix, one row `[pn, x.., y..]` per statement.
    pub fn to_matrix(&self, nvar: u32) -> Result<Vec<Vec<u32>>, KernelError> {
        self.rows
            .iter()
            .map(|s| {
                let mut row = vec![s.ap.label()];
                for l in s.slots() {
                    row.push(l.encode(nvar)?);
                }
                Ok(row)
            })
            .collect()
    }

    pub fn from_matrix(matrix: &[Vec<u32>], nvar: u32) -> Result<Program, KernelError> {
        let width = 1 + NX + NY;
        let mut rows = Vec::with_capacity(matrix.len());
        for (i, r) in matrix.iter().enumerate() {
            if r.len() != width {
                return Err(KernelError::RowWidth { row: i, width: r.len(), expected: width });
            }
            let ap = Ap::from_label(r[0]).ok_or(KernelError::UnknownProgramLabel(r[0]))?;
            let mut x = [Label::Null; NX];
            let mut y = [Label::Null; NY];
            for j in 0..NX {
                x[j] = Label::decode(r[1 + j], nvar)?;
            }
            for j in 0..NY {
                y[j] = Label::decode(r[1 + NX + j], nvar)?;
            }
            let s = Statement { ap, x, y };
            if !s.check_slots() {
                return Err(KernelError::SlotUsage { row: i, ap });
            }
            rows.push(s);
        }
        Ok(Program { rows })
    }

    /// The I/O matrix: the integer matrix without the program-name column.
    pub fn io_matrix(&self, nvar: u32) -> Result<Vec<Vec<u32>>, KernelError> {
        Ok(self.to_matrix(nvar)?.into_iter().map(|r| r[1..].to_vec()).collect())
    }
}

/// A rule: premise program plus a single conclusion statement.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Iep {
    /// Corpus label, or 0 when unassigned.
    pub id: u32,
    pub premise: Program,
    pub conclusion: Statement,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum IepError {
    #[error("conclusion output label is not fresh")]
    NotFresh,
    #[error(transparent)]
    Io(#[from] IoViolation),
}

impl Iep {
    pub fn new(premise: Vec<Statement>, conclusion: Statement) -> Iep {
        Iep { id: 0, premise: Program::new(premise), conclusion }
    }

    pub fn with_id(mut self, id: u32) -> Iep {
        self.id = id;
        self
    }

    /// `conc[premise conclusion]`.
    pub fn concatenation(&self) -> Program {
        let mut rows = self.premise.rows.clone();
        rows.push(self.conclusion);
        Program { rows }
    }

    pub fn validate(&self) -> Result<(), IepError> {
        self.premise.validate()?;
        let used: HashSet<Label> = self.premise.rows.iter().flat_map(|s| s.slots()).collect();
        if self.conclusion.outputs().iter().any(|l| used.contains(l)) {
            return Err(IepError::NotFresh);
        }
        let primary: HashSet<Label> = self.premise.primary_inputs().into_iter().collect();
        // Conclusion inputs absent from the premise are extra primary inputs here;
        // whether they are acceptable is a structural-integrity question.
        let mut extended = primary;
        for &l in self.conclusion.inputs() {
            if l.is_var() && !self.premise.output_labels().contains(&l) {
                extended.insert(l);
            }
        }
        if let Some(v) = validate_io_dependency(&self.concatenation().rows, &extended).first() {
            return Err(IepError::Io(*v));
        }
        Ok(())
    }

    /// Relabels variables 1, 2, ... in first-appearance order (premise, then conclusion).
    pub fn canonical(&self) -> Iep {
        let mut map = HashMap::new();
        let mut next = 1u32;
        let mut rename = |l: Label| match l {
            Label::Var(v) => Label::Var(*map.entry(v).or_insert_with(|| {
                let n = next;
                next += 1;
                n
            })),
            other => other,
        };
        let premise = self.premise.rows.iter().map(|s| s.map_labels(&mut rename)).collect();
        let conclusion = self.conclusion.map_labels(&mut rename);
        Iep { id: self.id, premise: Program::new(premise), conclusion }
    }

    pub fn var_count(&self) -> usize {
        let vars: HashSet<u32> = self.concatenation().rows.iter().flat_map(|s| s.vars().collect::<Vec<_>>()).collect();
        vars.len()
    }

    pub fn max_var(&self) -> u32 {
        self.concatenation().rows.iter().flat_map(|s| s.vars().collect::<Vec<_>>()).max().unwrap_or(0)
    }
}

/// Machine parameters and search bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MachParams {
    /// Largest machine natural number.
    pub mnat: u64,
    /// Size of the variable pool; constants are encoded as `nvar + 1..=nvar + 3`.
    pub nvar: u32,
    pub max_premise_len: usize,
    /// Saturation rounds per proof attempt.
    pub max_proof_depth: usize,
    /// Cap on statements derived in one proof attempt.
    pub max_derived_statements: usize,
    /// Nesting depth of multi-step disjunction-branch refutations.
    pub max_split_depth: usize,
    /// Templates emitted per group before truncation.
    pub template_budget: usize,
    /// Largest number of primary inputs the soundness check will enumerate.
    pub max_enumeration_vars: usize,
    /// Use the data-parallel paths when the `parallel` feature is enabled.
    pub parallel: bool,
}

impl Default for MachParams {
    fn default() -> Self {
        MachParams {
            mnat: 12,
            nvar: 26,
            max_premise_len: 5,
            max_proof_depth: 8,
            max_derived_statements: 4000,
            max_split_depth: 2,
            template_budget: 200_000,
            max_enumeration_vars: 5,
            parallel: true,
        }
    }
}

impl MachParams {
    pub fn with_mnat(mut self, mnat: u64) -> Self {
        self.mnat = mnat;
        self
    }
}

// ---------------------------------------------------------------------------
// Rule text

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    /// One-based line number within the parsed text.
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unknown atomic program `{0}`")]
    UnknownAp(String),
    #[error("{ap} expects {expected} {which} label(s), found {found}")]
    Arity { ap: Ap, which: &'static str, expected: usize, found: usize },
    #[error("constant `{0}` in an output slot")]
    ConstantOutput(String),
    #[error("bad token `{0}`")]
    BadToken(String),
    #[error("malformed statement: {0}")]
    Malformed(String),
    #[error("missing `-----` separator")]
    MissingSeparator,
    #[error("expected exactly one conclusion line, found {0}")]
    Conclusion(usize),
    #[error("more than {0} distinct variables")]
    TooManyVariables(u32),
    #[error("conclusion output label is not fresh")]
    NotFresh,
    #[error("I/O dependency violation ({condition}) involving `{label}`")]
    Io { condition: IoCondition, label: String },
    #[error("{0}")]
    Other(String),
}

/// Variable token to label map, assigning labels in first-appearance order.
#[derive(Clone, Debug, Default)]
pub struct NameTable {
    map: HashMap<String, u32>,
    names: Vec<String>,
}

impl NameTable {
    pub fn new() -> NameTable {
        NameTable::default()
    }

    pub fn label(&mut self, tok: &str) -> u32 {
        if let Some(&k) = self.map.get(tok) {
            return k;
        }
        self.names.push(tok.to_string());
        let k = self.names.len() as u32;
        self.map.insert(tok.to_string(), k);
        k
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, k: u32) -> Option<&str> {
        self.names.get((k as usize).checked_sub(1)?).map(String::as_str)
    }
}

fn is_var_token(tok: &str) -> bool {
    let mut chars = tok.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
        && tok != "mnat"
        && tok != "false"
}

fn parse_label(tok: &str, names: &mut NameTable) -> Result<Label, ParseErrorKind> {
    if let Some(c) = Constant::from_token(tok) {
        Ok(Label::Const(c))
    } else if is_var_token(tok) {
        Ok(Label::Var(names.label(tok)))
    } else {
        Err(ParseErrorKind::BadToken(tok.to_string()))
    }
}

/// Parses a statement from the front of `text` and returns it with the unparsed remainder.
pub fn parse_statement_prefix<'t>(
    text: &'t str,
    names: &mut NameTable,
) -> Result<(Statement, &'t str), ParseErrorKind> {
    let text = text.trim_start();
    let name_end = text.find(|c: char| c.is_whitespace() || c == '[').unwrap_or(text.len());
    let name = &text[..name_end];
    if name == "false" {
        return Ok((Statement::FALSE, &text[name_end..]));
    }
    let ap = Ap::from_name(name).ok_or_else(|| ParseErrorKind::UnknownAp(name.to_string()))?;
    let mut rest = &text[name_end..];
    let mut lists: Vec<Vec<&str>> = Vec::new();
    for _ in 0..2 {
        let r = rest.trim_start();
        let r = r.strip_prefix('[').ok_or_else(|| ParseErrorKind::Malformed(text.trim().to_string()))?;
        let close = r.find(']').ok_or_else(|| ParseErrorKind::Malformed(text.trim().to_string()))?;
        lists.push(r[..close].split_whitespace().collect());
        rest = &r[close + 1..];
    }
    let (ins, outs) = (&lists[0], &lists[1]);
    if ins.len() != ap.in_arity() {
        return Err(ParseErrorKind::Arity { ap, which: "input", expected: ap.in_arity(), found: ins.len() });
    }
    if outs.len() != ap.out_arity() {
        return Err(ParseErrorKind::Arity { ap, which: "output", expected: ap.out_arity(), found: outs.len() });
    }
    let mut inputs = Vec::with_capacity(ins.len());
    for t in ins {
        inputs.push(parse_label(t, names)?);
    }
    let mut outputs = Vec::with_capacity(outs.len());
    for t in outs {
        if Constant::from_token(t).is_some() {
            return Err(ParseErrorKind::ConstantOutput(t.to_string()));
        }
        outputs.push(parse_label(t, names)?);
    }
    Ok((Statement::new(ap, &inputs, &outputs), rest))
}

/// Parses a whole line as one statement.
pub fn parse_statement(text: &str, names: &mut NameTable) -> Result<Statement, ParseErrorKind> {
    let (s, rest) = parse_statement_prefix(text, names)?;
    if !rest.trim().is_empty() {
        return Err(ParseErrorKind::Malformed(format!("trailing `{}`", rest.trim())));
    }
    Ok(s)
}

pub(crate) fn is_separator(line: &str) -> bool {
    let t = line.trim();
    t.len() >= 3 && t.chars().all(|c| c == '-')
}

/// Strips a `#` comment.
pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Parses rule lines (premise, separator, conclusion) with a caller-supplied
/// name table. `first_line` is the one-based line number of `lines[0]`.
pub fn parse_rule_lines(
    lines: &[&str],
    first_line: usize,
    names: &mut NameTable,
    nvar: u32,
) -> Result<Iep, ParseError> {
    let mut premise = Vec::new();
    let mut conclusion = Vec::new();
    let mut separator = None;
    for (i, raw) in lines.iter().enumerate() {
        let lineno = first_line + i;
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        if is_separator(line) {
            if separator.is_some() {
                return Err(ParseError { line: lineno, kind: ParseErrorKind::Other("second separator".into()) });
            }
            separator = Some(lineno);
            continue;
        }
        let s = parse_statement(line, names).map_err(|kind| ParseError { line: lineno, kind })?;
        if separator.is_some() {
            conclusion.push((lineno, s));
        } else {
            premise.push((lineno, s));
        }
    }
    let sep_line = separator.ok_or(ParseError { line: first_line, kind: ParseErrorKind::MissingSeparator })?;
    if conclusion.len() != 1 {
        let line = conclusion.get(1).map(|c| c.0).unwrap_or(sep_line);
        return Err(ParseError { line, kind: ParseErrorKind::Conclusion(conclusion.len()) });
    }
    if names.len() > nvar as usize {
        return Err(ParseError { line: first_line, kind: ParseErrorKind::TooManyVariables(nvar) });
    }
    let (concl_line, concl) = conclusion[0];
    let iep = Iep::new(premise.iter().map(|p| p.1).collect(), concl);
    match iep.validate() {
        Ok(()) => Ok(iep),
        Err(IepError::NotFresh) => Err(ParseError { line: concl_line, kind: ParseErrorKind::NotFresh }),
        Err(IepError::Io(v)) => {
            let line = premise.get(v.row).map(|p| p.0).unwrap_or(concl_line);
            let label = match v.label {
                Label::Var(k) => names.name(k).unwrap_or("?").to_string(),
                Label::Const(c) => c.token().to_string(),
                Label::Null => "_".to_string(),
            };
            Err(ParseError { line, kind: ParseErrorKind::Io { condition: v.condition, label } })
        }
    }
}

/// Parses one rule in the rule-file dialect.
pub fn parse_rule_text(text: &str) -> Result<Iep, ParseError> {
    parse_rule_text_with_nvar(text, MachParams::default().nvar)
}

pub fn parse_rule_text_with_nvar(text: &str, nvar: u32) -> Result<Iep, ParseError> {
    let lines: Vec<&str> = text.lines().collect();
    parse_rule_lines(&lines, 1, &mut NameTable::new(), nvar)
}

/// Canonical rule text: variables renamed `a`, `b`, ... in first-appearance order.
pub fn render_rule_text(rule: &Iep) -> String {
    let c = rule.canonical();
    let mut out = String::new();
    for s in &c.premise.rows {
        out.push_str(&s.to_string());
        out.push('\n');
    }
    out.push_str("-----\n");
    out.push_str(&c.conclusion.to_string());
    out
}

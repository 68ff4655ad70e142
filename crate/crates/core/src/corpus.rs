//! The proof-corpus dialect: headed rule entries, optional proofs and a
//! count trailer. Bare rule blocks separated by blank lines are accepted as
//! plain rules.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::kernel::{
    parse_rule_lines, parse_statement_prefix, strip_comment, var_name, Iep, NameTable, ParseError,
};
use crate::prover::{Justification, Line, Proof, Step};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Axiom,
    Theorem,
    Provisional,
    Underivable,
    /// Unclassified rule.
    Rule,
}

impl Kind {
    pub fn keyword(self) -> &'static str {
        match self {
            Kind::Axiom => "Axiom",
            Kind::Theorem => "Theorem",
            Kind::Provisional => "Provisional",
            Kind::Underivable => "UD",
            Kind::Rule => "Rule",
        }
    }

    fn from_keyword(s: &str) -> Option<Kind> {
        Some(match s {
            "Axiom" => Kind::Axiom,
            "Theorem" => Kind::Theorem,
            "Provisional" => Kind::Provisional,
            "UD" => Kind::Underivable,
            "Rule" => Kind::Rule,
            _ => return None,
        })
    }
}

/// Variable names for rendering: the parsed table first, then unused
/// letters for labels beyond it.
#[derive(Clone, Debug, Default)]
pub struct Namer {
    names: Vec<String>,
    spare: Vec<String>,
}

impl Namer {
    pub fn from_table(t: &NameTable) -> Namer {
        let names: Vec<String> = (1..=t.len() as u32).map(|k| t.name(k).unwrap_or("?").to_string()).collect();
        let used: HashSet<&str> = names.iter().map(String::as_str).collect();
        let spare = (1..=26).map(var_name).filter(|n| !used.contains(n.as_str())).collect();
        Namer { names, spare }
    }

    pub fn name(&self, k: u32) -> String {
        let i = k as usize;
        if i >= 1 && i <= self.names.len() {
            return self.names[i - 1].clone();
        }
        let j = i.saturating_sub(self.names.len() + 1);
        self.spare.get(j).cloned().unwrap_or_else(|| format!("v{k}"))
    }
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub id: u32,
    pub kind: Kind,
    pub rule: Iep,
    pub weight: Option<u64>,
    pub connections: Option<Vec<u32>>,
    pub proof: Option<Proof>,
    pub namer: Namer,
    /// One-based line of the header (or first rule line).
    pub line: usize,
}

impl Entry {
    pub fn new(id: u32, kind: Kind, rule: Iep) -> Entry {
        Entry { id, kind, rule: rule.with_id(id), weight: None, connections: None, proof: None, namer: Namer::default(), line: 0 }
    }

    pub fn render(&self) -> String {
        let name = |k: u32| self.namer.name(k);
        let mut out = format!("{} {}", self.kind.keyword(), self.id);
        if let Some(c) = &self.connections {
            let c: Vec<String> = c.iter().map(u32::to_string).collect();
            out.push_str(&format!(" [{}]", c.join(" ")));
        }
        if let Some(w) = self.weight {
            out.push_str(&format!(" {w}"));
        }
        out.push('\n');
        for s in &self.rule.premise.rows {
            out.push_str(&format!("{}\n", s.display(&name)));
        }
        out.push_str("-----\n");
        out.push_str(&format!("{}\n", self.rule.conclusion.display(&name)));
        if let Some(p) = &self.proof {
            out.push_str("proof\n");
            out.push_str(&p.render_lines(&name));
            out.push_str("eop\n");
        }
        out
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Trailer {
    pub axioms: Option<usize>,
    pub provisional: Option<usize>,
    pub theorems: Option<usize>,
    pub underivable: Option<usize>,
}

impl fmt::Display for Trailer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = |x: Option<usize>| x.unwrap_or(0);
        writeln!(f, "number of axioms = {}", v(self.axioms))?;
        writeln!(f, "number of theorems (provisional) = {}", v(self.provisional))?;
        writeln!(f, "number of theorems = {}", v(self.theorems))?;
        write!(f, "number of underivable ieps = {}", v(self.underivable))
    }
}

#[derive(Clone, Debug, Default)]
pub struct Corpus {
    pub entries: Vec<Entry>,
    pub trailer: Option<Trailer>,
}

impl Corpus {
    pub fn get(&self, id: u32) -> Option<&Entry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn rules(&self) -> BTreeMap<u32, Iep> {
        self.entries.iter().map(|e| (e.id, e.rule.clone())).collect()
    }

    pub fn tally(&self) -> Trailer {
        let n = |k: Kind| Some(self.entries.iter().filter(|e| e.kind == k).count());
        Trailer { axioms: n(Kind::Axiom), provisional: n(Kind::Provisional), theorems: n(Kind::Theorem), underivable: n(Kind::Underivable) }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&e.render());
        }
        out.push_str(&self.tally().to_string());
        out.push('\n');
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error(transparent)]
    Rule(#[from] ParseError),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

impl CorpusError {
    pub fn line(&self) -> usize {
        match self {
            CorpusError::Rule(e) => e.line,
            CorpusError::Syntax { line, .. } => *line,
        }
    }
}

fn syntax(line: usize, msg: impl Into<String>) -> CorpusError {
    CorpusError::Syntax { line, msg: msg.into() }
}

fn parse_index_list(s: &str, line: usize) -> Result<(Vec<usize>, &str), CorpusError> {
    let s = s.trim_start();
    let r = s.strip_prefix('[').ok_or_else(|| syntax(line, format!("expected `[` in `{s}`")))?;
    let close = r.find(']').ok_or_else(|| syntax(line, "unclosed `[`"))?;
    let mut v = Vec::new();
    for t in r[..close].split_whitespace() {
        let n: usize = t.parse().map_err(|_| syntax(line, format!("bad index `{t}`")))?;
        if n == 0 {
            return Err(syntax(line, "line references are one-based"));
        }
        v.push(n - 1);
    }
    Ok((v, &r[close + 1..]))
}

fn parse_step(s: &str, line: usize) -> Result<(Step, &str), CorpusError> {
    let s = s.trim_start();
    let end = s.find(|c: char| c.is_whitespace() || c == '[').unwrap_or(s.len());
    let word = &s[..end];
    let (refs, rest) = parse_index_list(&s[end..], line)?;
    let one = |refs: &[usize]| -> Result<usize, CorpusError> {
        match refs {
            [r] => Ok(*r),
            _ => Err(syntax(line, format!("`{word}` takes one reference"))),
        }
    };
    let step = match word {
        "iot" => Step::Iot(one(&refs)?),
        "dcr2" => Step::Dcr2(one(&refs)?),
        "sr1" => match refs[..] {
            [target, eq] => Step::Sr1 { target, eq },
            _ => return Err(syntax(line, "`sr1` takes two references")),
        },
        _ => {
            let rule: u32 = word.parse().map_err(|_| syntax(line, format!("unknown step `{word}`")))?;
            Step::Iep { rule, refs }
        }
    };
    Ok((step, rest))
}

/// Parses a justification: `premise`, one step, or a split pair.
pub fn parse_justification(s: &str, line: usize) -> Result<Justification, CorpusError> {
    let t = s.trim();
    if t == "premise" {
        return Ok(Justification::Premise);
    }
    let (a, rest) = parse_step(t, line)?;
    if rest.trim().is_empty() {
        return Ok(Justification::Step(a));
    }
    let (b, rest) = parse_step(rest, line)?;
    if !rest.trim().is_empty() {
        return Err(syntax(line, format!("trailing `{}`", rest.trim())));
    }
    Ok(Justification::Split(a, b))
}

struct Header {
    kind: Kind,
    id: u32,
    connections: Option<Vec<u32>>,
    weight: Option<u64>,
    line: usize,
}

fn parse_header(t: &str, line: usize) -> Result<Option<Header>, CorpusError> {
    let mut parts = t.splitn(2, char::is_whitespace);
    let Some(kind) = parts.next().and_then(Kind::from_keyword) else { return Ok(None) };
    let rest = parts.next().unwrap_or("").trim();
    let idend = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
    let id: u32 = rest[..idend].parse().map_err(|_| syntax(line, "expected rule id"))?;
    let mut rest = rest[idend..].trim_start();
    let mut connections = None;
    if rest.starts_with('[') {
        let close = rest.find(']').ok_or_else(|| syntax(line, "unclosed connection list"))?;
        let ids = rest[1..close]
            .split_whitespace()
            .map(|x| x.parse::<u32>().map_err(|_| syntax(line, format!("bad rule id `{x}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        connections = Some(ids);
        rest = rest[close + 1..].trim_start();
    }
    let weight = if rest.is_empty() {
        None
    } else {
        Some(rest.parse::<u64>().map_err(|_| syntax(line, format!("bad weight `{rest}`")))?)
    };
    Ok(Some(Header { kind, id, connections, weight, line }))
}

fn parse_trailer_line(t: &str, tr: &mut Trailer, line: usize) -> Result<(), CorpusError> {
    let (key, val) = t.split_once('=').ok_or_else(|| syntax(line, "expected `=` in trailer"))?;
    let v: usize = val.trim().parse().map_err(|_| syntax(line, "bad trailer count"))?;
    let key = key.trim();
    let slot = match key {
        "number of axioms" => &mut tr.axioms,
        "number of theorems (provisional)" => &mut tr.provisional,
        "number of theorems" => &mut tr.theorems,
        k if k.starts_with("number of underivable") => &mut tr.underivable,
        _ => return Err(syntax(line, format!("unknown trailer `{key}`"))),
    };
    *slot = Some(v);
    Ok(())
}

#[derive(Default)]
struct Pending<'t> {
    header: Option<Header>,
    rule_lines: Vec<&'t str>,
    first_rule_line: usize,
    proof_lines: Vec<(usize, &'t str)>,
    in_proof: bool,
    closed: bool,
}

impl Pending<'_> {
    fn has_content(&self) -> bool {
        self.header.is_some() || !self.rule_lines.is_empty()
    }
}

fn finish(p: Pending<'_>, next_id: &mut u32, nvar: u32) -> Result<Entry, CorpusError> {
    let line = p.header.as_ref().map(|h| h.line).unwrap_or(p.first_rule_line);
    if p.in_proof && !p.closed {
        return Err(syntax(line, "proof without `eop`"));
    }
    let mut names = NameTable::new();
    let first = if p.first_rule_line == 0 { line } else { p.first_rule_line };
    let rule = parse_rule_lines(&p.rule_lines, first, &mut names, nvar)?;
    let (kind, id, connections, weight) = match p.header {
        Some(h) => (h.kind, h.id, h.connections, h.weight),
        None => (Kind::Rule, *next_id, None, None),
    };
    *next_id = (*next_id).max(id + 1);
    let mut proof = None;
    if p.in_proof {
        let mut lines = Vec::new();
        for (ln, text) in p.proof_lines {
            let t = text.trim_start();
            let numend = t.find(|c: char| !c.is_ascii_digit()).unwrap_or(t.len());
            let n: usize = t[..numend].parse().map_err(|_| syntax(ln, "expected line number"))?;
            if n != lines.len() + 1 {
                return Err(syntax(ln, format!("expected line {}, found {n}", lines.len() + 1)));
            }
            let (stmt, rest) = parse_statement_prefix(&t[numend..], &mut names)
                .map_err(|kind| CorpusError::Rule(ParseError { line: ln, kind }))?;
            if names.len() > nvar as usize {
                return Err(syntax(ln, format!("more than {nvar} distinct variables")));
            }
            let just = parse_justification(rest, ln)?;
            lines.push(Line { stmt, just });
        }
        proof = Some(Proof { target: rule.clone().with_id(id), lines });
    }
    let mut e = Entry::new(id, kind, rule);
    e.connections = connections;
    e.weight = weight;
    e.proof = proof;
    e.namer = Namer::from_table(&names);
    e.line = line;
    Ok(e)
}

/// Parses a corpus or rule file.
pub fn parse_corpus(text: &str, nvar: u32) -> Result<Corpus, CorpusError> {
    let mut corpus = Corpus::default();
    let mut cur = Pending::default();
    let mut next_id = 1u32;
    let mut trailer: Option<Trailer> = None;
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = strip_comment(raw);
        let t = line.trim();
        if t.starts_with("number of") {
            if cur.has_content() {
                corpus.entries.push(finish(std::mem::take(&mut cur), &mut next_id, nvar)?);
            }
            parse_trailer_line(t, trailer.get_or_insert_with(Trailer::default), ln)?;
            continue;
        }
        if trailer.is_some() && !t.is_empty() {
            return Err(syntax(ln, "content after trailer"));
        }
        if t.is_empty() {
            if cur.header.is_none() && !cur.rule_lines.is_empty() && !cur.in_proof {
                corpus.entries.push(finish(std::mem::take(&mut cur), &mut next_id, nvar)?);
            }
            continue;
        }
        if let Some(h) = parse_header(t, ln)? {
            if cur.has_content() {
                corpus.entries.push(finish(std::mem::take(&mut cur), &mut next_id, nvar)?);
            }
            cur.header = Some(h);
            continue;
        }
        if cur.closed {
            return Err(syntax(ln, "content after `eop`"));
        }
        match t {
            "proof" if !cur.in_proof => cur.in_proof = true,
            "eop" if cur.in_proof => cur.closed = true,
            _ if cur.in_proof => cur.proof_lines.push((ln, line)),
            _ => {
                if cur.rule_lines.is_empty() {
                    cur.first_rule_line = ln;
                }
                cur.rule_lines.push(line);
            }
        }
    }
    if cur.has_content() {
        corpus.entries.push(finish(cur, &mut next_id, nvar)?);
    }
    let mut ids = HashSet::new();
    for e in &corpus.entries {
        if !ids.insert(e.id) {
            return Err(syntax(e.line, format!("duplicate rule id {}", e.id)));
        }
    }
    corpus.trailer = trailer;
    Ok(corpus)
}

/// The transcribed corpus shipped with the crate.
pub const SHIPPED: &str = include_str!("../data/corpus.txt");

pub fn shipped() -> Corpus {
    parse_corpus(SHIPPED, 26).expect("shipped corpus parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_headers_and_proofs() {
        let text = "Theorem 10 [2] 15\neqn [a b] []\n-----\neqn [b a] []\nproof\n  1 eqn [a b] []  premise\n  2 typen [a] []  iot [1]\n  3 eqn [a a] []  2 [2]\n  4 eqn [b a] []  sr1 [3 1]\neop\nAxiom 2\ntypen [a] []\n-----\neqn [a a] []\n";
        let c = parse_corpus(text, 26).unwrap();
        assert_eq!(c.entries.len(), 2);
        let t = &c.entries[0];
        assert_eq!((t.id, t.kind, t.weight), (10, Kind::Theorem, Some(15)));
        assert_eq!(t.connections, Some(vec![2]));
        let p = t.proof.as_ref().unwrap();
        assert_eq!(p.lines[3].just, Justification::Step(Step::Sr1 { target: 2, eq: 0 }));
        assert_eq!(c.entries[1].weight, None);
        let again = parse_corpus(&c.render(), 26).unwrap();
        assert_eq!(again.entries[0].render(), t.render());
    }

    #[test]
    fn split_justifications() {
        let j = parse_justification("44 [10 9] 83 [7 1 2 10]", 1).unwrap();
        assert_eq!(
            j,
            Justification::Split(
                Step::Iep { rule: 44, refs: vec![9, 8] },
                Step::Iep { rule: 83, refs: vec![6, 0, 1, 9] }
            )
        );
        assert_eq!(j.to_string(), "44 [10 9] 83 [7 1 2 10]");
        assert!(matches!(parse_justification("9 [3] dcr2 [3]", 1).unwrap(), Justification::Split(_, Step::Dcr2(2))));
        assert!(parse_justification("sr1 [1]", 4).is_err());
        assert!(parse_justification("iot [0]", 4).is_err());
    }

    #[test]
    fn bare_rules_and_errors() {
        let c = parse_corpus("typen [a] []\n-----\neqn [a a] []\n\nlt [a a] []\n-----\nfalse\n", 26).unwrap();
        assert_eq!(c.entries.iter().map(|e| (e.id, e.kind)).collect::<Vec<_>>(), vec![(1, Kind::Rule), (2, Kind::Rule)]);
        let e = parse_corpus("Axiom 1\ntypen [a] []\n-----\nfoo [a] []\n", 26).unwrap_err();
        assert_eq!(e.line(), 4);
        assert!(parse_corpus("Axiom 1\n-----\nlt [0 1] []\nAxiom 1\n-----\nlt [0 1] []\n", 26).is_err());
        assert!(parse_corpus("", 26).unwrap().entries.is_empty());
    }

    #[test]
    fn shipped_corpus_shape() {
        let c = shipped();
        assert_eq!(c.entries.len(), 115);
        let t = c.trailer.unwrap();
        assert_eq!((t.axioms, t.theorems, t.underivable), (Some(28), Some(79), Some(8)));
        assert_eq!(c.tally().axioms, Some(28));
        assert_eq!(c.tally().theorems, Some(79));
        assert_eq!(c.tally().underivable, Some(8));
        assert!(c.entries.iter().filter(|e| e.kind == Kind::Theorem).all(|e| e.proof.is_some()));
    }
}

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pecr::conjecture::{generate_conjectures, parse_groups, Status};
use pecr::corpus::{parse_corpus, Corpus, Entry, Kind, Namer};
use pecr::kernel::NameTable;
use pecr::pipeline::{run, PipelineConfig};
use pecr::prover::{check_proof, check_theorem, compute_weights, partition, prove, KnowledgeBase, SearchScope, WeightMode};
use pecr::semantics::{soundness_check, SoundnessError, Verdict};
use pecr::{Iep, MachParams};

const FAILED: u8 = 1;
const USAGE: u8 = 2;
const EXHAUSTED: u8 = 3;

/// Bounded-arithmetic rule system: soundness checking, conjecture
/// generation, proof search and proof checking.
#[derive(Parser)]
#[command(name = "pecr", version)]
struct Cli {
    #[command(flatten)]
    mach: MachArgs,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct MachArgs {
    /// Largest machine natural number.
    #[arg(long, global = true, default_value_t = 12)]
    mnat: u64,
    /// Size of the variable pool.
    #[arg(long, global = true, default_value_t = 26)]
    nvar: u32,
    #[arg(long, global = true)]
    max_premise: Option<usize>,
    /// Saturation rounds per proof attempt.
    #[arg(long, global = true)]
    max_depth: Option<usize>,
    /// Statements derived per proof attempt.
    #[arg(long, global = true)]
    max_statements: Option<usize>,
    /// Disable the data-parallel paths.
    #[arg(long, global = true)]
    sequential: bool,
}

impl MachArgs {
    fn params(&self) -> MachParams {
        let d = MachParams::default();
        MachParams {
            mnat: self.mnat,
            nvar: self.nvar,
            max_premise_len: self.max_premise.unwrap_or(d.max_premise_len),
            max_proof_depth: self.max_depth.unwrap_or(d.max_proof_depth),
            max_derived_statements: self.max_statements.unwrap_or(d.max_derived_statements),
            parallel: !self.sequential,
            ..d
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Replay every proof in a corpus file.
    Check { corpus: PathBuf },
    /// Exhaustively check the soundness of every rule in a file.
    Soundness { rules: PathBuf },
    /// Search for proofs of the goal rules from a rule file.
    Prove {
        /// Rules available to the prover.
        #[arg(long)]
        kb: PathBuf,
        /// Use only the axioms of the rule file.
        #[arg(long)]
        axioms_only: bool,
        goal: PathBuf,
    },
    /// Generate surviving conjectures for each template group.
    Generate {
        #[arg(long)]
        groups: PathBuf,
        /// Also list rejected candidates as comments.
        #[arg(long)]
        rejected: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Iterate generation, proving and partitioning to a fixpoint.
    Run {
        #[arg(long)]
        groups: PathBuf,
        /// Starting knowledge base (a corpus or a previous report).
        #[arg(long)]
        kb: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        max_iterations: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute weights from connection lists and compare with the printed ones.
    Weights {
        corpus: PathBuf,
        /// Count dependency paths instead of dependent theorems.
        #[arg(long)]
        paths: bool,
    },
    /// Reclassify a corpus and print it with recomputed weights.
    Report {
        corpus: PathBuf,
        /// Search for proofs of rules that have none.
        #[arg(long)]
        search: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Failure(u8, String);

type Outcome = Result<u8, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure(USAGE, msg.into())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path, nvar: u32) -> Result<Corpus, Failure> {
    parse_corpus(&read(path)?, nvar).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| usage(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mach = cli.mach.params();
    let res = match cli.cmd {
        Cmd::Check { corpus } => cmd_check(&corpus, &mach),
        Cmd::Soundness { rules } => cmd_soundness(&rules, &mach),
        Cmd::Prove { kb, axioms_only, goal } => cmd_prove(&kb, axioms_only, &goal, &mach),
        Cmd::Generate { groups, rejected, out } => cmd_generate(&groups, rejected, out.as_deref(), &mach),
        Cmd::Run { groups, kb, max_iterations, out } => cmd_run(&groups, kb.as_deref(), max_iterations, out.as_deref(), &mach),
        Cmd::Weights { corpus, paths } => cmd_weights(&corpus, paths, &mach),
        Cmd::Report { corpus, search, out } => cmd_report(&corpus, search, out.as_deref(), &mach),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn cmd_check(path: &Path, mach: &MachParams) -> Outcome {
    let c = load(path, mach.nvar)?;
    let rules = c.rules();
    let (mut checked, mut bad) = (0, 0);
    for e in &c.entries {
        let Some(pf) = &e.proof else { continue };
        checked += 1;
        let res = match &e.connections {
            Some(d) => check_theorem(pf, d, &rules),
            None => check_proof(pf, &rules),
        };
        match res {
            Ok(conn) => {
                let conn: Vec<String> = conn.iter().map(u32::to_string).collect();
                println!("ok {} [{}]", e.id, conn.join(" "));
            }
            Err(err) => {
                bad += 1;
                let at = err.line().map(|l| format!(" line {l}")).unwrap_or_default();
                println!("invalid {}{at}: {err}", e.id);
            }
        }
    }
    if checked == 0 {
        eprintln!("warning: no proofs in {}", path.display());
    }
    eprintln!("{checked} proofs checked, {bad} invalid");
    Ok(if bad > 0 { FAILED } else { 0 })
}

fn cmd_soundness(path: &Path, mach: &MachParams) -> Outcome {
    let c = load(path, mach.nvar)?;
    let (mut unsound, mut skipped) = (0, 0);
    for e in &c.entries {
        match soundness_check(&e.rule, mach) {
            Ok(v) => {
                let mut line = format!("{} {} witnesses={}", e.id, v.verdict, v.witness_count);
                if let Some(cx) = &v.counterexample {
                    let parts: Vec<String> = cx.pairs().iter().map(|(k, x)| format!("{}={x}", e.namer.name(*k))).collect();
                    line.push_str(&format!(" counterexample {}", parts.join(",")));
                }
                if v.verdict == Verdict::Unsound {
                    unsound += 1;
                }
                println!("{line}");
            }
            Err(SoundnessError::EnumerationCap { count, cap }) => {
                skipped += 1;
                println!("{} skipped-over-cap inputs={count} cap={cap}", e.id);
            }
            Err(err) => return Err(Failure(FAILED, format!("rule {}: {err}", e.id))),
        }
    }
    Ok(if unsound > 0 {
        FAILED
    } else if skipped > 0 {
        EXHAUSTED
    } else {
        0
    })
}

fn cmd_prove(kb: &Path, axioms_only: bool, goal: &Path, mach: &MachParams) -> Outcome {
    let base = load(kb, mach.nvar)?;
    let goals = load(goal, mach.nvar)?;
    if goals.entries.is_empty() {
        return Err(usage(format!("{}: no goal rule", goal.display())));
    }
    let rules = base.entries.iter().filter(|e| !axioms_only || e.kind == Kind::Axiom).map(|e| (e.id, e.rule.clone())).collect();
    let mut code = 0;
    for g in &goals.entries {
        // Bare goal blocks are numbered by position, not by rule id.
        let target = if g.kind == Kind::Rule { g.rule.clone().with_id(0) } else { g.rule.clone() };
        match prove(&target, &rules, mach) {
            Ok(r) => {
                for l in &r.lemmas {
                    let mut e = Entry::new(l.rule.id, Kind::Theorem, l.rule.clone());
                    e.connections = Some(l.proof.connection_list().into_iter().collect());
                    e.proof = Some(l.proof.clone());
                    e.namer = Namer::from_table(&NameTable::new());
                    print!("{}", e.render());
                }
                let mut e = Entry::new(g.id, Kind::Theorem, g.rule.clone());
                e.connections = Some(r.proof.connection_list().into_iter().collect());
                e.proof = Some(r.proof);
                e.namer = g.namer.clone();
                print!("{}", e.render());
            }
            Err(err) => {
                code = code.max(EXHAUSTED);
                println!("# {}: {err}", g.id);
            }
        }
    }
    Ok(code)
}

fn cmd_generate(groups: &Path, rejected: bool, out: Option<&Path>, mach: &MachParams) -> Outcome {
    let gs = parse_groups(&read(groups)?, mach).map_err(|e| usage(format!("{}:{}: {}", groups.display(), e.line, e.msg)))?;
    let namer = Namer::from_table(&NameTable::new());
    let mut text = String::new();
    let mut next = 1;
    let mut truncated = false;
    for (i, g) in gs.iter().enumerate() {
        let gen = generate_conjectures(g, mach);
        let s = &gen.stats;
        truncated |= s.truncated;
        text.push_str(&format!(
            "# {g}: {} templates{}, {} candidates, {} duplicates, {} survivors\n",
            s.templates,
            if s.truncated { " (budget exhausted)" } else { "" },
            s.candidates,
            s.duplicates,
            gen.survivors.len()
        ));
        for c in &gen.survivors {
            let mut e = Entry::new(next, Kind::Rule, c.iep.clone());
            e.namer = namer.clone();
            text.push_str(&e.render());
            next += 1;
        }
        if rejected {
            for c in &gen.rejected {
                if let Status::Rejected(why) = &c.status {
                    text.push_str(&format!("# group {} rejected ({why}): {}\n", i + 1, one_line(&c.iep, &namer)));
                }
            }
        }
    }
    emit(out, &text)?;
    Ok(if truncated { EXHAUSTED } else { 0 })
}

fn one_line(r: &Iep, namer: &Namer) -> String {
    let name = |k: u32| namer.name(k);
    let p: Vec<String> = r.premise.rows.iter().map(|s| s.display(&name).to_string()).collect();
    format!("{} ⊢ {}", p.join(", "), r.conclusion.display(&name))
}

fn cmd_run(groups: &Path, kb: Option<&Path>, max_iterations: usize, out: Option<&Path>, mach: &MachParams) -> Outcome {
    let gs = parse_groups(&read(groups)?, mach).map_err(|e| usage(format!("{}:{}: {}", groups.display(), e.line, e.msg)))?;
    let mut cfg = PipelineConfig::new(mach.clone(), gs);
    cfg.max_iterations = max_iterations;
    if let Some(p) = kb {
        cfg.seed = KnowledgeBase::from_corpus(&load(p, mach.nvar)?);
    }
    let report = run(&cfg);
    emit(out, &report.to_string())?;
    let t = report.kb.tally();
    eprintln!(
        "{} iteration(s), {}: {} axioms, {} theorems, {} underivable",
        report.iterations.len(),
        if report.converged { "converged" } else { "not converged" },
        t.axioms.unwrap_or(0),
        t.theorems.unwrap_or(0),
        t.underivable.unwrap_or(0)
    );
    Ok(if report.converged { 0 } else { EXHAUSTED })
}

fn cmd_weights(path: &Path, paths: bool, mach: &MachParams) -> Outcome {
    let c = load(path, mach.nvar)?;
    let kb = KnowledgeBase::from_corpus(&c);
    let mode = if paths { WeightMode::Paths } else { WeightMode::Dependents };
    let w = compute_weights(&kb.graph(), kb.rules.keys().copied(), mode).map_err(|e| Failure(FAILED, e.to_string()))?;
    let mut mismatches = 0;
    println!("id printed recomputed match");
    for e in &c.entries {
        let got = w.get(&e.id).copied().unwrap_or(0);
        let (printed, flag) = match e.weight {
            Some(p) if p == got => (p.to_string(), "yes"),
            Some(p) => {
                mismatches += 1;
                (p.to_string(), "no")
            }
            None => ("-".to_string(), "-"),
        };
        println!("{} {printed} {got} {flag}", e.id);
    }
    Ok(if mismatches > 0 { FAILED } else { 0 })
}

fn cmd_report(path: &Path, search: bool, out: Option<&Path>, mach: &MachParams) -> Outcome {
    let mut kb = KnowledgeBase::from_corpus(&load(path, mach.nvar)?);
    let scope = if search { SearchScope::NonTheorems } else { SearchScope::Off };
    let rep = partition(&mut kb, Default::default(), mach, scope);
    for (id, why) in &rep.rejected {
        eprintln!("proof of {id} rejected: {why}");
    }
    let c = kb.to_corpus();
    emit(out, &c.render())?;
    Ok(if rep.rejected.is_empty() { 0 } else { FAILED })
}

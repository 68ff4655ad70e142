//! The generate → check → prove → partition loop, run to a fixpoint.

use std::fmt;

use crate::conjecture::{generate_conjectures, TemplateGroup};
use crate::corpus::Corpus;
use crate::kernel::MachParams;
use crate::prover::{partition, reduce_premise, KnowledgeBase, Reduction, SearchScope};

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub mach: MachParams,
    pub groups: Vec<TemplateGroup>,
    pub max_iterations: usize,
    /// Starting knowledge base, e.g. a previous report.
    pub seed: KnowledgeBase,
    /// Drop conjectures whose conclusion follows from part of their premise.
    pub reduce: bool,
}

impl PipelineConfig {
    pub fn new(mach: MachParams, groups: Vec<TemplateGroup>) -> PipelineConfig {
        PipelineConfig { mach, groups, max_iterations: 4, seed: KnowledgeBase::new(), reduce: true }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IterationStats {
    pub candidates: usize,
    pub rejected: usize,
    pub reducible: usize,
    pub added: usize,
    pub proved: usize,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub kb: KnowledgeBase,
    pub iterations: Vec<IterationStats>,
    pub converged: bool,
    /// Bound exhaustion and other conditions worth a reader's attention.
    pub notes: Vec<String>,
}

impl Report {
    pub fn corpus(&self) -> Corpus {
        let c = self.kb.to_corpus();
        assert_eq!(c.trailer.as_ref(), Some(&c.tally()), "trailer must match the classification");
        c
    }
}

/// Corpus dialect, with the notes as leading comments.
impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let state = if self.converged { "converged" } else { "stopped" };
        writeln!(f, "# {} after {} iteration(s)", state, self.iterations.len())?;
        for n in &self.notes {
            writeln!(f, "# {n}")?;
        }
        f.write_str(&self.corpus().render())
    }
}

pub fn run(cfg: &PipelineConfig) -> Report {
    let mach = &cfg.mach;
    let mut kb = cfg.seed.clone();
    let mut iterations = Vec::new();
    let mut notes = Vec::new();
    let mut converged = false;
    // Search is deterministic, so unproven rules only need another attempt
    // once the rule set has grown.
    let mut searched = 0;
    for it in 0..cfg.max_iterations.max(1) {
        let mut st = IterationStats::default();
        for (gi, g) in cfg.groups.iter().enumerate() {
            let gen = generate_conjectures(g, mach);
            if it == 0 && gen.stats.truncated {
                notes.push(format!("group {}: template budget exhausted after {} templates", gi + 1, gen.stats.templates));
            }
            st.candidates += gen.stats.candidates;
            st.rejected += gen.rejected.len();
            for c in gen.survivors {
                if kb.find(&c.iep).is_some() {
                    continue;
                }
                if cfg.reduce {
                    if let Reduction::Reducible { .. } = reduce_premise(&c.iep, &kb.rules, mach) {
                        st.reducible += 1;
                        continue;
                    }
                }
                kb.insert(c.iep);
                st.added += 1;
            }
        }
        let scope = if kb.rules.len() > searched { SearchScope::NonTheorems } else { SearchScope::Provisional };
        searched = kb.rules.len();
        let report = partition(&mut kb, Default::default(), mach, scope);
        st.proved = report.found.len() + report.recovered.len();
        let changed = report.changed || st.added > 0 || !report.lemmas.is_empty();
        iterations.push(st);
        if !changed {
            converged = true;
            break;
        }
    }
    Report { kb, iterations, converged, notes }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_groups_converge_at_once() {
        let r = run(&PipelineConfig::new(MachParams::default(), Vec::new()));
        assert!(r.converged);
        assert_eq!(r.iterations.len(), 1);
        assert!(r.kb.rules.is_empty());
        assert!(r.to_string().contains("number of axioms = 0"));
    }
}

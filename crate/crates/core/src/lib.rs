//! Arithmetic over machine-bounded natural numbers as a system of atomic
//! programs: evaluation, exhaustive soundness checking, binding-matrix
//! templates, conjecture generation, proof search and proof checking.

pub mod conjecture;
pub mod corpus;
pub mod kernel;
pub mod par;
pub mod pipeline;
pub mod prover;
pub mod semantics;
pub mod structure;

pub use kernel::{Ap, Constant, Iep, Label, MachParams, Program, Statement};

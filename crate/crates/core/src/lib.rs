//! Exact evaluation, proof checking and proof search for quantitative
//! linear logic with soft additives of hardness `p`.

pub mod alethic;
pub mod bayes;
pub mod calculus;
pub mod corpus;
pub mod fixtures;
pub mod parse;
pub mod proof_file;
pub mod prover;
pub mod rewrite;
pub mod semantics;
pub mod syntax;

pub use alethic::{Ext, Hardness, Value};
pub use calculus::{Derivation, ProofTree, RuleName, Theory};
pub use syntax::{Cedent, Formula, RedOp, Sequent, Structure};

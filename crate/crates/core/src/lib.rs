//! Proof search, proof checking and counter-model extraction for the
//! intuitionistic tense logics IK_t extended with any of the frame
//! conditions T (reflexivity), B (symmetry) and D (seriality).
//!
//! The entry point is [`prover::prove`]; a successful run yields a proof via
//! [`proof::extract_proof`], a failed one a finite counter-model via
//! [`countermodel::extract_model`].

pub mod countermodel;
pub mod error;
pub mod formula;
pub mod logic;
pub mod morphism;
pub mod oracle;
pub mod proof;
pub mod prover;
pub mod sequent;
mod syntax;

pub use countermodel::{KripkeModel, World};
pub use error::{Error, Result};
pub use formula::{Direction, Formula, Node};
pub use logic::Logic;
pub use morphism::{Morphism, MorphismKind};
pub use oracle::{brute_force_validity, BoundedSearchResult};
pub use proof::{check_proof, extract_proof, Proof};
pub use prover::{prove, prove_with, ComputationTree, ProverConfig, RuleTag, Verdict};
pub use sequent::{GentzenSequent, Name, SeqTree, Side};

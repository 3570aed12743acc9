//! Proof theory of the interpretability logic IL: formulas, sequent calculi
//! with wellfounded and cyclic proofs, proof search, proof transformations,
//! Hilbert-style proofs and uniform interpolation.

pub mod cyclic;
pub mod formula;
pub mod golden;
pub mod hilbert;
pub mod interpolation;
pub mod io;
pub mod metatheory;
pub mod proof;
pub mod rules;
pub mod search;
pub mod sequent;

pub use cyclic::{check_cyclic, check_cyclic_in, unfold, CNode, CyclicProof};
pub use formula::{abbrev, parse, parse_vocabulary, Abbrev, Formula, FormulaError, SubstitutionMap, Vocabulary};
pub use proof::{
    ax_proof, check_proof, check_proof_with, derived_rule, main_fragment, CheckError, CheckOptions, CheckReason,
    DerivedRule, MainFragment, ModalTarget, NodeRef, Proof, ProofError,
};
pub use rules::{CalculusId, ModalData, RuleApp, RuleMismatch};
pub use sequent::{parse_sequent, Multiset, Sequent, Side};

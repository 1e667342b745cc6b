//! Finite scaled-lattice toolkit.
//!
//! Finite distributive lattices are handled through their Birkhoff-dual
//! posets of join-irreducibles; a dimension labeling turns the downset
//! lattice into a finite d-subscaled lattice with the full operation set
//! (join, meet, topological difference, pure-component operators). On top of
//! that sit axiom verification, minimal-extension and splitting
//! constructions, exact rational linear representations, atom-counted
//! structure, and bounded decision procedures for quantifier-free
//! satisfiability and single-block sentences over prime-determined
//! completions.

mod axioms;
pub mod formula;
mod canon;
pub mod dim;
pub mod element;
pub mod error;
pub mod ingest;
pub mod poset;
pub mod scaled;

pub use dim::Dim;
pub use element::{all_elements, downset, element, one, zero, LatticeElement};
pub use error::{Error, Result};
pub use ingest::{recover_poset, tabulate_downsets, LatticeTables};
pub use poset::Poset;
pub use scaled::{
    AxiomReport, AxiomVerdict, AxiomWitness, CheckMode, InducedBase, ScaledBase, Substructure,
};

pub mod signature;
pub use signature::{
    apply_signature, enumerate_signatures, signature_of, tower_decompose, BaseMap, Extension,
    Signature, TowerStep,
};

pub mod splitting;
pub use splitting::{check_catenarity, splitting_extension, CatenarityReport, Split};

pub mod asc;
pub mod embed;
pub use asc::{embed_check_asc, pre_algebraic_equiv, AscBase, AscModel, AscReport};
pub use embed::{embed_check, EmbedReport, ScModel};

pub mod geometry;
pub use geometry::{
    family_to_base, geometric_catenarity, geometric_prime, represent, represent_asc, sls_closure,
    wedge_over, GeomLattice, Rat, Representation, SlsLattice, SpecialLinearSet, Variety,
};

pub use formula::{parse_formula, parse_sentence, Formula, Quantifier, Sentence, Term};

pub mod logic;
pub use logic::{
    decide_sentence, enumerate_bases, eval_formula, eval_term, mu, mu_saturating, sat_qf,
    theory_equal, DecideOptions, DecisionOutcome, EnumOptions, ModelBase, SatOptions, Verdict,
    WitnessData,
};

pub mod io;

pub mod asc_signature;
pub use asc_signature::{
    apply_asc_signature, enumerate_asc_signatures, validate_asc_signature, AscExtension,
    AscSignature,
};

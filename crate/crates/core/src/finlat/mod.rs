//! Explicit finite (ortho)lattices.
//!
//! Lattices are stored by their full order relation; join and meet tables
//! are derived once. On top of that sit perspectivity, neutral ideals,
//! congruences (as quotient sets and as partitions), subdirect
//! irreducibility and the decomposition of finite MOLs into Boolean and MO_n
//! factors.

mod congruence;
mod decompose;
mod format;
mod iso;
mod lattice;
mod perspectivity;

use thiserror::Error;

pub use congruence::{
    check_closure_rules, congruence_from_quotient, congruence_lattice, is_subdirectly_irreducible,
    principal_congruence, quotient_lattice, tolerance_closure, Congruence, QuotientSet, SiReport,
};
pub use decompose::{decompose_finite_mol, Decomposition, Factor};
pub use format::{parse_lattice, write_lattice};
pub use iso::{find_isomorphism, is_isomorphism};
pub use lattice::{
    boolean, chain, interval_subalgebra, is_modular, is_mol, is_ortholattice, is_orthomodular, mo,
    modularity_counterexample, o6, orthomodularity_counterexample, product, product_all, validate,
    FiniteOrtholattice, ValidationReport,
};
pub use perspectivity::{
    check_ideal_approximation, is_neutral_ideal, neutral_ideal, perspective_via, perspectivity,
    reconstruct_orthocomplement,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinLatError {
    #[error("not a lattice: {0}")]
    Structure(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("lattice has no orthocomplement")]
    NoOrtho,
    #[error("lattice is not modular")]
    NotModular,
    #[error("lattice is not orthomodular")]
    NotOrthomodular,
    #[error("lattice is not a modular ortholattice")]
    NotMOL,
    #[error("`{0}` is not below `{1}`")]
    NotBelow(String, String),
    #[error("`{0}` and `{1}` are not comparable")]
    NotComparable(String, String),
    #[error("element set is not a subalgebra")]
    NotSubalgebra,
    #[error("element set is not a neutral ideal: {0}")]
    NotNeutralIdeal(String),
    #[error("no orthocomplement candidate for `{0}`")]
    NoComplementFound(String),
    #[error("several orthocomplement candidates for `{0}`")]
    AmbiguousComplement(String),
    #[error("decomposition failed: {0}")]
    DecompositionFailure(String),
    #[error("polynomial must be a lattice term: {0}")]
    NotLatticePolynomial(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

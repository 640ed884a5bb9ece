//! Exact computation in modular ortholattices.
//!
//! The crate covers subspace lattices of Q^n under positive definite forms,
//! explicit finite ortholattices, point geometries, von Neumann frames with
//! their coordinate rings, the A_k/B_k witness constructions and an
//! ortholattice term language.

pub mod exactla;
pub mod finlat;
pub mod frames;
pub mod geometry;
pub mod subspaces;
pub mod terms;
pub mod witness;

pub use exactla::{LinAlgError, Rational, RationalMatrix};
pub use finlat::{Congruence, FinLatError, FiniteOrtholattice, QuotientSet};
pub use frames::{Frame, FrameError, RingElem};
pub use geometry::{GeometryError, PointGeometry, RepresentationMap};
pub use subspaces::{FormSpace, Subspace, SubspaceError};
pub use terms::{OrthoImplication, Term, TermError};
pub use witness::{M2Instance, StepReport, WitnessConfig, WitnessError};

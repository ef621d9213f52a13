//! Exact scalars and the Diophantine side: integer relations, Kronecker
//! simultaneous approximation, lattice membership of point sets, the
//! difference condition and phase-sum tables.

mod kronecker;
mod lattice;
mod phase;
mod relation;
mod scalar;

pub use kronecker::{kronecker_solve, KroneckerError, KroneckerOptions, KroneckerSolution};
pub use lattice::{difference_condition, lattice_membership, DifferenceCondition, LatticeMembership};
pub use phase::{phase_sums, PhaseSumTable};
pub use relation::{q_independence, RelationMethod, RelationOutcome, RelationReport};
pub use scalar::{ExactScalar, ScalarKind, ScalarParseError, SurdSum, MAX_RADICAND};

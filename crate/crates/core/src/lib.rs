//! Capability of finite p-groups of class two and exponent p, decided through
//! closure operators on subspaces of the commutator space.
//!
//! A group on `n` generators corresponds to a subspace `X` of `V(n) = Λ²U`;
//! it is capable exactly when `X` is closed under the closure operator
//! induced by the maps `φ_k : V → W`. The crate provides the exact `F_p`
//! linear algebra, the spaces and maps, the closure machinery, structural
//! reductions, the group-facing decision procedure, and an exhaustive
//! verification oracle.

pub mod capability;
pub mod closure;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod reduce;
pub mod spaces;

pub use capability::{
    classify_4gen, decide, decide_subspace, is_raw_subspace, parse, parse_raw_subspace,
    shortcut_verdict, to_subspace, Classification, Presentation, Reason, Verdict,
};
pub use closure::{closure, interior, is_closed, star_down, star_up, ClosureResult};
pub use error::{Error, Result};
pub use linalg::{rref, Fp, LinearMap, MatrixFp, Subspace};
pub use reduce::{ReductionStep, ReductionTrace, StepKind};
pub use spaces::SpaceContext;

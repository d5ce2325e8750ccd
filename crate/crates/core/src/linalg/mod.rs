//! Exact linear algebra over prime fields.

mod field;
mod map;
mod matrix;
mod subspace;

pub use field::Fp;
pub use map::LinearMap;
pub use matrix::{rref, MatrixFp};
pub use subspace::Subspace;

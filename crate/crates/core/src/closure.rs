//! The star operators induced by a family of linear maps `ℓ_i : V₁ → V₂`,
//! and the closure (`X ↦ X**`) and interior (`Y ↦ Y**`) operators they form.
//!
//! The `*_with` functions work for any nonempty family; the plain versions use
//! the `φ_k` family of a [`SpaceContext`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{LinearMap, MatrixFp, Subspace};
use crate::spaces::SpaceContext;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureResult {
    pub x: Subspace,
    pub x_star: Subspace,
    pub x_closure: Subspace,
    pub closed: bool,
    /// First RREF basis vector of `x_closure` outside `x`, when not closed.
    pub witness: Option<Vec<u32>>,
}

/// Dimensions reported for a closure computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureDims {
    pub dim_x: usize,
    pub dim_x_star: usize,
    pub dim_x_closure: usize,
}

impl ClosureResult {
    pub fn dims(&self) -> ClosureDims {
        ClosureDims {
            dim_x: self.x.dim(),
            dim_x_star: self.x_star.dim(),
            dim_x_closure: self.x_closure.dim(),
        }
    }
}

fn nonempty(maps: &[LinearMap]) -> Result<&LinearMap> {
    maps.first()
        .ok_or_else(|| Error::Precondition("map family must be nonempty".into()))
}

/// `X* = ⟨ℓ_i(X) | i⟩`.
pub fn star_up_with(maps: &[LinearMap], x: &Subspace) -> Result<Subspace> {
    let first = nonempty(maps)?;
    if x.field() != first.field() {
        return Err(Error::FieldMismatch {
            left: first.field().modulus(),
            right: x.field().modulus(),
        });
    }
    let mut images = MatrixFp::zeros(first.field(), 0, first.codomain_dim());
    for map in maps {
        if map.domain_dim() != x.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: map.domain_dim(),
                got: x.ambient_dim(),
            });
        }
        for v in x.basis_vectors() {
            images.push_row(&map.apply_vector(v)?)?;
        }
    }
    Ok(Subspace::from_matrix(images))
}

/// `Y* = ⋂_i ℓ_i⁻¹(Y)`.
///
/// Solved in one elimination: the quotient matrices of every `ℓ_i` modulo `Y`
/// are stacked and their common kernel taken.
pub fn star_down_with(maps: &[LinearMap], y: &Subspace) -> Result<Subspace> {
    let first = nonempty(maps)?;
    let (field, domain) = (first.field(), first.domain_dim());
    if y.field() != field {
        return Err(Error::FieldMismatch {
            left: field.modulus(),
            right: y.field().modulus(),
        });
    }
    for map in maps {
        if map.codomain_dim() != y.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: map.codomain_dim(),
                got: y.ambient_dim(),
            });
        }
    }
    if y.is_full() {
        return Ok(Subspace::full(field, domain));
    }
    let mut stacked = MatrixFp::zeros(field, 0, domain);
    for map in maps {
        let q = map.quotient_matrix(y)?;
        for row in q.row_iter() {
            stacked.push_row(row)?;
        }
    }
    Subspace::span(field, domain, &stacked.kernel_basis())
}

pub fn closure_with(maps: &[LinearMap], x: &Subspace) -> Result<ClosureResult> {
    let x_star = star_up_with(maps, x)?;
    let x_closure = star_down_with(maps, &x_star)?;
    let closed = x_closure.dim() == x.dim();
    let witness = if closed {
        None
    } else {
        x_closure.first_vector_outside(x)?
    };
    Ok(ClosureResult {
        x: x.clone(),
        x_star,
        x_closure,
        closed,
        witness,
    })
}

pub fn interior_with(maps: &[LinearMap], y: &Subspace) -> Result<Subspace> {
    star_up_with(maps, &star_down_with(maps, y)?)
}

pub fn is_closed_with(maps: &[LinearMap], x: &Subspace) -> Result<bool> {
    let x_star = star_up_with(maps, x)?;
    Ok(star_down_with(maps, &x_star)?.dim() == x.dim())
}

pub fn star_up(ctx: &SpaceContext, x: &Subspace) -> Result<Subspace> {
    star_up_with(ctx.phi_maps(), x)
}

pub fn star_down(ctx: &SpaceContext, y: &Subspace) -> Result<Subspace> {
    star_down_with(ctx.phi_maps(), y)
}

pub fn closure(ctx: &SpaceContext, x: &Subspace) -> Result<ClosureResult> {
    closure_with(ctx.phi_maps(), x)
}

pub fn interior(ctx: &SpaceContext, y: &Subspace) -> Result<Subspace> {
    interior_with(ctx.phi_maps(), y)
}

pub fn is_closed(ctx: &SpaceContext, x: &Subspace) -> Result<bool> {
    is_closed_with(ctx.phi_maps(), x)
}

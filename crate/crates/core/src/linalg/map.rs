use super::field::Fp;
use super::matrix::MatrixFp;
use super::subspace::Subspace;
use crate::error::{Error, Result};

/// A linear map F_p^domain → F_p^codomain, stored as a
/// `codomain_dim × domain_dim` matrix acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    matrix: MatrixFp,
}

impl LinearMap {
    pub fn new(matrix: MatrixFp) -> Self {
        Self { matrix }
    }

    pub fn zero(field: Fp, domain_dim: usize, codomain_dim: usize) -> Self {
        Self::new(MatrixFp::zeros(field, codomain_dim, domain_dim))
    }

    pub fn identity(field: Fp, dim: usize) -> Self {
        Self::new(MatrixFp::identity(field, dim))
    }

    pub fn matrix(&self) -> &MatrixFp {
        &self.matrix
    }

    pub fn field(&self) -> Fp {
        self.matrix.field()
    }

    pub fn domain_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn codomain_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply_vector(&self, v: &[u32]) -> Result<Vec<u32>> {
        self.matrix.mul_vec(v)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinearMap) -> Result<LinearMap> {
        Ok(Self::new(self.matrix.mul(&inner.matrix)?))
    }

    pub fn kernel(&self) -> Subspace {
        let basis = self.matrix.kernel_basis();
        Subspace::span(self.field(), self.domain_dim(), &basis)
            .expect("kernel vectors sized to domain")
    }

    pub fn is_injective(&self) -> bool {
        self.matrix.rank() == self.domain_dim()
    }

    /// Image `ℓ(X)` of a subspace of the domain.
    pub fn apply(&self, x: &Subspace) -> Result<Subspace> {
        self.check_domain(x)?;
        let mut images = MatrixFp::zeros(self.field(), 0, self.codomain_dim());
        for v in x.basis_vectors() {
            images.push_row(&self.matrix.mul_vec(v)?)?;
        }
        Ok(Subspace::from_matrix(images))
    }

    /// Full inverse image `{v : ℓ(v) ∈ Y}`.
    ///
    /// Computed as the kernel of `q ∘ ℓ`, where `q` reduces a codomain vector
    /// against the RREF basis of `Y` and keeps its non-pivot coordinates; the
    /// kernel of `q` is exactly `Y`.
    pub fn preimage(&self, y: &Subspace) -> Result<Subspace> {
        if y.field() != self.field() {
            return Err(Error::FieldMismatch {
                left: self.field().modulus(),
                right: y.field().modulus(),
            });
        }
        if y.ambient_dim() != self.codomain_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.codomain_dim(),
                got: y.ambient_dim(),
            });
        }
        if y.is_full() {
            return Ok(Subspace::full(self.field(), self.domain_dim()));
        }
        let quotient = self.quotient_matrix(y)?;
        let basis = quotient.kernel_basis();
        Subspace::span(self.field(), self.domain_dim(), &basis)
    }

    /// Matrix of `q ∘ ℓ` where `q` sends a codomain vector to the non-pivot
    /// coordinates of its residue modulo `y`. Its kernel is `ℓ⁻¹(y)`.
    pub(crate) fn quotient_matrix(&self, y: &Subspace) -> Result<MatrixFp> {
        let mut keep = vec![true; self.codomain_dim()];
        for &c in y.pivots() {
            keep[c] = false;
        }
        let kept: Vec<usize> = (0..self.codomain_dim()).filter(|&c| keep[c]).collect();
        let mut quotient = MatrixFp::zeros(self.field(), kept.len(), self.domain_dim());
        for c in 0..self.domain_dim() {
            let residue = y.reduce_vector(&self.matrix.column(c))?;
            for (r, &k) in kept.iter().enumerate() {
                quotient.set(r, c, residue[k]);
            }
        }
        Ok(quotient)
    }

    fn check_domain(&self, x: &Subspace) -> Result<()> {
        if x.field() != self.field() {
            return Err(Error::FieldMismatch {
                left: self.field().modulus(),
                right: x.field().modulus(),
            });
        }
        if x.ambient_dim() != self.domain_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.domain_dim(),
                got: x.ambient_dim(),
            });
        }
        Ok(())
    }
}

use std::fmt;

use super::field::Fp;
use super::matrix::MatrixFp;
use crate::error::{Error, Result};

/// A subspace of F_p^m stored by its reduced row-echelon basis.
///
/// The RREF basis is unique, so structural equality of two `Subspace`s is
/// equality of the subspaces themselves.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: MatrixFp,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Fp, ambient_dim: usize) -> Self {
        Self {
            basis: MatrixFp::zeros(field, 0, ambient_dim),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: Fp, ambient_dim: usize) -> Self {
        Self {
            basis: MatrixFp::identity(field, ambient_dim),
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// Row space of an arbitrary matrix.
    pub fn from_matrix(mut m: MatrixFp) -> Self {
        let pivots = m.reduce_in_place();
        Self { basis: m, pivots }
    }

    /// Wraps a matrix that is already in RREF with no zero rows.
    ///
    /// Used by the enumerator, which emits canonical forms directly.
    pub(crate) fn from_rref_unchecked(basis: MatrixFp, pivots: Vec<usize>) -> Self {
        debug_assert_eq!(
            {
                let mut b = basis.clone();
                b.reduce_in_place();
                b
            },
            basis
        );
        Self { basis, pivots }
    }

    /// Smallest subspace containing every vector.
    pub fn span<V: AsRef<[u32]>>(field: Fp, ambient_dim: usize, vectors: &[V]) -> Result<Self> {
        Ok(Self::from_matrix(MatrixFp::from_residue_rows(
            field,
            ambient_dim,
            vectors,
        )?))
    }

    /// Span of the standard basis vectors with the given (0-based) coordinates.
    pub fn coordinate(field: Fp, ambient_dim: usize, coords: &[usize]) -> Result<Self> {
        let mut rows = Vec::with_capacity(coords.len());
        for &c in coords {
            if c >= ambient_dim {
                return Err(Error::IndexOutOfRange {
                    index: c,
                    max: ambient_dim.saturating_sub(1),
                });
            }
            let mut e = vec![0; ambient_dim];
            e[c] = 1;
            rows.push(e);
        }
        Self::span(field, ambient_dim, &rows)
    }

    #[inline]
    pub fn field(&self) -> Fp {
        self.basis.field()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim()
    }

    pub fn basis(&self) -> &MatrixFp {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_vectors(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.basis.row_iter()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        self.basis.check_field(&other.basis)?;
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: other.ambient_dim(),
            });
        }
        Ok(())
    }

    /// Residue of `v` after clearing every pivot coordinate against the basis.
    /// Zero exactly when `v` lies in the subspace.
    pub fn reduce_vector(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: v.len(),
            });
        }
        let f = self.field();
        let p = f.modulus();
        let mut out: Vec<u32> = v.iter().map(|&x| x % p).collect();
        for (row, &pc) in self.basis.row_iter().zip(&self.pivots) {
            let c = out[pc];
            if c == 0 {
                continue;
            }
            let neg = f.neg(c);
            for (o, &b) in out[pc..].iter_mut().zip(&row[pc..]) {
                if b != 0 {
                    *o = f.mul_add(*o, neg, b);
                }
            }
        }
        Ok(out)
    }

    pub fn contains(&self, v: &[u32]) -> Result<bool> {
        Ok(self.reduce_vector(v)?.iter().all(|&x| x == 0))
    }

    /// `self ⊆ other`.
    pub fn is_subspace_of(&self, other: &Self) -> Result<bool> {
        self.check_compatible(other)?;
        if self.dim() > other.dim() {
            return Ok(false);
        }
        for v in self.basis_vectors() {
            if !other.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut m = self.basis.clone();
        for v in other.basis_vectors() {
            m.push_row(v)?;
        }
        Ok(Self::from_matrix(m))
    }

    /// Intersection by the Zassenhaus construction: row-reduce
    /// `[A | A ; B | 0]`; rows whose left half vanishes span `A ∩ B` on the right.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let m = self.ambient_dim();
        let f = self.field();
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(f, m));
        }
        if self.is_full() {
            return Ok(other.clone());
        }
        if other.is_full() {
            return Ok(self.clone());
        }
        let mut z = MatrixFp::zeros(f, 0, 2 * m);
        let mut row = vec![0; 2 * m];
        for a in self.basis_vectors() {
            row[..m].copy_from_slice(a);
            row[m..].copy_from_slice(a);
            z.push_row(&row)?;
        }
        for b in other.basis_vectors() {
            row[..m].copy_from_slice(b);
            row[m..].iter_mut().for_each(|x| *x = 0);
            z.push_row(&row)?;
        }
        let pivots = z.reduce_in_place();
        let first = pivots.iter().position(|&c| c >= m).unwrap_or(pivots.len());
        let rows: Vec<&[u32]> = (first..pivots.len()).map(|r| &z.row(r)[m..]).collect();
        Self::span(f, m, &rows)
    }

    /// First basis vector of `self` not contained in `other`.
    pub fn first_vector_outside(&self, other: &Self) -> Result<Option<Vec<u32>>> {
        self.check_compatible(other)?;
        for v in self.basis_vectors() {
            if !other.contains(v)? {
                return Ok(Some(v.to_vec()));
            }
        }
        Ok(None)
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace(dim {} in F_{}^{}) {:?}",
            self.dim(),
            self.field().modulus(),
            self.ambient_dim(),
            self.basis
        )
    }
}

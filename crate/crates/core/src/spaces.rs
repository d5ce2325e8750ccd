//! The spaces `U(n)`, `V(n)`, `W(n)` with their distinguished bases, and the
//! map families `ψ_i : U → V` and `φ_k : V → W`.
//!
//! Index conventions (all 1-based, as in the group-theoretic notation):
//!
//! * `U` has basis `x_1, …, x_n`;
//! * `V` has basis `v_ji`, `1 ≤ i < j ≤ n`, ordered lexicographically by `(j, i)`;
//! * `W` has basis `w_jik`, `1 ≤ i < j ≤ n`, `i ≤ k ≤ n`, ordered
//!   lexicographically by `(j, i, k)`.
//!
//! `v_ji` stands for the commutator `[x_j, x_i]` and `w_jik` for
//! `[[x_j, x_i], x_k]`. With the lexicographic order the coordinates of
//! `V(n-1)` are exactly the first `C(n-1, 2)` coordinates of `V(n)`.

use crate::error::{Error, Result};
use crate::linalg::{Fp, LinearMap, MatrixFp, Subspace};

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Everything derived from `(p, n)`: bases, index tables and the ψ/φ matrices.
/// Immutable once built.
#[derive(Clone, Debug)]
pub struct SpaceContext {
    field: Fp,
    n: usize,
    v_index: Vec<(usize, usize)>,
    w_index: Vec<(usize, usize, usize)>,
    w_lookup: Vec<Option<usize>>,
    psi: Vec<LinearMap>,
    phi: Vec<LinearMap>,
    phi_images: Vec<Subspace>,
}

impl SpaceContext {
    /// `make_context(p, n)`.
    pub fn new(p: u64, n: usize) -> Result<Self> {
        Self::with_field(Fp::new(p)?, n)
    }

    pub fn with_field(field: Fp, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewGenerators { n, min: 2 });
        }
        let v_index: Vec<(usize, usize)> =
            (2..=n).flat_map(|j| (1..j).map(move |i| (j, i))).collect();
        let w_index: Vec<(usize, usize, usize)> = v_index
            .iter()
            .flat_map(|&(j, i)| (i..=n).map(move |k| (j, i, k)))
            .collect();
        let mut w_lookup = vec![None; (n + 1) * (n + 1) * (n + 1)];
        for (idx, &(j, i, k)) in w_index.iter().enumerate() {
            w_lookup[(j * (n + 1) + i) * (n + 1) + k] = Some(idx);
        }

        let mut ctx = Self {
            field,
            n,
            v_index,
            w_index,
            w_lookup,
            psi: Vec::new(),
            phi: Vec::new(),
            phi_images: Vec::new(),
        };
        debug_assert_eq!(ctx.dim_w(), 2 * binomial(n, 2) + 2 * binomial(n, 3));

        let minus_one = field.neg(1);
        for i in 1..=n {
            let mut m = MatrixFp::zeros(field, ctx.dim_v(), n);
            for j in 1..=n {
                if i < j {
                    m.set(ctx.v_coord(j, i).unwrap(), j - 1, 1);
                } else if i > j {
                    m.set(ctx.v_coord(i, j).unwrap(), j - 1, minus_one);
                }
            }
            ctx.psi.push(LinearMap::new(m));
        }
        for k in 1..=n {
            let mut m = MatrixFp::zeros(field, ctx.dim_w(), ctx.dim_v());
            for (col, &(j, i)) in ctx.v_index.iter().enumerate() {
                if k >= i {
                    m.set(ctx.w_coord(j, i, k).unwrap(), col, 1);
                } else {
                    // φ_k(v_ji) = w_jki - w_ikj when k < i
                    m.set(ctx.w_coord(j, k, i).unwrap(), col, 1);
                    m.set(ctx.w_coord(i, k, j).unwrap(), col, minus_one);
                }
            }
            ctx.phi.push(LinearMap::new(m));
        }
        let full_v = Subspace::full(field, ctx.dim_v());
        ctx.phi_images = ctx
            .phi
            .iter()
            .map(|phi| phi.apply(&full_v).expect("φ_k has domain V"))
            .collect();
        Ok(ctx)
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn p(&self) -> u32 {
        self.field.modulus()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim_u(&self) -> usize {
        self.n
    }

    pub fn dim_v(&self) -> usize {
        self.v_index.len()
    }

    pub fn dim_w(&self) -> usize {
        self.w_index.len()
    }

    /// `(j, i)` labels of the `V` coordinates in order.
    pub fn v_index(&self) -> &[(usize, usize)] {
        &self.v_index
    }

    /// `(j, i, k)` labels of the `W` coordinates in order.
    pub fn w_index(&self) -> &[(usize, usize, usize)] {
        &self.w_index
    }

    /// Coordinate of `v_ji`, if `1 ≤ i < j ≤ n`.
    pub fn v_coord(&self, j: usize, i: usize) -> Option<usize> {
        (1 <= i && i < j && j <= self.n).then(|| binomial(j - 1, 2) + (i - 1))
    }

    /// Coordinate of `w_jik`, if the triple is a basis label.
    pub fn w_coord(&self, j: usize, i: usize, k: usize) -> Option<usize> {
        let n = self.n;
        if j > n || i > n || k > n {
            return None;
        }
        self.w_lookup[(j * (n + 1) + i) * (n + 1) + k]
    }

    pub fn v_label(&self, coord: usize) -> String {
        let (j, i) = self.v_index[coord];
        format!("v{j}{i}")
    }

    pub fn w_label(&self, coord: usize) -> String {
        let (j, i, k) = self.w_index[coord];
        format!("w{j}{i}{k}")
    }

    /// Vector in `V` from `(coefficient, j, i)` terms.
    pub fn v_vector(&self, terms: &[(i64, usize, usize)]) -> Result<Vec<u32>> {
        let f = self.field;
        let mut v = vec![0; self.dim_v()];
        for &(c, j, i) in terms {
            let idx = self.v_coord(j, i).ok_or(Error::IndexOutOfRange {
                index: j.max(i),
                max: self.n,
            })?;
            v[idx] = f.add(v[idx], f.reduce(c));
        }
        Ok(v)
    }

    /// Subspace of `V` spanned by vectors given as `(coefficient, j, i)` terms.
    pub fn v_span(&self, gens: &[&[(i64, usize, usize)]]) -> Result<Subspace> {
        let vecs = gens
            .iter()
            .map(|t| self.v_vector(t))
            .collect::<Result<Vec<_>>>()?;
        Subspace::span(self.field, self.dim_v(), &vecs)
    }

    pub fn zero_v(&self) -> Subspace {
        Subspace::zero(self.field, self.dim_v())
    }

    pub fn full_v(&self) -> Subspace {
        Subspace::full(self.field, self.dim_v())
    }

    pub fn full_w(&self) -> Subspace {
        Subspace::full(self.field, self.dim_w())
    }

    fn check_index(&self, i: usize) -> Result<usize> {
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange {
                index: i,
                max: self.n,
            });
        }
        Ok(i - 1)
    }

    /// `ψ_i`, 1-based.
    pub fn psi(&self, i: usize) -> Result<&LinearMap> {
        Ok(&self.psi[self.check_index(i)?])
    }

    /// `φ_k`, 1-based.
    pub fn phi(&self, k: usize) -> Result<&LinearMap> {
        Ok(&self.phi[self.check_index(k)?])
    }

    pub fn psi_maps(&self) -> &[LinearMap] {
        &self.psi
    }

    pub fn phi_maps(&self) -> &[LinearMap] {
        &self.phi
    }

    /// The image `φ_k(V) ⊆ W`.
    pub fn phi_image_of_v(&self, k: usize) -> Result<&Subspace> {
        Ok(&self.phi_images[self.check_index(k)?])
    }

    /// `⟨u⟩* = span{ψ_1(u), …, ψ_n(u)} ⊆ V`, of dimension `n - 1`.
    pub fn u_star(&self, u: &[u32]) -> Result<Subspace> {
        if u.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: u.len(),
            });
        }
        if u.iter().all(|&x| x % self.p() == 0) {
            return Err(Error::ZeroVector);
        }
        let images = self
            .psi
            .iter()
            .map(|psi| psi.apply_vector(u))
            .collect::<Result<Vec<_>>>()?;
        Subspace::span(self.field, self.dim_v(), &images)
    }

    /// The exterior square `Λ²A` acting on `V` coordinates, for an invertible
    /// `A` acting on `U` (column `j` of `A` is the image of `x_j`).
    ///
    /// `v_ji = x_j ∧ x_i ↦ (A x_j) ∧ (A x_i)`; the coefficient on `v_ab`
    /// (`a > b`) is the 2×2 minor `A_aj A_bi − A_bj A_ai`.
    pub fn induced_basis_change(&self, a: &MatrixFp) -> Result<LinearMap> {
        if a.rows() != self.n || a.cols() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: if a.rows() != self.n {
                    a.rows()
                } else {
                    a.cols()
                },
            });
        }
        if a.field() != self.field {
            return Err(Error::FieldMismatch {
                left: self.p(),
                right: a.field().modulus(),
            });
        }
        if a.rank() < self.n {
            return Err(Error::Singular);
        }
        let f = self.field;
        let mut m = MatrixFp::zeros(f, self.dim_v(), self.dim_v());
        for (col, &(j, i)) in self.v_index.iter().enumerate() {
            for (row, &(ra, rb)) in self.v_index.iter().enumerate() {
                let (a_, b_, j_, i_) = (ra - 1, rb - 1, j - 1, i - 1);
                let plus = f.mul(a.get(a_, j_), a.get(b_, i_));
                let minus = f.mul(a.get(b_, j_), a.get(a_, i_));
                m.set(row, col, f.sub(plus, minus));
            }
        }
        Ok(LinearMap::new(m))
    }
}

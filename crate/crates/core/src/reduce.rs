//! Structural reductions and numeric shortcuts for the closedness question:
//! central lines and their cancellation, block decompositions, dimension
//! tests, and the rule for 5-dimensional subspaces of `V(4)`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::closure::{is_closed, star_down_with, star_up_with};
use crate::error::{Error, Result};
use crate::linalg::{Fp, LinearMap, MatrixFp, Subspace};
use crate::spaces::{binomial, SpaceContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    CentralCancellation,
    BlockSplit,
    DimensionSufficient,
    DimensionNecessaryFail,
    N4Dim5Rule,
    DirectClosure,
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StepKind::CentralCancellation => "central-cancellation",
            StepKind::BlockSplit => "block-split",
            StepKind::DimensionSufficient => "dimension-sufficient",
            StepKind::DimensionNecessaryFail => "dimension-necessary-fail",
            StepKind::N4Dim5Rule => "n4-dim5-rule",
            StepKind::DirectClosure => "direct-closure",
        };
        f.write_str(s)
    }
}

/// One step of a reduction. `n` and `dim_x` describe the state the step was
/// applied to; `u` is the cancelled central vector in that state's coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionStep {
    pub kind: StepKind,
    pub n: usize,
    pub dim_x: usize,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<(Vec<usize>, Vec<usize>)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
    pub p: u32,
    pub final_n: usize,
    #[serde(serialize_with = "serialize_basis")]
    pub final_subspace: Subspace,
}

fn serialize_basis<S: Serializer>(x: &Subspace, s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<&[u32]> = x.basis_vectors().collect();
    rows.serialize(s)
}

impl ReductionTrace {
    pub fn new(ctx: &SpaceContext, x: &Subspace) -> Self {
        Self {
            steps: Vec::new(),
            p: ctx.p(),
            final_n: ctx.n(),
            final_subspace: x.clone(),
        }
    }

    pub fn last_kind(&self) -> Option<StepKind> {
        self.steps.last().map(|s| s.kind)
    }

    /// Re-runs every recorded central cancellation from `(ctx, x)` and returns
    /// the resulting context and subspace.
    pub fn replay(&self, ctx: &SpaceContext, x: &Subspace) -> Result<(SpaceContext, Subspace)> {
        let mut cur_ctx = ctx.clone();
        let mut cur_x = x.clone();
        for step in &self.steps {
            if step.kind != StepKind::CentralCancellation {
                continue;
            }
            if step.n != cur_ctx.n() || step.dim_x != cur_x.dim() {
                return Err(Error::Internal(format!(
                    "trace step expects (n={}, dim={}), replay is at (n={}, dim={})",
                    step.n,
                    step.dim_x,
                    cur_ctx.n(),
                    cur_x.dim()
                )));
            }
            let u = step
                .u
                .as_ref()
                .ok_or_else(|| Error::Internal("cancellation step without vector".into()))?;
            let c = cancel_central(&cur_ctx, &cur_x, u)?;
            cur_ctx = c.ctx;
            cur_x = c.x;
        }
        Ok((cur_ctx, cur_x))
    }
}

/// `{u ∈ U : ψ_i(u) ∈ X for all i}`: the directions `u` with `⟨u⟩* ⊆ X`.
pub fn central_lines(ctx: &SpaceContext, x: &Subspace) -> Result<Subspace> {
    star_down_with(ctx.psi_maps(), x)
}

/// Output of [`cancel_central`].
#[derive(Clone, Debug)]
pub struct Cancellation {
    /// Context for `n - 1` generators.
    pub ctx: SpaceContext,
    /// The reduced subspace of `V(n-1)`.
    pub x: Subspace,
    /// Basis change `A` on `U(n)` with `A u = x_n`.
    pub basis_change: MatrixFp,
    /// `Λ²A`, the induced map on `V(n)`.
    pub induced: LinearMap,
}

/// Invertible matrix whose last column is `u` and whose other columns are the
/// first `n - 1` standard vectors that keep the columns independent.
pub fn completion_matrix(field: Fp, u: &[u32]) -> Result<MatrixFp> {
    let n = u.len();
    if u.iter().all(|&x| x % field.modulus() == 0) {
        return Err(Error::ZeroVector);
    }
    let mut cols: Vec<Vec<u32>> = Vec::with_capacity(n);
    for a in 0..n {
        if cols.len() == n - 1 {
            break;
        }
        let mut e = vec![0; n];
        e[a] = 1;
        let mut trial = cols.clone();
        trial.push(e.clone());
        trial.push(u.to_vec());
        if MatrixFp::from_residue_rows(field, n, &trial)?.rank() == trial.len() {
            cols.push(e);
        }
    }
    cols.push(u.iter().map(|&x| x % field.modulus()).collect());
    MatrixFp::from_columns(field, n, &cols)
}

/// Moves the central direction `u` to `x_n` and drops it.
///
/// With `A` the inverse of [`completion_matrix`], `Λ²A` carries `⟨u⟩*` onto
/// `⟨v_ni | i < n⟩`; the image of `X` then splits as `X̃ ⊕ ⟨v_ni⟩` with
/// `X̃ ⊆ V(n-1)`, and `X` is closed iff `X̃` is.
pub fn cancel_central(ctx: &SpaceContext, x: &Subspace, u: &[u32]) -> Result<Cancellation> {
    let n = ctx.n();
    if n < 3 {
        return Err(Error::Precondition(format!(
            "central cancellation needs n >= 3, got n = {n}"
        )));
    }
    if x.ambient_dim() != ctx.dim_v() {
        return Err(Error::DimensionMismatch {
            expected: ctx.dim_v(),
            got: x.ambient_dim(),
        });
    }
    let u_star = ctx.u_star(u)?;
    if !u_star.is_subspace_of(x)? {
        return Err(Error::NotCentral);
    }
    let field = ctx.field();
    let b = completion_matrix(field, u)?;
    let a = b.inverse()?;
    let induced = ctx.induced_basis_change(&a)?;
    let y = induced.apply(x)?;

    let m = binomial(n - 1, 2);
    let tail: Vec<usize> = (m..ctx.dim_v()).collect();
    let last_block = Subspace::coordinate(field, ctx.dim_v(), &tail)?;
    if !last_block.is_subspace_of(&y)? {
        return Err(Error::Internal(
            "basis change did not carry <u>* onto <v_ni>".into(),
        ));
    }
    let projected: Vec<&[u32]> = y.basis_vectors().map(|v| &v[..m]).collect();
    let reduced = Subspace::span(field, m, &projected)?;
    if reduced.dim() + (n - 1) != x.dim() {
        return Err(Error::Internal(
            "cancellation changed the dimension count".into(),
        ));
    }
    Ok(Cancellation {
        ctx: SpaceContext::with_field(field, n - 1)?,
        x: reduced,
        basis_change: a,
        induced,
    })
}

/// Inverse of the cancellation: `Λ²A⁻¹ (X̃ ⊕ ⟨v_ni⟩)` back in `V(n)`.
pub fn lift_cancelled(ctx: &SpaceContext, c: &Cancellation) -> Result<Subspace> {
    let m = c.x.ambient_dim();
    let mut rows: Vec<Vec<u32>> =
        c.x.basis_vectors()
            .map(|v| {
                let mut w = v.to_vec();
                w.resize(ctx.dim_v(), 0);
                w
            })
            .collect();
    for t in m..ctx.dim_v() {
        let mut e = vec![0; ctx.dim_v()];
        e[t] = 1;
        rows.push(e);
    }
    let block = Subspace::span(ctx.field(), ctx.dim_v(), &rows)?;
    let back = ctx.induced_basis_change(&c.basis_change.inverse()?)?;
    back.apply(&block)
}

/// A decomposition `X = X_I ⊕ X_J ⊕ V_(I,J)`. Index sets are 1-based and
/// sorted; `x_i` and `x_j` are kept in `V(n)` coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSplit {
    pub i_set: Vec<usize>,
    pub j_set: Vec<usize>,
    pub x_i: Subspace,
    pub x_j: Subspace,
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for a in start..=n {
            if n - a + 1 < k - cur.len() {
                break;
            }
            cur.push(a);
            go(a + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, k, &mut Vec::new(), &mut out);
    out
}

/// Coordinates of `V_I`, `V_J` and `V_(I,J)` for a partition.
pub fn partition_coords(
    ctx: &SpaceContext,
    i_set: &[usize],
) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let in_i = |a: usize| i_set.contains(&a);
    let (mut vi, mut vj, mut mixed) = (Vec::new(), Vec::new(), Vec::new());
    for (c, &(j, i)) in ctx.v_index().iter().enumerate() {
        match (in_i(j), in_i(i)) {
            (true, true) => vi.push(c),
            (false, false) => vj.push(c),
            _ => mixed.push(c),
        }
    }
    (vi, vj, mixed)
}

/// Tests one partition; `i_set` is 1-based.
pub fn split_along(
    ctx: &SpaceContext,
    x: &Subspace,
    i_set: &[usize],
) -> Result<Option<BlockSplit>> {
    let n = ctx.n();
    let field = ctx.field();
    let j_set: Vec<usize> = (1..=n).filter(|a| !i_set.contains(a)).collect();
    if i_set.is_empty() || j_set.is_empty() {
        return Ok(None);
    }
    let (vi, vj, mixed) = partition_coords(ctx, i_set);
    for &c in &mixed {
        let mut e = vec![0; ctx.dim_v()];
        e[c] = 1;
        if !x.contains(&e)? {
            return Ok(None);
        }
    }
    let x_i = x.intersect(&Subspace::coordinate(field, ctx.dim_v(), &vi)?)?;
    let x_j = x.intersect(&Subspace::coordinate(field, ctx.dim_v(), &vj)?)?;
    if x_i.dim() + x_j.dim() + mixed.len() != x.dim() {
        return Ok(None);
    }
    Ok(Some(BlockSplit {
        i_set: i_set.to_vec(),
        j_set,
        x_i,
        x_j,
    }))
}

/// First nontrivial partition `{1..n} = I ⊔ J` along which `X` splits,
/// searching by increasing `|I|` and lexicographically within a size.
pub fn block_split(ctx: &SpaceContext, x: &Subspace) -> Result<Option<BlockSplit>> {
    let n = ctx.n();
    for size in 1..=n / 2 {
        for i_set in combinations(n, size) {
            if 2 * size == n && i_set[0] != 1 {
                continue;
            }
            if let Some(split) = split_along(ctx, x, &i_set)? {
                return Ok(Some(split));
            }
        }
    }
    Ok(None)
}

/// Relabels a subspace of `V_S ⊆ V(n)` (given in `V(n)` coordinates) into
/// `V(|S|)` through the order-preserving bijection `S → {1..|S|}`.
pub fn restrict_to_indices(
    ctx: &SpaceContext,
    indices: &[usize],
    x: &Subspace,
) -> Result<(SpaceContext, Subspace)> {
    let sub = SpaceContext::with_field(ctx.field(), indices.len())?;
    let mut rows = Vec::with_capacity(x.dim());
    for v in x.basis_vectors() {
        let mut w = vec![0; sub.dim_v()];
        for (c, &(j, i)) in ctx.v_index().iter().enumerate() {
            if v[c] == 0 {
                continue;
            }
            let (Some(jj), Some(ii)) = (
                indices.iter().position(|&a| a == j),
                indices.iter().position(|&a| a == i),
            ) else {
                return Err(Error::Precondition(format!(
                    "subspace has a component outside the index set {indices:?}"
                )));
            };
            w[sub
                .v_coord(jj + 1, ii + 1)
                .expect("order-preserving relabel")] = v[c];
        }
        rows.push(w);
    }
    let relabelled = Subspace::span(ctx.field(), sub.dim_v(), &rows)?;
    Ok((sub, relabelled))
}

/// Closedness of a block with respect to `{φ_i}_{i ∈ S}`. A single index
/// leaves `V_S = 0`, which is always closed.
pub fn block_is_closed(ctx: &SpaceContext, indices: &[usize], x_part: &Subspace) -> Result<bool> {
    if indices.len() < 2 {
        return Ok(true);
    }
    let (sub, x) = restrict_to_indices(ctx, indices, x_part)?;
    is_closed(&sub, &x)
}

/// The direct sum
/// `⋂_{i∈I} φ_i⁻¹⟨φ_k(X_I) | k∈I⟩ ⊕ ⋂_{j∈J} φ_j⁻¹⟨φ_k(X_J) | k∈J⟩ ⊕ V_(I,J)`,
/// computed inside `V(n)` with the restricted map families.
pub fn block_closure_formula(ctx: &SpaceContext, split: &BlockSplit) -> Result<Subspace> {
    let family = |set: &[usize]| -> Vec<LinearMap> {
        set.iter()
            .map(|&k| ctx.phi(k).expect("index in range").clone())
            .collect()
    };
    let part = |set: &[usize], x: &Subspace| -> Result<Subspace> {
        let maps = family(set);
        star_down_with(&maps, &star_up_with(&maps, x)?)
    };
    let ci = part(&split.i_set, &split.x_i)?;
    let cj = part(&split.j_set, &split.x_j)?;
    let (_, _, mixed) = partition_coords(ctx, &split.i_set);
    let vij = Subspace::coordinate(ctx.field(), ctx.dim_v(), &mixed)?;
    ci.sum(&cj)?.sum(&vij)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionTests {
    /// `dim X < 2√n`, decided as `(dim X)² < 4n`.
    pub sufficient_closed: bool,
    /// `2ℓ + C(ℓ, 2) ≥ n'`; false means the group cannot be capable.
    pub necessary_capable: bool,
    /// Rank of the derived subgroup, `C(n, 2) − dim X`.
    pub ell: usize,
    /// `n − dim(central lines)`, the rank of `G/Z(G)`.
    pub n_reduced: usize,
}

pub fn dimension_tests(ctx: &SpaceContext, x: &Subspace) -> Result<DimensionTests> {
    let n = ctx.n();
    let k = x.dim();
    let ell = ctx.dim_v() - k;
    let n_reduced = n - central_lines(ctx, x)?.dim();
    Ok(DimensionTests {
        sufficient_closed: k * k < 4 * n,
        necessary_capable: 2 * ell + binomial(ell, 2) >= n_reduced,
        ell,
        n_reduced,
    })
}

/// For `n = 4` and `dim X = 5`: `X` is closed iff it has a central line.
pub fn n4_dim5_rule(ctx: &SpaceContext, x: &Subspace) -> Result<bool> {
    if ctx.n() != 4 || x.dim() != 5 {
        return Err(Error::Precondition(format!(
            "rule applies to n = 4, dim X = 5; got n = {}, dim X = {}",
            ctx.n(),
            x.dim()
        )));
    }
    Ok(!central_lines(ctx, x)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::closure;

    fn ctx(n: usize) -> SpaceContext {
        SpaceContext::new(3, n).unwrap()
    }

    fn unit(n: usize, i: usize) -> Vec<u32> {
        let mut v = vec![0; n];
        v[i - 1] = 1;
        v
    }

    fn extra_special(c: &SpaceContext) -> Subspace {
        c.v_span(&[
            &[(1, 3, 1)],
            &[(1, 4, 1)],
            &[(1, 3, 2)],
            &[(1, 4, 2)],
            &[(1, 2, 1), (-1, 4, 3)],
        ])
        .unwrap()
    }

    #[test]
    fn central_lines_examples() {
        let c = ctx(4);
        let x = c
            .v_span(&[&[(1, 2, 1)], &[(1, 3, 1)], &[(1, 4, 1)], &[(1, 4, 3)]])
            .unwrap();
        assert!(central_lines(&c, &x)
            .unwrap()
            .contains(&unit(4, 1))
            .unwrap());
        assert!(central_lines(&c, &c.zero_v()).unwrap().is_zero());
        assert!(central_lines(&c, &extra_special(&c)).unwrap().is_zero());
        assert!(central_lines(&c, &c.full_v()).unwrap().is_full());
    }

    #[test]
    fn central_lines_match_line_enumeration() {
        // every line <u> of U(4) over F_3, checked against <u>* ⊆ X directly
        let c = ctx(4);
        let x = c
            .v_span(&[
                &[(1, 2, 1), (1, 3, 1)],
                &[(1, 3, 2)],
                &[(1, 4, 1)],
                &[(1, 4, 2), (2, 4, 3)],
            ])
            .unwrap();
        let lines = central_lines(&c, &x).unwrap();
        for code in 1..81u32 {
            let u: Vec<u32> = (0..4).map(|t| code / 3u32.pow(t) % 3).collect();
            let direct = c.u_star(&u).unwrap().is_subspace_of(&x).unwrap();
            assert_eq!(direct, lines.contains(&u).unwrap(), "{u:?}");
        }
    }

    #[test]
    fn cancel_x3_at_n3() {
        let c = ctx(3);
        let x = c
            .v_span(&[&[(1, 2, 1)], &[(1, 3, 1)], &[(1, 3, 2)]])
            .unwrap();
        let out = cancel_central(&c, &x, &unit(3, 3)).unwrap();
        assert_eq!(out.ctx.n(), 2);
        assert_eq!(out.x, out.ctx.v_span(&[&[(1, 2, 1)]]).unwrap());
        assert_eq!(lift_cancelled(&c, &out).unwrap(), x);
    }

    #[test]
    fn cancel_leaves_zero_when_x_is_u_star() {
        let c = ctx(4);
        let x = c.u_star(&unit(4, 1)).unwrap();
        let out = cancel_central(&c, &x, &unit(4, 1)).unwrap();
        assert_eq!(out.ctx.n(), 3);
        assert!(out.x.is_zero());
    }

    #[test]
    fn cancel_central_errors() {
        let c = ctx(4);
        assert!(matches!(
            cancel_central(&c, &c.zero_v(), &unit(4, 1)),
            Err(Error::NotCentral)
        ));
        assert!(matches!(
            cancel_central(&c, &c.full_v(), &[0, 0, 0, 0]),
            Err(Error::ZeroVector)
        ));
        let c2 = ctx(2);
        assert!(matches!(
            cancel_central(&c2, &c2.full_v(), &unit(2, 1)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn completion_is_invertible_and_maps_last_column_to_u() {
        let f = Fp::new(5).unwrap();
        let u = vec![0, 3, 0, 1];
        let b = completion_matrix(f, &u).unwrap();
        assert_eq!(b.column(3), u);
        assert_eq!(b.rank(), 4);
        assert_eq!(b.column(0), vec![1, 0, 0, 0]);
        assert_eq!(b.column(1), vec![0, 1, 0, 0]);
        assert_eq!(b.column(2), vec![0, 0, 1, 0]);
    }

    #[test]
    fn block_split_examples() {
        let c = ctx(4);
        let split_x = c
            .v_span(&[
                &[(1, 2, 1)],
                &[(1, 4, 3)],
                &[(1, 3, 1)],
                &[(1, 4, 1)],
                &[(1, 3, 2)],
                &[(1, 4, 2)],
            ])
            .unwrap();
        // V itself splits already along I = {1}
        assert_eq!(block_split(&c, &split_x).unwrap().unwrap().i_set, vec![1]);

        let x = c
            .v_span(&[
                &[(1, 2, 1)],
                &[(1, 3, 1)],
                &[(1, 4, 1)],
                &[(1, 3, 2)],
                &[(1, 4, 2)],
            ])
            .unwrap();
        let s = split_along(&c, &x, &[1, 2]).unwrap().unwrap();
        assert_eq!(s.j_set, vec![3, 4]);
        assert_eq!(s.x_i.dim(), 1);
        assert!(s.x_j.is_zero());

        let none = c.v_span(&[&[(1, 2, 1), (-1, 4, 3)]]).unwrap();
        assert!(block_split(&c, &none).unwrap().is_none());
    }

    #[test]
    fn block_split_recovers_constructed_partition() {
        // X_I = <v_21>, X_J = <v_43>, I = {1,2}: the sum with V_(I,J) is all of V,
        // which also splits along I = {1}, and the search visits |I| = 1 first.
        let c = ctx(4);
        let (_, _, mixed) = partition_coords(&c, &[1, 2]);
        let x = Subspace::coordinate(c.field(), 6, &mixed)
            .unwrap()
            .sum(&c.v_span(&[&[(1, 2, 1)], &[(1, 4, 3)]]).unwrap())
            .unwrap();
        assert_eq!(block_split(&c, &x).unwrap().unwrap().i_set, vec![1]);
        let s = split_along(&c, &x, &[1, 2]).unwrap().unwrap();
        assert_eq!(s.j_set, vec![3, 4]);
        assert_eq!(s.x_i, c.v_span(&[&[(1, 2, 1)]]).unwrap());
        assert_eq!(s.x_j, c.v_span(&[&[(1, 4, 3)]]).unwrap());
        assert_eq!(
            block_closure_formula(&c, &s).unwrap(),
            closure(&c, &x).unwrap().x_closure
        );

        // without v_43, x_1 is still central: {1} | {2,3,4} comes first
        let y = Subspace::coordinate(c.field(), 6, &mixed)
            .unwrap()
            .sum(&c.v_span(&[&[(1, 2, 1)]]).unwrap())
            .unwrap();
        let s = block_split(&c, &y).unwrap().unwrap();
        assert_eq!((s.i_set.clone(), s.j_set.clone()), (vec![1], vec![2, 3, 4]));
        assert_eq!(s.x_j, c.v_span(&[&[(1, 3, 2)], &[(1, 4, 2)]]).unwrap());
        for s in [s, split_along(&c, &y, &[1, 2]).unwrap().unwrap()] {
            assert_eq!(
                block_closure_formula(&c, &s).unwrap(),
                closure(&c, &y).unwrap().x_closure
            );
        }
        // a plane of mixed vectors with nothing inside the blocks splits nowhere
        let z = c.v_span(&[&[(1, 3, 1), (1, 4, 2)], &[(1, 4, 1)]]).unwrap();
        assert!(block_split(&c, &z).unwrap().is_none());
    }

    #[test]
    fn dimension_tests_examples() {
        let c = ctx(4);
        let three = c
            .v_span(&[&[(1, 2, 1)], &[(1, 3, 2)], &[(1, 4, 3)]])
            .unwrap();
        assert!(dimension_tests(&c, &three).unwrap().sufficient_closed);
        let es = dimension_tests(&c, &extra_special(&c)).unwrap();
        assert_eq!((es.ell, es.n_reduced), (1, 4));
        assert!(!es.necessary_capable);
        assert!(!es.sufficient_closed);

        // n = 5, ℓ = 2: 2·2 + 1 = 5 ≥ 5
        let c5 = ctx(5);
        let coords: Vec<usize> = (0..8).collect();
        let x = Subspace::coordinate(c5.field(), 10, &coords).unwrap();
        let t = dimension_tests(&c5, &x).unwrap();
        assert_eq!(t.ell, 2);
        assert!(t.necessary_capable);
    }

    #[test]
    fn n4_rule_examples() {
        let c = ctx(4);
        let with_central = c
            .u_star(&unit(4, 1))
            .unwrap()
            .sum(&c.v_span(&[&[(1, 3, 2)], &[(1, 4, 2), (1, 4, 3)]]).unwrap())
            .unwrap();
        assert_eq!(with_central.dim(), 5);
        assert!(n4_dim5_rule(&c, &with_central).unwrap());
        assert!(!n4_dim5_rule(&c, &extra_special(&c)).unwrap());
        assert!(n4_dim5_rule(&c, &c.full_v()).is_err());
        assert!(n4_dim5_rule(&ctx(3), &ctx(3).full_v()).is_err());
    }

    #[test]
    fn restrict_relabels_in_order() {
        let c = ctx(5);
        let x = c.v_span(&[&[(1, 5, 2), (2, 4, 2)]]).unwrap();
        let (sub, y) = restrict_to_indices(&c, &[2, 4, 5], &x).unwrap();
        assert_eq!(sub.n(), 3);
        assert_eq!(y, sub.v_span(&[&[(1, 3, 1), (2, 2, 1)]]).unwrap());
        assert!(restrict_to_indices(&c, &[2, 4], &x).is_err());
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(
            combinations(4, 2),
            vec![
                vec![1, 2],
                vec![1, 3],
                vec![1, 4],
                vec![2, 3],
                vec![2, 4],
                vec![3, 4]
            ]
        );
    }
}

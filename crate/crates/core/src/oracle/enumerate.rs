//! Canonical enumeration and uniform sampling of `Gr(k, F_p^m)`.
//!
//! Every `k`-dimensional subspace has exactly one RREF basis, determined by
//! its pivot columns and the entries in the free positions (right of a row's
//! pivot, outside the other pivot columns). Enumerating pivot sets in
//! lexicographic order and free entries as an odometer lists each subspace
//! once, in a fixed order.

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{Fp, MatrixFp, Subspace};

pub const DEFAULT_CEILING: u128 = 10_000_000;

/// `[m choose k]_p`, saturating at `u128::MAX`.
pub fn gaussian_binomial(m: usize, k: usize, p: u32) -> u128 {
    if k > m {
        return 0;
    }
    // [m,k] = [m-1,k-1] + p^k [m-1,k]
    let pow = |e: usize| (p as u128).checked_pow(e as u32).unwrap_or(u128::MAX);
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for mm in 1..=m {
        for kk in (1..=k.min(mm)).rev() {
            row[kk] = row[kk - 1].saturating_add(pow(kk).saturating_mul(row[kk]));
        }
    }
    row[k]
}

/// Total number of subspaces of `F_p^m` whose dimension is in `ks`.
pub fn grassmannian_total(m: usize, ks: &[usize], p: u32) -> u128 {
    ks.iter().fold(0u128, |acc, &k| {
        acc.saturating_add(gaussian_binomial(m, k, p))
    })
}

/// Pivot column sets of size `k` in `0..m`, lexicographic.
pub fn pivot_sets(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > m {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(pos) = (0..k).rev().find(|&i| cur[i] < m - k + i) else {
            return out;
        };
        cur[pos] += 1;
        for i in pos + 1..k {
            cur[i] = cur[i - 1] + 1;
        }
    }
}

/// Free positions `(row, col)` of an RREF basis with the given pivots.
pub fn free_positions(m: usize, pivots: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (r, &pc) in pivots.iter().enumerate() {
        for c in pc + 1..m {
            if !pivots.contains(&c) {
                out.push((r, c));
            }
        }
    }
    out
}

fn rref_from_entries(
    field: Fp,
    m: usize,
    pivots: &[usize],
    free: &[(usize, usize)],
    entries: &[u32],
) -> Subspace {
    let mut basis = MatrixFp::zeros(field, pivots.len(), m);
    for (r, &pc) in pivots.iter().enumerate() {
        basis.set(r, pc, 1);
    }
    for (&(r, c), &e) in free.iter().zip(entries) {
        basis.set(r, c, e);
    }
    Subspace::from_rref_unchecked(basis, pivots.to_vec())
}

/// All subspaces of `F_p^m` with a fixed pivot set.
pub struct PivotCell {
    field: Fp,
    m: usize,
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    counter: Vec<u32>,
    done: bool,
}

impl PivotCell {
    pub fn new(field: Fp, m: usize, pivots: &[usize]) -> Self {
        let free = free_positions(m, pivots);
        Self {
            field,
            m,
            pivots: pivots.to_vec(),
            counter: vec![0; free.len()],
            free,
            done: false,
        }
    }
}

impl Iterator for PivotCell {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        if self.done {
            return None;
        }
        let out = rref_from_entries(self.field, self.m, &self.pivots, &self.free, &self.counter);
        let p = self.field.modulus();
        self.done = true;
        for digit in self.counter.iter_mut().rev() {
            *digit += 1;
            if *digit < p {
                self.done = false;
                break;
            }
            *digit = 0;
        }
        Some(out)
    }
}

/// Every `k`-dimensional subspace of `F_p^m`, in canonical order.
pub fn grassmannian(field: Fp, m: usize, k: usize) -> impl Iterator<Item = Subspace> {
    pivot_sets(m, k)
        .into_iter()
        .flat_map(move |ps| PivotCell::new(field, m, &ps))
}

/// What to enumerate. Exhaustive unless `sample` is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumSpec {
    pub ambient_dim: usize,
    pub dim_k: usize,
    pub field: Fp,
    pub sample: Option<usize>,
    pub seed: u64,
    pub ceiling: u128,
}

impl EnumSpec {
    pub fn exhaustive(field: Fp, ambient_dim: usize, dim_k: usize) -> Self {
        Self {
            ambient_dim,
            dim_k,
            field,
            sample: None,
            seed: 0,
            ceiling: DEFAULT_CEILING,
        }
    }

    pub fn count(&self) -> u128 {
        gaussian_binomial(self.ambient_dim, self.dim_k, self.field.modulus())
    }
}

/// Streams the subspaces described by `spec`: the whole Grassmannian in
/// canonical order, or `sample` seeded uniform draws (with repetition).
pub fn enumerate_subspaces(spec: &EnumSpec) -> Result<Box<dyn Iterator<Item = Subspace> + Send>> {
    if spec.dim_k > spec.ambient_dim {
        return Err(Error::Precondition(format!(
            "dimension {} exceeds ambient dimension {}",
            spec.dim_k, spec.ambient_dim
        )));
    }
    if let Some(count) = spec.sample {
        let sampler = Sampler::new(spec.field, spec.ambient_dim, &[spec.dim_k]);
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        return Ok(Box::new((0..count).map(move |_| sampler.sample(&mut rng))));
    }
    let count = spec.count();
    if count > spec.ceiling {
        return Err(Error::Infeasible {
            count,
            ceiling: spec.ceiling,
        });
    }
    Ok(Box::new(grassmannian(
        spec.field,
        spec.ambient_dim,
        spec.dim_k,
    )))
}

/// Parallel fold over `Gr(k, F_p^m)` for every `k` in `ks`, sharded by pivot
/// set. Shards are merged in canonical order, so the result is deterministic
/// whenever `merge` is associative.
pub fn par_fold_subspaces<A, I, F, M>(
    field: Fp,
    m: usize,
    ks: &[usize],
    init: I,
    fold: F,
    merge: M,
) -> A
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(A, Subspace) -> A + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    let shards: Vec<Vec<usize>> = ks.iter().flat_map(|&k| pivot_sets(m, k)).collect();
    shards
        .into_par_iter()
        .map(|ps| PivotCell::new(field, m, &ps).fold(init(), &fold))
        .reduce(&init, &merge)
}

/// Uniform sampler over the union of `Gr(k, F_p^m)` for `k` in `ks`.
///
/// The dimension is drawn with weight `[m choose k]_p`, then the pivot
/// columns are chosen left to right from
/// `[r choose j]_p = [r-1 choose j]_p + p^(r-j) [r-1 choose j-1]_p`
/// (column skipped, or column is a pivot), and the free entries are filled
/// uniformly. Weights are kept as natural logarithms so large ambient
/// dimensions do not overflow.
pub struct Sampler {
    field: Fp,
    m: usize,
    ks: Vec<usize>,
    k_weights: Option<WeightedIndex<f64>>,
    /// `ln [r choose j]_p` for `r ≤ m`, `j ≤ r`.
    log_gauss: Vec<Vec<f64>>,
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

impl Sampler {
    pub fn new(field: Fp, m: usize, ks: &[usize]) -> Self {
        let ln_p = (field.modulus() as f64).ln();
        let mut log_gauss = vec![vec![f64::NEG_INFINITY; m + 1]; m + 1];
        for r in 0..=m {
            log_gauss[r][0] = 0.0;
            for j in 1..=r {
                let skip = log_gauss[r - 1][j];
                let take = (r - j) as f64 * ln_p + log_gauss[r - 1][j - 1];
                log_gauss[r][j] = log_add(skip, take);
            }
        }
        let ks: Vec<usize> = ks.iter().copied().filter(|&k| k <= m).collect();
        let top = ks
            .iter()
            .map(|&k| log_gauss[m][k])
            .fold(f64::NEG_INFINITY, f64::max);
        let k_weights = WeightedIndex::new(ks.iter().map(|&k| (log_gauss[m][k] - top).exp())).ok();
        Self {
            field,
            m,
            ks,
            k_weights,
            log_gauss,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Subspace {
        let dist = self
            .k_weights
            .as_ref()
            .expect("sampler over an empty set of dimensions");
        let k = self.ks[dist.sample(rng)];
        let ln_p = (self.field.modulus() as f64).ln();
        let mut pivots = Vec::with_capacity(k);
        let mut j = k;
        for c in 0..self.m {
            if j == 0 {
                break;
            }
            let r = self.m - c;
            let take = if j == r {
                1.0
            } else {
                let lt = (r - j) as f64 * ln_p + self.log_gauss[r - 1][j - 1];
                (lt - self.log_gauss[r][j]).exp()
            };
            if rng.gen::<f64>() < take {
                pivots.push(c);
                j -= 1;
            }
        }
        let free = free_positions(self.m, &pivots);
        let p = self.field.modulus();
        let entries: Vec<u32> = free.iter().map(|_| rng.gen_range(0..p)).collect();
        rref_from_entries(self.field, self.m, &pivots, &free, &entries)
    }

    pub fn sample_many(&self, count: usize, seed: u64) -> Vec<Subspace> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| self.sample(&mut rng)).collect()
    }
}

/// A uniformly random invertible `n × n` matrix.
pub fn random_invertible<R: Rng + ?Sized>(field: Fp, n: usize, rng: &mut R) -> MatrixFp {
    let p = field.modulus();
    loop {
        let rows: Vec<Vec<u32>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(0..p)).collect())
            .collect();
        let m = MatrixFp::from_residue_rows(field, n, &rows).expect("square rows");
        if m.rank() == n {
            return m;
        }
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::linalg::rref;

    fn f(p: u64) -> Fp {
        Fp::new(p).unwrap()
    }

    #[test]
    fn gaussian_binomial_values() {
        assert_eq!(gaussian_binomial(2, 1, 3), 4);
        let row: Vec<u128> = (0..=6).map(|k| gaussian_binomial(6, k, 3)).collect();
        assert_eq!(row, vec![1, 364, 11011, 33880, 11011, 364, 1]);
        assert_eq!(grassmannian_total(6, &[0, 1, 2, 3, 4], 3), 56267);
        assert_eq!(gaussian_binomial(3, 4, 3), 0);
        assert_eq!(gaussian_binomial(200, 100, 13), u128::MAX);
    }

    #[test]
    fn pivot_sets_are_lexicographic_combinations() {
        assert_eq!(
            pivot_sets(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(pivot_sets(3, 0), vec![Vec::<usize>::new()]);
        assert!(pivot_sets(2, 3).is_empty());
    }

    #[test]
    fn enumeration_counts_and_uniqueness() {
        for (m, k, p) in [(2, 1, 3), (4, 2, 3), (3, 1, 5), (5, 2, 3), (6, 1, 3)] {
            let all: Vec<Subspace> = grassmannian(f(p), m, k).collect();
            assert_eq!(all.len() as u128, gaussian_binomial(m, k, p as u32));
            let distinct: HashSet<_> = all.iter().cloned().collect();
            assert_eq!(distinct.len(), all.len());
            for x in &all {
                assert_eq!(x.dim(), k);
                assert_eq!(&rref(x.basis()), x.basis());
            }
        }
    }

    #[test]
    fn enumerate_respects_ceiling() {
        let mut spec = EnumSpec::exhaustive(f(3), 6, 3);
        assert_eq!(enumerate_subspaces(&spec).unwrap().count(), 33880);
        spec.ceiling = 1000;
        assert!(matches!(
            enumerate_subspaces(&spec),
            Err(Error::Infeasible { count: 33880, .. })
        ));
        spec.sample = Some(25);
        assert_eq!(enumerate_subspaces(&spec).unwrap().count(), 25);
    }

    #[test]
    fn sampling_is_reproducible_and_valid() {
        let s = Sampler::new(f(5), 6, &[2, 3]);
        let a = s.sample_many(50, 7);
        assert_eq!(a, s.sample_many(50, 7));
        assert_ne!(a, s.sample_many(50, 8));
        for x in &a {
            assert!(x.dim() == 2 || x.dim() == 3);
            assert_eq!(&rref(x.basis()), x.basis());
        }
    }

    #[test]
    fn sampling_is_roughly_uniform() {
        // 13 lines of F_3^3; 13000 draws give each about 1000
        let s = Sampler::new(f(3), 3, &[1]);
        let mut hits = std::collections::HashMap::new();
        for x in s.sample_many(13_000, 1) {
            *hits.entry(x).or_insert(0usize) += 1;
        }
        assert_eq!(hits.len(), 13);
        assert!(hits.values().all(|&h| (800..1200).contains(&h)), "{hits:?}");
    }

    #[test]
    fn sampling_across_dimensions_is_roughly_uniform() {
        // 28 subspaces of F_3^3 over all dimensions; 28000 draws
        let s = Sampler::new(f(3), 3, &[0, 1, 2, 3]);
        let mut hits = std::collections::HashMap::new();
        for x in s.sample_many(28_000, 3) {
            *hits.entry(x).or_insert(0usize) += 1;
        }
        assert_eq!(hits.len(), 28);
        assert!(hits.values().all(|&h| (820..1180).contains(&h)), "{hits:?}");
    }

    #[test]
    fn sampler_handles_large_ambient_dimension() {
        let s = Sampler::new(f(3), 200, &[90, 100, 110]);
        for x in s.sample_many(5, 0) {
            assert!([90, 100, 110].contains(&x.dim()));
        }
    }

    #[test]
    fn par_fold_matches_sequential() {
        let total = par_fold_subspaces(
            f(3),
            5,
            &[0, 1, 2, 3, 4, 5],
            || 0u64,
            |a, _| a + 1,
            |a, b| a + b,
        );
        assert_eq!(total as u128, grassmannian_total(5, &[0, 1, 2, 3, 4, 5], 3));
        let firsts = par_fold_subspaces(
            f(3),
            4,
            &[2],
            Vec::new,
            |mut v, x| {
                v.push(x);
                v
            },
            |mut a, b| {
                a.extend(b);
                a
            },
        );
        assert_eq!(firsts, grassmannian(f(3), 4, 2).collect::<Vec<_>>());
    }

    #[test]
    fn random_invertible_has_full_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            assert_eq!(random_invertible(f(3), 4, &mut rng).rank(), 4);
        }
    }
}

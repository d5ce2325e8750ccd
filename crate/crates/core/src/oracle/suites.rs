//! Verification suites. Each one quantifies a single statement over
//! enumerated (or, past the ceiling, sampled) subspaces and reports every
//! instance that contradicts it.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::enumerate::{
    grassmannian, grassmannian_total, par_fold_subspaces, random_invertible, Sampler,
    DEFAULT_CEILING,
};
use crate::capability::shortcut_verdict;
use crate::closure::{
    closure, closure_with, interior_with, is_closed, star_down_with, star_up, star_up_with,
};
use crate::error::{Error, Result};
use crate::linalg::{Fp, LinearMap, Subspace};
use crate::reduce::{
    block_closure_formula, block_is_closed, block_split, cancel_central, central_lines,
    n4_dim5_rule, split_along, BlockSplit,
};
use crate::spaces::{binomial, SpaceContext};

pub const SUITES: [&str; 13] = [
    "operator-axioms",
    "prop46-dims",
    "bounds",
    "uptofour",
    "coordinate",
    "smallplusbig",
    "block-lemma",
    "cancel-central",
    "intersections",
    "sum-dims",
    "n4-dim5",
    "n4-census",
    "drop-if-central",
];

/// Random instances drawn by the randomized suites when `sample` is unset.
pub const DEFAULT_RANDOM_INSTANCES: usize = 100;
/// Random cases for the basis-change half of `cancel-central`.
pub const DEFAULT_CANCEL_INSTANCES: usize = 200;
/// Subspaces of `W` drawn by `operator-axioms` when `W` is too large to
/// enumerate.
pub const DEFAULT_W_SAMPLES: usize = 1000;

const MAX_RECORDED: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteOptions {
    pub ceiling: u128,
    pub sample: Option<usize>,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            ceiling: DEFAULT_CEILING,
            sample: None,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub input: Value,
    pub expected: Value,
    pub got: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub n: usize,
    pub p: u32,
    pub params: BTreeMap<String, Value>,
    pub checked: u64,
    pub violations: Vec<Violation>,
    pub stats: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub elapsed_ms: u64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn stat_u64(&self, key: &str) -> Option<u64> {
        self.stats.get(key).and_then(Value::as_u64)
    }
}

/// Mergeable accumulator for one suite run.
#[derive(Debug, Default)]
struct Tally {
    checked: u64,
    violation_count: u64,
    violations: Vec<Violation>,
    counts: BTreeMap<String, u64>,
    mins: BTreeMap<String, usize>,
    maxs: BTreeMap<String, usize>,
    error: Option<Error>,
}

impl Tally {
    fn expect(&mut self, check: &str, ok: bool, input: impl FnOnce() -> Value) {
        self.expect_eq(check, true, ok, input);
    }

    fn expect_eq<T: Serialize + PartialEq>(
        &mut self,
        check: &str,
        expected: T,
        got: T,
        input: impl FnOnce() -> Value,
    ) {
        if expected == got {
            return;
        }
        self.violation_count += 1;
        if self.violations.len() < MAX_RECORDED {
            self.violations.push(Violation {
                input: json!({ "check": check, "data": input() }),
                expected: json!(expected),
                got: json!(got),
            });
        }
    }

    fn count(&mut self, key: impl Into<String>) {
        *self.counts.entry(key.into()).or_default() += 1;
    }

    fn observe(&mut self, key: &str, value: usize) {
        let lo = self.mins.entry(key.to_string()).or_insert(value);
        *lo = (*lo).min(value);
        let hi = self.maxs.entry(key.to_string()).or_insert(value);
        *hi = (*hi).max(value);
    }

    fn fail(&mut self, e: Error) {
        self.error.get_or_insert(e);
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.violation_count += other.violation_count;
        let room = MAX_RECORDED - self.violations.len();
        self.violations
            .extend(other.violations.into_iter().take(room));
        for (k, v) in other.counts {
            *self.counts.entry(k).or_default() += v;
        }
        for (k, v) in other.mins {
            let e = self.mins.entry(k).or_insert(v);
            *e = (*e).min(v);
        }
        for (k, v) in other.maxs {
            let e = self.maxs.entry(k).or_insert(v);
            *e = (*e).max(v);
        }
        if self.error.is_none() {
            self.error = other.error;
        }
        self
    }
}

fn rows(x: &Subspace) -> Value {
    json!(x.basis_vectors().map(<[u32]>::to_vec).collect::<Vec<_>>())
}

/// How a family of subspaces was covered.
#[derive(Clone, Copy, Debug)]
enum Coverage {
    Exhaustive(u128),
    Sampled(usize),
}

impl Coverage {
    fn to_json(self) -> Value {
        match self {
            Coverage::Exhaustive(total) => json!({ "mode": "exhaustive", "total": total as u64 }),
            Coverage::Sampled(count) => json!({ "mode": "sampled", "count": count }),
        }
    }

    fn is_exhaustive(self) -> bool {
        matches!(self, Coverage::Exhaustive(_))
    }
}

fn run_item<T: ?Sized, F>(f: &F, mut t: Tally, item: &T) -> Tally
where
    F: Fn(&T, &mut Tally) -> Result<()>,
{
    t.checked += 1;
    if let Err(e) = f(item, &mut t) {
        t.fail(e);
    }
    t
}

fn over_items<T, F>(items: &[T], f: F) -> Tally
where
    T: Sync,
    F: Fn(&T, &mut Tally) -> Result<()> + Sync,
{
    items
        .par_iter()
        .fold(Tally::default, |t, x| run_item(&f, t, x))
        .reduce(Tally::default, Tally::merge)
}

/// Runs `f` on every subspace of `F_p^m` with dimension in `ks`, or on
/// `sample` seeded draws when the count exceeds the ceiling.
fn over_subspaces<F>(
    field: Fp,
    m: usize,
    ks: &[usize],
    sample: Option<usize>,
    ceiling: u128,
    seed: u64,
    f: F,
) -> Result<(Tally, Coverage)>
where
    F: Fn(&Subspace, &mut Tally) -> Result<()> + Sync,
{
    let total = grassmannian_total(m, ks, field.modulus());
    if total <= ceiling {
        let t = par_fold_subspaces(
            field,
            m,
            ks,
            Tally::default,
            |t, x| run_item(&f, t, &x),
            Tally::merge,
        );
        return Ok((t, Coverage::Exhaustive(total)));
    }
    let Some(count) = sample else {
        return Err(Error::Infeasible {
            count: total,
            ceiling,
        });
    };
    let xs = Sampler::new(field, m, ks).sample_many(count, seed);
    Ok((over_items(&xs, f), Coverage::Sampled(count)))
}

struct ReportBuilder {
    suite: &'static str,
    n: usize,
    p: u32,
    params: BTreeMap<String, Value>,
    seed: Option<u64>,
    start: Instant,
}

impl ReportBuilder {
    fn param(&mut self, key: &str, value: Value) {
        self.params.insert(key.to_string(), value);
    }

    fn finish(self, t: Tally, mut stats: BTreeMap<String, Value>) -> Result<SuiteReport> {
        if let Some(e) = t.error {
            return Err(e);
        }
        for (k, v) in t.counts {
            stats.insert(k, json!(v));
        }
        for (k, v) in t.mins {
            stats.insert(format!("min_{k}"), json!(v));
        }
        for (k, v) in t.maxs {
            stats.insert(format!("max_{k}"), json!(v));
        }
        stats.insert("violation_count".into(), json!(t.violation_count));
        Ok(SuiteReport {
            suite: self.suite.to_string(),
            n: self.n,
            p: self.p,
            params: self.params,
            checked: t.checked,
            violations: t.violations,
            stats,
            seed: self.seed,
            elapsed_ms: self.start.elapsed().as_millis() as u64,
        })
    }
}

/// Runs the named suite for `n` generators over `F_p`.
pub fn run_suite(name: &str, n: usize, p: u64, opts: &SuiteOptions) -> Result<SuiteReport> {
    let Some(&suite) = SUITES.iter().find(|&&s| s == name) else {
        return Err(Error::UnknownSuite(name.to_string()));
    };
    let ctx = SpaceContext::new(p, n)?;
    let mut b = ReportBuilder {
        suite,
        n,
        p: ctx.p(),
        params: BTreeMap::new(),
        seed: None,
        start: Instant::now(),
    };
    b.param("ceiling", json!(opts.ceiling.min(u64::MAX as u128) as u64));
    if let Some(s) = opts.sample {
        b.param("sample", json!(s));
    }
    let (tally, stats) = match suite {
        "operator-axioms" => operator_axioms(&ctx, opts, &mut b)?,
        "prop46-dims" => prop46_dims(&ctx, opts, &mut b)?,
        "bounds" => bounds(&ctx, opts, &mut b)?,
        "uptofour" => uptofour(&ctx, opts, &mut b)?,
        "coordinate" => coordinate(&ctx, opts, &mut b)?,
        "smallplusbig" => smallplusbig(&ctx, opts, &mut b)?,
        "block-lemma" => block_lemma(&ctx, opts, &mut b)?,
        "cancel-central" => cancel_central_suite(&ctx, opts, &mut b)?,
        "intersections" => intersections(&ctx)?,
        "sum-dims" => sum_dims(&ctx)?,
        "n4-dim5" => n4_dim5(&ctx, opts, &mut b)?,
        "n4-census" => n4_census(&ctx, opts, &mut b)?,
        "drop-if-central" => drop_if_central(&ctx, opts, &mut b)?,
        _ => unreachable!("suite list and dispatch agree"),
    };
    b.finish(tally, stats)
}

type SuiteOutput = (Tally, BTreeMap<String, Value>);

fn sampled_seed(b: &mut ReportBuilder, coverage: Coverage, seed: u64) {
    if !coverage.is_exhaustive() {
        b.seed = Some(seed);
    }
}

fn all_dims(m: usize) -> Vec<usize> {
    (0..=m).collect()
}

fn drop_last(x: &Subspace) -> Result<Option<Subspace>> {
    if x.is_zero() {
        return Ok(None);
    }
    let kept: Vec<&[u32]> = x.basis_vectors().take(x.dim() - 1).collect();
    Subspace::span(x.field(), x.ambient_dim(), &kept).map(Some)
}

fn add_first_missing_coordinate(x: &Subspace) -> Result<Option<Subspace>> {
    for c in 0..x.ambient_dim() {
        let e = Subspace::coordinate(x.field(), x.ambient_dim(), &[c])?;
        if !e.is_subspace_of(x)? {
            return x.sum(&e).map(Some);
        }
    }
    Ok(None)
}

fn coordinate_hyperplane(field: Fp, m: usize, skip: usize) -> Result<Subspace> {
    let coords: Vec<usize> = (0..m).filter(|&c| c != skip).collect();
    Subspace::coordinate(field, m, &coords)
}

fn check_closure_axioms(maps: &[LinearMap], x: &Subspace, t: &mut Tally) -> Result<()> {
    let r = closure_with(maps, x)?;
    t.expect(
        "closure-increasing",
        x.is_subspace_of(&r.x_closure)?,
        || rows(x),
    );
    let again = closure_with(maps, &r.x_closure)?;
    t.expect("closure-idempotent", again.x_closure == r.x_closure, || {
        rows(x)
    });
    t.expect(
        "x-star-equals-x-triple-star",
        star_up_with(maps, &r.x_closure)? == r.x_star,
        || rows(x),
    );
    if let Some(smaller) = drop_last(x)? {
        let rs = closure_with(maps, &smaller)?;
        t.expect(
            "closure-isotone",
            rs.x_closure.is_subspace_of(&r.x_closure)?,
            || rows(&smaller),
        );
        t.expect(
            "star-up-isotone",
            rs.x_star.is_subspace_of(&r.x_star)?,
            || rows(&smaller),
        );
    }
    if let Some(bigger) = add_first_missing_coordinate(x)? {
        let rb = closure_with(maps, &bigger)?;
        t.expect(
            "closure-isotone",
            r.x_closure.is_subspace_of(&rb.x_closure)?,
            || rows(&bigger),
        );
    }
    Ok(())
}

fn check_interior_axioms(maps: &[LinearMap], y: &Subspace, t: &mut Tally) -> Result<()> {
    let down = star_down_with(maps, y)?;
    let int = star_up_with(maps, &down)?;
    t.expect("interior-decreasing", int.is_subspace_of(y)?, || rows(y));
    t.expect(
        "interior-idempotent",
        interior_with(maps, &int)? == int,
        || rows(y),
    );
    t.expect(
        "y-star-equals-y-triple-star",
        star_down_with(maps, &int)? == down,
        || rows(y),
    );
    if let Some(smaller) = drop_last(y)? {
        let int_small = interior_with(maps, &smaller)?;
        t.expect("interior-isotone", int_small.is_subspace_of(&int)?, || {
            rows(&smaller)
        });
    }
    if let Some(outside) = add_first_missing_coordinate(&down)? {
        check_galois(maps, &outside, y, t)?;
    }
    check_galois(maps, &down, y, t)
}

/// `X ⊆ Y*  ⟺  X* ⊆ Y`.
fn check_galois(maps: &[LinearMap], x: &Subspace, y: &Subspace, t: &mut Tally) -> Result<()> {
    let left = x.is_subspace_of(&star_down_with(maps, y)?)?;
    let right = star_up_with(maps, x)?.is_subspace_of(y)?;
    t.expect_eq(
        "galois-pairing",
        left,
        right,
        || json!({ "x": rows(x), "y": rows(y) }),
    );
    Ok(())
}

fn operator_axioms(
    ctx: &SpaceContext,
    opts: &SuiteOptions,
    b: &mut ReportBuilder,
) -> Result<SuiteOutput> {
    let field = ctx.field();
    let phi = ctx.phi_maps();
    let psi = ctx.psi_maps();

    // closure and, through X* and its neighbours, interior for the φ family
    let (tx, cx) = over_subspaces(
        field,
        ctx.dim_v(),
        &all_dims(ctx.dim_v()),
        opts.sample,
        opts.ceiling,
        opts.seed,
        |x, t| {
            check_closure_axioms(phi, x, t)?;
            let ystar = star_up_with(phi, x)?;
            check_interior_axioms(phi, &ystar, t)?;
            check_galois(phi, x, &ystar, t)?;
            let mut ys = vec![ystar.clone()];
            if let Some(bigger) = add_first_missing_coordinate(&ystar)? {
                ys.push(bigger);
            }
            if let Some(&c) = ystar.pivots().first() {
                ys.push(ystar.intersect(&coordinate_hyperplane(field, ctx.dim_w(), c)?)?);
            }
            for y in &ys {
                check_interior_axioms(phi, y, t)?;
                check_galois(phi, x, y, t)?;
            }
            Ok(())
        },
    )?;
    sampled_seed(b, cx, opts.seed);
    b.param("x_coverage", cx.to_json());

    // the ψ family on subspaces of U
    let (tu, cu) = over_subspaces(
        field,
        ctx.dim_u(),
        &all_dims(ctx.dim_u()),
        opts.sample,
        opts.ceiling,
        opts.seed,
        |x, t| {
            check_closure_axioms(psi, x, t)?;
            check_interior_axioms(psi, &star_up_with(psi, x)?, t)
        },
    )?;
    sampled_seed(b, cu, opts.seed);
    b.param("u_coverage", cu.to_json());

    // arbitrary subspaces of W for the interior operator
    let w_samples = opts.sample.unwrap_or(DEFAULT_W_SAMPLES);
    let (tw, cw) = over_subspaces(
        field,
        ctx.dim_w(),
        &all_dims(ctx.dim_w()),
        Some(w_samples),
        opts.ceiling,
        opts.seed ^ 0x5eed,
        |y, t| check_interior_axioms(phi, y, t),
    )?;
    sampled_seed(b, cw, opts.seed);
    b.param("w_coverage", cw.to_json());

    let mut stats = BTreeMap::new();
    stats.insert("x_checked".into(), json!(tx.checked));
    stats.insert("u_checked".into(), json!(tu.checked));
    stats.insert("w_checked".into(), json!(tw.checked));
    Ok((tx.merge(tu).merge(tw), stats))
}

fn prop46_dims(
    ctx: &SpaceContext,
    opts: &SuiteOptions,
    b: &mut ReportBuilder,
) -> Result<SuiteOutput> {
    let n = ctx.n();
    let ks: Vec<usize> = [1, 2].into_iter().filter(|&k| k <= ctx.dim_v()).collect();
    let (t, c) = over_subspaces(
        ctx.field(),
        ctx.dim_v(),
        &ks,
        opts.sample,
        opts.ceiling,
        opts.seed,
        |x, t| {
            let s = star_up(ctx, x)?.dim();
            t.expect_eq("dim-star-equals-nk", n * x.dim(), s, || rows(x));
            t.count(format!("checked_k{}", x.dim()));
            Ok(())
        },
    )?;
    sampled_seed(b, c, opts.seed);
    b.param("ks", json!(ks));
    b.param("coverage", c.to_json());
    Ok((t, BTreeMap::new()))
}

/// The lower bound on `dim X*` for `dim X = k`.
pub fn star_lower_bound(n: usize, k: usize) -> usize {
    let loss = if k % 2 == 1 {
        ((k - 1) / 2).pow(2)
    } else if k == 0 {
        0
    } else {
        (k / 2) * ((k - 2) / 2)
    };
    n * k - loss
}

/// Lower bound for `dim X*` over `Gr(5, V(4))`. The bound is not sharp:
/// exhaustive runs at p = 3 and p = 5 give a minimum of 18.
pub const N4_K5_MIN_STAR: usize = 17;

fn bounds(ctx: &SpaceContext, opts: &SuiteOptions, b: &mut ReportBuilder) -> Result<SuiteOutput> {
    let n = ctx.n();
    let (t, c) = over_subspaces(
        ctx.field(),
        ctx.dim_v(),
        &all_dims(ctx.dim_v()),
        opts.sample,
        opts.ceiling,
        opts.seed,
        |x, t| {
            let k = x.dim();
            let s = star_up(ctx, x)?.dim();
            t.expect(
                "upper-bound",
                s <= n * k,
                || json!({ "x": rows(x), "dim_star": s }),
            );
            t.expect(
                "lower-bound",
                s >= star_lower_bound(n, k),
                || json!({ "x": rows(x), "dim_star": s }),
            );
            t.observe(&format!("dim_star_k{k}"), s);
            if n == 4 && k == 5 {
                t.expect(
                    "n4-k5-at-least-17",
                    s >= N4_K5_MIN_STAR,
                    || json!({ "x": rows(x), "dim_star": s }),
                );
            }
            if k * k < 4 * n {
                t.expect("sufficient-dimension-closed", is_closed(ctx, x)?, || {
                    rows(x)
                });
                t.count("sufficient_dimension_instances");
            }
            Ok(())
        },
    )?;
    sampled_seed(b, c, opts.seed);
    b.param("coverage", c.to_json());
    Ok((t, BTreeMap::new()))
}

fn uptofour(ctx: &SpaceContext, opts: &SuiteOptions, b: &mut ReportBuilder) -> Result<SuiteOutput> {
    let ks: Vec<usize> = (0..=ctx.dim_v().min(4)).collect();
    let (t, c) = over_subspaces(
        ctx.field(),
        ctx.dim_v(),
        &ks,
        opts.sample,
        opts.ceiling,
        opts.seed,
        |x, t| {
            let closed = is_closed(ctx, x)?;
            t.expect("closed", closed, || rows(x));
            let fast = shortcut_verdict(ctx, x)?;
            t.expect_eq("pipeline-agrees", closed, fast.capable, || rows(x));
            if closed {
                t.count("closed");
            }
            Ok(())
        },
    )?;
    sampled_seed(b, c, opts.seed);
    b.param("ks", json!(ks));
    b.param("coverage", c.to_json());
    Ok((t, BTreeMap::new()))
}

fn coordinate(
    ctx: &SpaceContext,
    opts: &SuiteOptions,
    b: &mut ReportBuilder,
) -> Result<SuiteOutput> {
    let m = ctx.dim_v();
    let total: u128 = 1u128.checked_shl(m as u32).unwrap_or(u128::MAX);
    let masks: Vec<u64> = if total <= opts.ceiling {
        b.param(
            "coverage",
            json!({ "mode": "exhaustive", "total": total as u64 }),
        );
        (0..total as u64).collect()
    } else if let Some(count) = opts.sample {
        b.param("coverage", json!({ "mode": "sampled", "count": count }));
        b.seed = Some(opts.seed);
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        (0..count)
            .map(|_| rng.gen::<u64>() & ((1u64 << m) - 1))
            .collect()
    } else {
        return Err(Error::Infeasible {
            count: total,
            ceiling: opts.ceiling,
        });
    };
    let t = over_items(&masks, |&mask, t| {
        let coords: Vec<usize> = (0..m).filter(|&c| mask >> c & 1 == 1).collect();
        let x = Subspace::coordinate(ctx.field(), m, &coords)?;
        t.expect("coordinate-closed", is_closed(ctx, &x)?, || {
            json!(coords.iter().map(|&c| ctx.v_label(c)).collect::<Vec<_>>())
        });
        Ok(())
    });
    Ok((t, BTreeMap::new()))
}

/// Carries a subspace of `V(|S|)` into `V(n)` through the order-preserving
/// map `{1..|S|} → S`.
fn embed(ctx: &SpaceContext, indices: &[usize], x: &Subspace) -> Result<Subspace> {
    let small = SpaceContext::with_field(ctx.field(), indices.len().max(2))?;
    let mut out = Vec::with_capacity(x.dim());
    for v in x.basis_vectors() {
        let mut w = vec![0; ctx.dim_v()];
        for (c, &(j, i)) in small.v_index().iter().enumerate().take(v.len()) {
            let target = ctx
                .v_coord(indices[j - 1], indices[i - 1])
                .ok_or_else(|| Error::Internal("embedding indices out of order".into()))?;
            w[target] = v[c];
        }
        out.push(w);
    }
    Subspace::span(ctx.field(), ctx.dim_v(), &out)
}

/// A uniformly random subspace (of any dimension) of `V_S`, in `V(n)`.
fn random_block<R: Rng>(ctx: &SpaceContext, indices: &[usize], rng: &mut R) -> Result<Subspace> {
    let m = binomial(indices.len(), 2);
    if m == 0 {
        return Ok(ctx.zero_v());
    }
    let sampler = Sampler::new(ctx.field(), m, &all_dims(m));
    embed(ctx, indices, &sampler.sample(rng))
}

fn smallplusbig(
    ctx: &SpaceContext,
    opts: &SuiteOptions,
    b: &mut ReportBuilder,
) -> Result<SuiteOutput> {
    let n = ctx.n();
    if n < 3 {
        return Err(Error::Precondition("smallplusbig needs n >= 3".into()));
    }
    let count = opts.sample.unwrap_or(DEFAULT_RANDOM_INSTANCES);
    b.seed = Some(opts.seed);
    b.param("instances", json!(count));
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut cases = Vec::with_capacity(count);
    for _ in 0..count {
        let m = rng.gen_range(2..n);
        let low: Vec<usize> = (1..=m).collect();
        let high: Vec<usize> = (m + 1..=n).collect();
        let x = random_block(ctx, &low, &mut rng)?.sum(&random_block(ctx, &high, &mut rng)?)?;
        cases.push((m, x));
    }
    let t = over_items(&cases, |(m, x), t| {
        t.expect(
            "sum-closed",
            is_closed(ctx, x)?,
            || json!({ "m": m, "x": rows(x) }),
        );
        Ok(())
    });
    Ok((t, BTreeMap::new()))
}

fn block_lemma(
    ctx: &SpaceContext,
    opts: &SuiteOptions,
    b: &mut ReportBuilder,
) -> Result<SuiteOutput> {
    let n = ctx.n();
    let count = opts.sample.unwrap_or(DEFAULT_RANDOM_INSTANCES);
    b.seed = Some(opts.seed);
    b.param("instances", json!(count));
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut cases = Vec::with_capacity(count);
    for _ in 0..count {
        let mask = rng.gen_range(1..(1u64 << n) - 1);
        let i_set: Vec<usize> = (1..=n).filter(|&a| mask >> (a - 1) & 1 == 1).collect();
        let j_set: Vec<usize> = (1..=n).filter(|&a| mask >> (a - 1) & 1 == 0).collect();
        let x_i = random_block(ctx, &i_set, &mut rng)?;
        let x_j = random_block(ctx, &j_set, &mut rng)?;
        cases.push(BlockSplit {
            i_set,
            j_set,
            x_i,
            x_j,
        });
    }
    let t = over_items(&cases, |split, t| {
        let (_, _, mixed) = crate::reduce::partition_coords(ctx, &split.i_set);
        let x = split.x_i.sum(&split.x_j)?.sum(&Subspace::coordinate(
            ctx.field(),
            ctx.dim_v(),
            &mixed,
        )?)?;
        let input =
            || json!({ "I": split.i_set, "x_I": rows(&split.x_i), "x_J": rows(&split.x_j) });
        let r = closure(ctx, &x)?;
        t.expect(
            "closure-formula",
            r.x_closure == block_closure_formula(ctx, split)?,
            input,
        );
        let parts = block_is_closed(ctx, &split.i_set, &split.x_i)?
            && block_is_closed(ctx, &split.j_set, &split.x_j)?;
        t.expect_eq("closed-iff-blocks-closed", r.closed, parts, input);
        let recovered = split_along(ctx, &x, &split.i_set)?;
        t.expect("split-recovered", recovered.as_ref() == Some(split), input);
        t.expect("some-split-found", block_split(ctx, &x)?.is_some(), input);
        if r.closed {
            t.count("closed");
        }
        Ok(())
    });
    Ok((t, BTreeMap::new()))
}

fn cancel_central_suite(
    ctx: &SpaceContext,
    opts: &SuiteOptions,
    b: &mut ReportBuilder,
) -> Result<SuiteOutput> {
    let n = ctx.n();
    if n < 3 {
        return Err(Error::Precondition(
            "central cancellation needs n >= 3".into(),
        ));
    }
    let field = ctx.field();
    let small = SpaceContext::with_field(field, n - 1)?;
    // V(n-1) is the first C(n-1,2) coordinates of V(n); the rest is ⟨x_n⟩*
    let tail: Vec<usize> = (small.dim_v()..ctx.dim_v()).collect();
    let block = Subspace::coordinate(field, ctx.dim_v(), &tail)?;
    let pad = |x: &Subspace| -> Result<Subspace> {
        let vs: Vec<Vec<u32>> = x
            .basis_vectors()
            .map(|v| {
                let mut w = v.to_vec();
                w.resize(ctx.dim_v(), 0);
                w
            })
            .collect();
        Subspace::span(field, ctx.dim_v(), &vs)?.sum(&block)
    };
    let mut e_n = vec![0; n];
    e_n[n - 1] = 1;

    let (t_ext, c) = over_subspaces(
        field,
        small.dim_v(),
        &all_dims(small.dim_v()),
        opts.sample,
        opts.ceiling,
        opts.seed,
        |xs, t| {
            let x = pad(xs)?;
            let closed_small = is_closed(&small, xs)?;
            t.expect_eq(
                "closedness-preserved",
                closed_small,
                is_closed(ctx, &x)?,
                || rows(xs),
            );
            let cancelled = cancel_central(ctx, &x, &e_n)?;
            t.expect("recovers-subspace", cancelled.x == *xs, || rows(xs));
            t.count("extension_cases");
            Ok(())
        },
    )?;
    sampled_seed(b, c, opts.seed);
    b.param("extension_coverage", c.to_json());

    let count = opts.sample.unwrap_or(DEFAULT_CANCEL_INSTANCES);
    b.param("basis_change_instances", json!(count));
    b.seed = Some(opts.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0xc0ffee);
    let sampler = Sampler::new(field, small.dim_v(), &all_dims(small.dim_v()));
    let mut cases = Vec::with_capacity(count);
    for _ in 0..count {
        let xs = sampler.sample(&mut rng);
        let a = random_invertible(field, n, &mut rng);
        cases.push((xs, a));
    }
    let t_rand = over_items(&cases, |(xs, a), t| {
        let x = ctx.induced_basis_change(a)?.apply(&pad(xs)?)?;
        let u = a.column(n - 1);
        let input = || json!({ "x": rows(&x), "u": u });
        t.expect("u-is-central", central_lines(ctx, &x)?.contains(&u)?, input);
        let cancelled = cancel_central(ctx, &x, &u)?;
        t.expect_eq(
            "dimension-drop",
            x.dim() - (n - 1),
            cancelled.x.dim(),
            input,
        );
        t.expect_eq(
            "closedness-preserved",
            is_closed(ctx, &x)?,
            is_closed(&cancelled.ctx, &cancelled.x)?,
            input,
        );
        t.count("basis_change_cases");
        Ok(())
    });
    Ok((t_ext.merge(t_rand), BTreeMap::new()))
}

/// Ordered tuples of distinct indices in `1..=n`, of every length `1..=n`.
fn ordered_tuples(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        for a in 1..=n {
            if !cur.contains(&a) {
                cur.push(a);
                go(n, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut out);
    out
}

fn span_of_images(ctx: &SpaceContext, ks: &[usize]) -> Result<Subspace> {
    ks.iter()
        .try_fold(Subspace::zero(ctx.field(), ctx.dim_w()), |acc, &k| {
            acc.sum(ctx.phi_image_of_v(k)?)
        })
}

fn intersections(ctx: &SpaceContext) -> Result<SuiteOutput> {
    let n = ctx.n();
    let field = ctx.field();
    let tuples = ordered_tuples(n);
    let mut t = over_items(&tuples, |tuple, t| {
        let (i1, rest) = (tuple[0], &tuple[1..]);
        let r = tuple.len();
        let s = span_of_images(ctx, rest)?;
        let meet = ctx.phi_image_of_v(i1)?.intersect(&s)?;
        t.expect_eq("intersection-dim", binomial(r - 1, 2), meet.dim(), || {
            json!(tuple)
        });

        let pairs: Vec<(usize, usize)> = rest
            .iter()
            .flat_map(|&a| rest.iter().filter(move |&&b| b < a).map(move |&b| (a, b)))
            .collect();
        let coords: Vec<usize> = pairs
            .iter()
            .map(|&(a, b)| ctx.v_coord(a, b).expect("a > b"))
            .collect();
        let expected_pullback = Subspace::coordinate(field, ctx.dim_v(), &coords)?;
        t.expect(
            "pullback-basis",
            ctx.phi(i1)?.preimage(&s)? == expected_pullback,
            || json!(tuple),
        );

        if rest.iter().all(|&a| a > i1) {
            t.count("sorted_tuples");
            let mut basis = Vec::with_capacity(pairs.len());
            for &(a, b) in &pairs {
                let mut w = vec![0; ctx.dim_w()];
                w[ctx.w_coord(a, i1, b).expect("i1 < b < a")] = 1;
                w[ctx.w_coord(b, i1, a).expect("i1 < b < a")] = field.neg(1);
                basis.push(w);
            }
            t.expect(
                "intersection-basis",
                meet == Subspace::span(field, ctx.dim_w(), &basis)?,
                || json!(tuple),
            );
        } else {
            t.count("unsorted_tuples");
        }
        Ok(())
    });

    // coordinates of the images φ_k(v_ji): every nonzero coordinate w_rst has
    // s ≤ k ≤ t; both inequalities are equalities exactly for w_jkk
    for k in 1..=n {
        let phi = ctx.phi(k)?;
        for c in 0..ctx.dim_v() {
            let col = phi.matrix().column(c);
            for (w, &entry) in col.iter().enumerate() {
                if entry == 0 {
                    continue;
                }
                let (_, s, tt) = ctx.w_index()[w];
                t.checked += 1;
                t.expect(
                    "nonzero-coordinate-range",
                    s <= k && k <= tt,
                    || json!({ "k": k, "v": ctx.v_label(c), "w": ctx.w_label(w) }),
                );
                t.expect(
                    "nonzero-coordinate-not-both-strict",
                    !(s < k && k < tt),
                    || json!({ "k": k, "v": ctx.v_label(c), "w": ctx.w_label(w) }),
                );
                if s == k && k == tt {
                    t.count("coordinates_with_s_eq_k_eq_t");
                } else {
                    t.count("coordinates_exactly_one_strict");
                }
            }
        }
    }
    Ok((t, BTreeMap::new()))
}

fn sum_dims(ctx: &SpaceContext) -> Result<SuiteOutput> {
    let n = ctx.n();
    let tuples: Vec<Vec<usize>> = ordered_tuples(n)
        .into_iter()
        .filter(|t| t.windows(2).all(|w| w[0] < w[1]))
        .collect();
    let t = over_items(&tuples, |tuple, t| {
        let r = tuple.len();
        let d = span_of_images(ctx, tuple)?.dim();
        t.expect_eq("span-dim", r * ctx.dim_v() - binomial(r, 3), d, || {
            json!(tuple)
        });
        Ok(())
    });
    Ok((t, BTreeMap::new()))
}

/// `u*` for one representative `u` of every line of `U`.
fn line_stars(ctx: &SpaceContext) -> Result<Vec<Subspace>> {
    grassmannian(ctx.field(), ctx.n(), 1)
        .map(|line| ctx.u_star(line.basis().row(0)))
        .collect()
}

fn has_central_line_by_enumeration(stars: &[Subspace], x: &Subspace) -> Result<bool> {
    for s in stars {
        if s.is_subspace_of(x)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn n4_dim5(ctx: &SpaceContext, opts: &SuiteOptions, b: &mut ReportBuilder) -> Result<SuiteOutput> {
    if ctx.n() != 4 {
        return Err(Error::Precondition(format!(
            "n4-dim5 needs n = 4, got {}",
            ctx.n()
        )));
    }
    let stars = line_stars(ctx)?;
    let (t, c) = over_subspaces(
        ctx.field(),
        ctx.dim_v(),
        &[5],
        opts.sample,
        opts.ceiling,
        opts.seed,
        |x, t| {
            let r = closure(ctx, x)?;
            let s = r.x_star.dim();
            let central = !central_lines(ctx, x)?.is_zero();
            let enumerated = has_central_line_by_enumeration(&stars, x)?;
            t.expect_eq("star-below-20-iff-central-line", central, s < 20, || {
                rows(x)
            });
            t.expect_eq(
                "central-line-solver-matches-enumeration",
                enumerated,
                central,
                || rows(x),
            );
            t.expect_eq("closed-iff-central-line", central, r.closed, || rows(x));
            t.expect(
                "not-closed-means-closure-is-v",
                r.closed || r.x_closure.is_full(),
                || rows(x),
            );
            t.expect_eq(
                "rule-matches-closure",
                r.closed,
                n4_dim5_rule(ctx, x)?,
                || rows(x),
            );
            t.expect_eq(
                "pipeline-agrees",
                r.closed,
                shortcut_verdict(ctx, x)?.capable,
                || rows(x),
            );
            t.expect("star-at-least-17", s >= N4_K5_MIN_STAR, || rows(x));
            t.observe("dim_star", s);
            if r.closed {
                t.count("closed");
            }
            if central {
                t.count("central_line");
            }
            if enumerated {
                t.count("central_line_by_enumeration");
            }
            if s < 20 {
                t.count("star_below_20");
            }
            Ok(())
        },
    )?;
    sampled_seed(b, c, opts.seed);
    b.param("coverage", c.to_json());
    Ok((t, BTreeMap::new()))
}

fn n4_census(
    ctx: &SpaceContext,
    opts: &SuiteOptions,
    b: &mut ReportBuilder,
) -> Result<SuiteOutput> {
    let n = ctx.n();
    let m = ctx.dim_v();
    let ks = all_dims(m);
    let total = grassmannian_total(m, &ks, ctx.p());
    if total > opts.ceiling {
        return Err(Error::Infeasible {
            count: total,
            ceiling: opts.ceiling,
        });
    }
    let stars = line_stars(ctx)?;
    let (mut t, c) = over_subspaces(
        ctx.field(),
        m,
        &ks,
        None,
        opts.ceiling,
        opts.seed,
        |x, t| {
            let k = x.dim();
            t.count(format!("total_k{k}"));
            if is_closed(ctx, x)? {
                t.count(format!("closed_k{k}"));
            }
            if n == 4 && k == 5 && has_central_line_by_enumeration(&stars, x)? {
                t.count("central_line_k5");
            }
            Ok(())
        },
    )?;
    b.param("coverage", c.to_json());
    let get = |t: &Tally, key: String| t.counts.get(&key).copied().unwrap_or(0);
    let mut stats = BTreeMap::new();
    let mut census = Vec::with_capacity(m + 1);
    for k in 0..=m {
        let closed = get(&t, format!("closed_k{k}"));
        let all = get(&t, format!("total_k{k}"));
        census.push(closed);
        if n >= 3 && k <= 4 {
            t.expect_eq(
                "dim-at-most-4-all-closed",
                all,
                closed,
                || json!({ "k": k }),
            );
        }
        if k == 0 || k == m {
            t.expect_eq("trivial-dims-closed", 1, closed, || json!({ "k": k }));
        }
    }
    if n == 4 {
        let central = get(&t, "central_line_k5".to_string());
        t.expect_eq(
            "k5-closed-equals-central-line-count",
            central,
            census[5],
            || json!({ "k": 5 }),
        );
    }
    stats.insert("closed_by_dim".into(), json!(census));
    Ok((t, stats))
}

fn drop_if_central(
    ctx: &SpaceContext,
    opts: &SuiteOptions,
    b: &mut ReportBuilder,
) -> Result<SuiteOutput> {
    let n = ctx.n();
    let ks: Vec<usize> = (n..=ctx.dim_v()).collect();
    let (t, c) = over_subspaces(
        ctx.field(),
        ctx.dim_v(),
        &ks,
        opts.sample,
        opts.ceiling,
        opts.seed,
        |x, t| {
            let k = x.dim();
            let s = star_up(ctx, x)?.dim();
            let central = !central_lines(ctx, x)?.is_zero();
            if central {
                t.count("central_line");
                t.expect(
                    "star-drops",
                    s < n * k,
                    || json!({ "x": rows(x), "dim_star": s }),
                );
            }
            if n == 4 && k == 5 {
                t.expect_eq("converse-n4-k5", s < n * k, central, || rows(x));
            }
            Ok(())
        },
    )?;
    sampled_seed(b, c, opts.seed);
    b.param("ks", json!(ks));
    b.param("coverage", c.to_json());
    Ok((t, BTreeMap::new()))
}

/// Number of closed `k`-dimensional subspaces of `V(n)`.
pub fn census_closed(n: usize, p: u64, k: usize, ceiling: u128) -> Result<u64> {
    let ctx = SpaceContext::new(p, n)?;
    count_matching(&ctx, k, ceiling, |x| is_closed(&ctx, x))
}

/// Number of `k`-dimensional subspaces of `V(n)` containing `⟨u⟩*` for some
/// line `⟨u⟩` of `U`, found by trying every line.
pub fn census_central_lines(n: usize, p: u64, k: usize, ceiling: u128) -> Result<u64> {
    let ctx = SpaceContext::new(p, n)?;
    let stars = line_stars(&ctx)?;
    count_matching(&ctx, k, ceiling, |x| {
        has_central_line_by_enumeration(&stars, x)
    })
}

fn count_matching<F>(ctx: &SpaceContext, k: usize, ceiling: u128, pred: F) -> Result<u64>
where
    F: Fn(&Subspace) -> Result<bool> + Sync,
{
    let (t, _) = over_subspaces(ctx.field(), ctx.dim_v(), &[k], None, ceiling, 0, |x, t| {
        if pred(x)? {
            t.count("hit");
        }
        Ok(())
    })?;
    if let Some(e) = t.error {
        return Err(e);
    }
    Ok(t.counts.get("hit").copied().unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(name: &str, n: usize) -> SuiteReport {
        run_suite(name, n, 3, &SuiteOptions::default()).unwrap()
    }

    #[test]
    fn lower_bound_values() {
        assert_eq!(star_lower_bound(4, 5), 16);
        assert_eq!(star_lower_bound(4, 6), 18);
        assert_eq!(star_lower_bound(4, 0), 0);
        assert_eq!(star_lower_bound(4, 2), 8);
    }

    #[test]
    fn unknown_suite() {
        assert!(matches!(
            run_suite("nope", 3, 3, &SuiteOptions::default()),
            Err(Error::UnknownSuite(_))
        ));
    }

    #[test]
    fn small_suites_pass() {
        for name in [
            "operator-axioms",
            "prop46-dims",
            "bounds",
            "uptofour",
            "coordinate",
            "intersections",
            "sum-dims",
            "drop-if-central",
            "n4-census",
        ] {
            let r = run(name, 3);
            assert!(r.passed(), "{name}: {:?}", r.violations);
            assert!(r.checked > 0, "{name}");
        }
    }

    #[test]
    fn randomized_suites_are_reproducible() {
        let opts = SuiteOptions {
            sample: Some(20),
            seed: 11,
            ..Default::default()
        };
        let a = run_suite("block-lemma", 4, 3, &opts).unwrap();
        let b = run_suite("block-lemma", 4, 3, &opts).unwrap();
        assert!(a.passed());
        assert_eq!((a.checked, &a.stats), (b.checked, &b.stats));
        assert_eq!(a.seed, Some(11));
    }

    #[test]
    fn infeasible_without_sampling() {
        let opts = SuiteOptions {
            ceiling: 100,
            ..Default::default()
        };
        assert!(matches!(
            run_suite("bounds", 4, 3, &opts),
            Err(Error::Infeasible { .. })
        ));
        let opts = SuiteOptions {
            ceiling: 100,
            sample: Some(30),
            seed: 1,
        };
        let r = run_suite("bounds", 4, 3, &opts).unwrap();
        assert_eq!(r.checked, 30);
        assert_eq!(r.seed, Some(1));
    }

    #[test]
    fn n4_only_suites_reject_other_n() {
        assert!(run_suite("n4-dim5", 3, 3, &SuiteOptions::default()).is_err());
    }

    #[test]
    fn report_json_shape() {
        let r = run("sum-dims", 3);
        let v = serde_json::to_value(&r).unwrap();
        for key in [
            "suite",
            "n",
            "p",
            "params",
            "checked",
            "violations",
            "stats",
            "elapsed_ms",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert!(v.get("seed").is_none());
    }

    #[test]
    fn census_small() {
        // V(3) has dim 3; every subspace is closed
        assert_eq!(census_closed(3, 3, 1, DEFAULT_CEILING).unwrap(), 13);
        assert_eq!(census_closed(3, 3, 3, DEFAULT_CEILING).unwrap(), 1);
    }
}

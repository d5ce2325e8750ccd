//! Fixtures shared by the criterion benchmarks.

use capable_core::oracle::Sampler;
use capable_core::{SpaceContext, Subspace};

/// A context for `(p, n)` and `count` uniformly sampled subspaces of `V(n)`
/// of dimension `k`.
pub fn sampled_inputs(p: u64, n: usize, k: usize, count: usize) -> (SpaceContext, Vec<Subspace>) {
    let ctx = SpaceContext::new(p, n).expect("valid parameters");
    let xs = Sampler::new(ctx.field(), ctx.dim_v(), &[k]).sample_many(count, 0);
    (ctx, xs)
}

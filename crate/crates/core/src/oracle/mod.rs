//! Brute-force ground truth: canonical enumeration of subspaces and the
//! verification suites built on it.

pub mod enumerate;
pub mod suites;

pub use enumerate::{
    enumerate_subspaces, gaussian_binomial, grassmannian, grassmannian_total, EnumSpec, Sampler,
    DEFAULT_CEILING,
};
pub use suites::{
    census_central_lines, census_closed, run_suite, star_lower_bound, SuiteOptions, SuiteReport,
    Violation, SUITES,
};

//! Semi-analytical coverage evaluators.
//!
//! A CoMP cluster's coherent desired power is bounded by Cauchy–Schwarz and
//! moment-matched to a Gamma law. Integer Gamma shapes turn the coverage
//! probability into the ℓ₁ norm of the exponential of a lower-triangular
//! Toeplitz matrix built from the interference log-Laplace transform.

mod closed_form;
mod coverage;
mod laplace;
mod moment;
mod toeplitz;

pub use closed_form::all_los_entries;
pub use coverage::{
    comp_coverage_sweep, coverage_static_comp_lb, coverage_static_comp_ub, coverage_static_gue,
    coverage_static_nearest, evaluator, evaluators, nearest_coverage_sweep, nearest_coverage_weighted, Association, CoverageEvaluator,
    EntrySource, InnerSampling, LinkBudget, ServingLink, StaticScenario,
};
pub use laplace::{log_laplace_interference, toeplitz_entries, Blockage, InterferenceField, InterferenceProfile};
pub use moment::{gamma_moment_match, GammaSurrogate, ShapeRounding};
pub use toeplitz::{conditional_coverage_toeplitz, ToeplitzEntries};

//! Summaries, intervals, point estimates and repeated-sampling coverage.

mod coverage;
mod summary;

pub use coverage::{coverage_experiment, CoverageReport};
pub use summary::{
    equivariant_estimates, interval, summarize, EquivariantEstimates, Interval, IntervalKind,
    IntervalSpec, Summary, SUMMARY_LEVELS,
};

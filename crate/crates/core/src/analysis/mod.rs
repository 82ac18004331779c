//! Completeness diagnostics for lattice systems of coherent states.

pub mod dependence;
pub mod dual;
pub mod gram;
pub mod integrals;

pub use dependence::{
    dependence_f, dependence_report, identity_sum, quadratic_form_of, DependenceFunction, DependenceReport,
    QuadraticForm,
};
pub use dual::{dual_state_eval, DualSystem, Singularity};
pub use gram::{
    gram, gram_spectrum_sweep, null_space_summary, null_vector_residual, periodized_gram, sign_vector,
    uniqueness_probe, GramMatrix, NullSpaceSummary, SpectrumRow, UniquenessProbe,
};
pub use integrals::{
    cell_average, classify, completeness_integral_trace, completeness_integral_trace_with, default_radii,
    IntegralKind, IntegralTrace, ShellRule, Verdict,
};

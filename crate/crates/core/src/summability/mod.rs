//! Kernels, partial sums, T and Nörlund means, weight families, maximal
//! operators, and the summation-by-parts inequalities relating them.

pub mod chains;
pub mod kernels;
pub mod means;
pub mod weights;

pub use chains::{
    abel_kernel, abel_majorant_factor, abel_normalizer, check_majorant, weighted_dirichlet_sum,
    MajorantCheck,
};
pub use kernels::{dirichlet_kernel, family_kernel, fejer_kernel, norlund_kernel, t_kernel};
pub use means::{
    convergence_table, family_mean, fejer_mean, maximal_operator, maximal_sweep, norlund_mean,
    partial_sum, partial_sum_of, shifted_fejer_maximal, shifted_fejer_mean, t_mean,
    ConvergenceRow, Summation,
};
pub use weights::{
    cesaro_number, k_plus_one, make_weights, weight_diagnostics, DiagnosticRow, FamilyKind,
    MeanFamily, Monotonicity, Orientation, WeightDiagnostics, WeightSequence,
};

//! Exact EXIT functions from Ω-enumerators, their identities, and the
//! closed-form bounds relating widths and erasure probabilities.

mod analysis;
mod bounds;
mod enumerator;
mod polynomial;
mod sweep;

pub use analysis::{
    area, average_exit, conditional_entropy, rate_rational, duality_check, margulis_russo_check,
    path_integral_residual, puncture_exit_bound_check, vector_exit, PunctureCheck,
    VECTOR_EXIT_MAX_N,
};
pub use bounds::{
    block_capacity_certificate, erasure_prob_bounds, low_rate_gap, recommended_low_rate_epsilon,
    tail_bound_from_window, width_bound, width_bound_from_window, BlockCertificate,
    CertificateMode, ErasureProbBounds,
};
pub use enumerator::WeightEnumerator;
pub use polynomial::{exit_derivative, exit_eval, inverse_exit, transition_width, ExitPolynomial};
pub use sweep::{boundary_enumerator, omega_enumerator, ExactAnalyzer, ExactLimits};

#pragma once

// Numerical tolerances used across the library.  Values are part of the
// public contract: tests and certificates are stated against them.

namespace ecd::tol {

// Relative Hermiticity residual accepted on construction of HermitianMatrix.
inline constexpr double hermitian = 1e-10;
// Relative eigendecomposition reconstruction residual.
inline constexpr double eig = 1e-9;
// Kraus completeness / trace-preservation residual.
inline constexpr double cptp = 1e-9;
// Positive-semidefiniteness slack accepted for density matrices.
inline constexpr double psd = 1e-9;
// Unit-trace slack accepted for density matrices.
inline constexpr double trace = 1e-9;
// Channel composition identities (e.g. attenuator semigroup law).
inline constexpr double composition = 1e-9;
// Maximum truncation tail mass accepted for coherent states in experiments.
inline constexpr double coherent_tail = 1e-6;
// Mean-energy bisection tolerance for Gibbs states.
inline constexpr double gibbs = 1e-10;
// Absolute duality-gap threshold for an "optimal" certificate.
inline constexpr double gap = 1e-6;
// Feasibility residual threshold for certificates.
inline constexpr double feas = 1e-7;
// Convex-hull membership tolerance for orthogonality witnesses.
inline constexpr double hull = 1e-10;
// Slack used when checking measured values against closed-form bounds.
inline constexpr double verify = 1e-6;

}  // namespace ecd::tol

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ecd/channel.hpp"
#include "ecd/hamiltonian.hpp"
#include "ecd/matrix.hpp"
#include "ecd/state.hpp"

namespace ecd {

// Which primal formulation applies.  A trace-annihilating map (difference of
// two channels) admits the one-sided formulation whose optimum is half the
// norm; the reported norm then carries a factor 2.
enum class NormMode { general, cptp_difference };

enum class SolveStatus { optimal, max_iterations, infeasible_numerics };

// Energy-constrained norm instance.  The Choi matrix lives on the
// (out (x) in) product space; the computational basis is the eigenbasis of
// the Hamiltonian, which the Hamiltonian type guarantees by construction.
//
// When the Choi support splits into blocks under a product-basis partition
// (phase-covariant families: attenuator pairs, diagonal unitary evolutions),
// the instance is stored block-wise with a diagonal probe marginal.  The
// restricted primal stays a lower bound and the restricted dual an upper
// bound of the unrestricted problem, so certificates remain valid; for the
// covariant families the restriction is tight.
struct EcdProblem {
  struct ChoiBlock {
    std::vector<std::size_t> out_idx;  // output basis index per position
    std::vector<std::size_t> in_idx;   // input basis index per position
    ComplexMatrix j;                   // Hermitian restriction of the Choi matrix
  };

  std::size_t dim_in = 0, dim_out = 0;
  Hamiltonian hamiltonian;
  double energy = 0.0;
  NormMode mode = NormMode::general;

  std::optional<HermitianMatrix> choi;  // dense representation
  std::vector<ChoiBlock> blocks;        // reduced representation

  double trace_annihilation_residual = 0.0;
  bool reduced() const { return !blocks.empty(); }
  bool is_zero() const { return !choi.has_value() && blocks.empty(); }
  std::size_t product_dim() const { return dim_in * dim_out; }
};

struct AssembleOptions {
  bool force_dense = false;
};

// Build the norm instance for a Hermitian-preserving map under the given
// Hamiltonian and energy bound.  Throws for e <= 0 or dimension mismatch.
EcdProblem assemble(const HermitianPreservingMap& delta, const Hamiltonian& h, double e,
                    const AssembleOptions& opts = {});

struct SolveOptions {
  double gap_tol = 1e-6;         // absolute, in norm units
  double feas_tol = 1e-7;
  std::size_t max_iterations = 50000;
  std::size_t certify_every = 250;  // splitting iterations between certifications
  std::size_t polish_steps = 60;    // supergradient steps per certification
  double over_relaxation = 1.8;
  double step_scale = 1.0;
  int log_every = 100;              // residual log cadence when logging is on
  std::optional<DensityMatrix> warm_start;  // initial probe marginal
};

struct FeasibilityResiduals {
  double primal_psd = 0.0;    // most negative eigenvalue of the primal variable
  double primal_cap = 0.0;    // most negative eigenvalue of the cap slack
  double trace = 0.0;         // |tr rho - 1|
  double energy = 0.0;        // max(0, tr(rho H) - E)
  double dual_psd = 0.0;      // most negative eigenvalue over dual cone parts
  double dual_cover = 0.0;    // most negative eigenvalue of x 1 + y H - tr_out Z
};

// Certified solution: primal_value <= optimum <= dual_value in the raw SDP
// objective; norm_lower/norm_upper carry the mode factor.
struct EcdCertificate {
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;          // norm_upper - norm_lower
  double norm_lower = 0.0;
  double norm_upper = 0.0;
  NormMode mode = NormMode::general;

  DensityMatrix probe_marginal;               // achieving marginal on the input
  std::optional<HermitianMatrix> primal_variable;  // W (or V); small instances only
  std::optional<HermitianMatrix> dual_z;           // Z (or Z1+Z2); small instances only
  double dual_x = 0.0, dual_y = 0.0;

  std::size_t iterations = 0;
  SolveStatus status = SolveStatus::optimal;
  FeasibilityResiduals residuals;

  double factor() const { return mode == NormMode::cptp_difference ? 2.0 : 1.0; }
};

EcdCertificate solve(const EcdProblem& problem, const SolveOptions& opts = {});

// Convenience: 2-norm of the difference of two channels at energy e, i.e.
// the full certified sandwich for ||N1 - N2|| at the given constraint.
EcdCertificate channel_distance(const Channel& n1, const Channel& n2, const Hamiltonian& h,
                                double e, const SolveOptions& opts = {});

// Pure-state purification of a marginal: sqrt-eigenvalue Schmidt vector on
// the doubled space, suitable as a discrimination probe.
std::vector<Complex> purify(const DensityMatrix& rho);

struct OracleOptions {
  std::size_t grid = 9;          // per-axis grid resolution
  std::size_t refinements = 14;  // Nelder-Mead restarts
  std::size_t nm_iterations = 400;
  std::uint64_t seed = 1;
};

// Independent lower bound on the energy-constrained norm: direct search over
// pure probe states on in (x) in', evaluated through the map action (never
// through the SDP path).  Capped at dim_in, dim_out <= 3.
double brute_force_oracle(const HermitianPreservingMap& delta, const Hamiltonian& h, double e,
                          const OracleOptions& opts = {});

inline constexpr std::size_t kOracleDimCap = 3;

}  // namespace ecd

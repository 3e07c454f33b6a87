#pragma once

#include <cstdint>

#include "ecd/channel.hpp"
#include "ecd/sdp.hpp"

namespace ecd {

// Optimal binary measurement success for states with priors (p, 1-p):
// p tr(P+ rho1) + (1-p) tr((1-P+) rho2), with P+ the projector onto the
// positive part of p rho1 - (1-p) rho2.
double helstrom_success(double p, const DensityMatrix& rho1, const DensityMatrix& rho2);

struct DiscriminationResult {
  double best_success = 0.0;   // best over sampled probes (exact per probe)
  double mean_success = 0.0;
  double norm_lower = 0.0;     // certified bounds on ||p N1 - (1-p) N2||_{E}
  double norm_upper = 0.0;
  std::size_t probes = 0;
};

// Samples energy-feasible pure probes on in (x) in' (plus the purified
// optimal marginal recovered from the norm certificate), applies both
// channels, and measures with the exact Helstrom projector.  The success
// probability of every probe is bounded by (1 + ||p N1 - (1-p) N2||_E)/2.
DiscriminationResult discrimination_check(const Channel& n1, const Channel& n2, double prior,
                                          const Hamiltonian& h, double e, std::size_t samples,
                                          std::uint64_t seed = 1,
                                          const SolveOptions& opts = {});

}  // namespace ecd

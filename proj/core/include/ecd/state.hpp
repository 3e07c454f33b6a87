#pragma once

#include <cstddef>
#include <vector>

#include "ecd/hamiltonian.hpp"
#include "ecd/matrix.hpp"

namespace ecd {

// Unit-trace positive semidefinite matrix.  Construction validates trace and
// positivity to the library tolerances.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(const HermitianMatrix& m);

  static DensityMatrix pure(const std::vector<Complex>& ket);
  static DensityMatrix maximally_mixed(std::size_t dim);
  static DensityMatrix diagonal(const std::vector<double>& p);
  // Clip tiny negative eigenvalues and renormalise; for the ends of long
  // numeric chains.
  static DensityMatrix clean(const HermitianMatrix& m);

  std::size_t dim() const { return mat_.dim(); }
  const HermitianMatrix& herm() const { return mat_; }
  const ComplexMatrix& mat() const { return mat_.mat(); }

 private:
  HermitianMatrix mat_;
};

// tr(rho H); real, >= 0 for grounded H.
double mean_energy(const DensityMatrix& rho, const Hamiltonian& h);
double mean_energy(const HermitianMatrix& rho, const Hamiltonian& h);

// von Neumann entropy in bits, with 0 log 0 = 0.
double entropy_bits(const DensityMatrix& rho);
double entropy_bits(const HermitianMatrix& rho);

// S(B|C) = S(BC) - S(C) in bits for a state on B (x) C.
double conditional_entropy(const DensityMatrix& omega, std::size_t dim_b, std::size_t dim_c);

struct CoherentState {
  std::vector<Complex> ket;  // renormalised truncated amplitude vector
  DensityMatrix state;
  double tail_mass = 0.0;    // probability lost to truncation, pre-normalisation
  bool tail_warning = false; // tail_mass above tol::coherent_tail
};

// Truncated coherent state |alpha> on a dim-level space.
CoherentState coherent_state(Complex alpha, std::size_t dim);

}  // namespace ecd

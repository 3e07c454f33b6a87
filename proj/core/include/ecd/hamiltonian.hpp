#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "ecd/matrix.hpp"

namespace ecd {

class DensityMatrix;

// Diagonal Hamiltonian in the computational basis.  Spectra are ascending
// and grounded: the smallest eigenvalue is exactly 0.
class Hamiltonian {
 public:
  Hamiltonian() = default;
  // Requires an ascending spectrum with spectrum[0] == 0; throws otherwise.
  static Hamiltonian from_spectrum(std::vector<double> spectrum);
  // Sorts and shifts an arbitrary finite spectrum so it is grounded.
  static Hamiltonian grounded(std::vector<double> spectrum);
  // The truncated oscillator: spectrum 0, 1, ..., dim-1.
  static Hamiltonian number_operator(std::size_t dim);
  static Hamiltonian qubit() { return number_operator(2); }

  std::size_t dim() const { return spectrum_.size(); }
  const std::vector<double>& spectrum() const { return spectrum_; }
  double level(std::size_t k) const { return spectrum_[k]; }
  double max_level() const { return spectrum_.back(); }
  double mean_level() const;  // mean energy of the maximally mixed state
  std::size_t ground_degeneracy() const;

  HermitianMatrix matrix() const { return HermitianMatrix::diagonal(spectrum_); }
  // Projector onto the span of eigenvectors with energy <= e.
  HermitianMatrix projector_below(double e) const;

 private:
  std::vector<double> spectrum_;
};

// Sum Hamiltonian H_1 (x) 1 + 1 (x) H_2 on the product space, re-sorted so
// the spectrum is ascending.  perm[sorted_index] = product-basis index
// (row-major, first factor slow).
struct SumHamiltonian {
  Hamiltonian h;
  std::vector<std::size_t> perm;
};
SumHamiltonian sum_hamiltonian(const Hamiltonian& h1, const Hamiltonian& h2);

// (1+x) log2(1+x) - x log2(x), in bits; g(0) = 0 by continuity.
double g_function(double x);

struct GibbsState {
  double energy = 0.0;   // realised mean energy
  double beta = 0.0;
  std::vector<double> probabilities;  // diagonal in the Hamiltonian eigenbasis
  double entropy_bits = 0.0;
  HermitianMatrix state() const { return HermitianMatrix::diagonal(probabilities); }
};

// Thermal state with mean energy e, found by bisection on the inverse
// temperature.  e = 0 returns the maximally mixed state on the ground
// eigenspace; e must be < max_level().  Negative beta covers mean energies
// above that of the maximally mixed state.
GibbsState gibbs_state(const Hamiltonian& h, double e);

// Entropy (bits) of the maximum-entropy state subject to mean energy <= e:
// the beta >= 0 branch of the Gibbs family, saturating at log2(dim).
double max_entropy_at_energy(const Hamiltonian& h, double e);

}  // namespace ecd

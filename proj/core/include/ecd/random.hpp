#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ecd/matrix.hpp"

namespace ecd {

// Deterministic source of random test objects.  All experiment and test
// randomness flows through this type so that a seed fully determines a run.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0);
  double gaussian();
  std::uint64_t integer(std::uint64_t bound);  // in [0, bound)

  Complex complex_gaussian();
  ComplexMatrix gaussian_matrix(std::size_t rows, std::size_t cols);
  // Haar-ish unitary via Gram-Schmidt of a Gaussian matrix.
  ComplexMatrix unitary(std::size_t n);
  std::vector<Complex> unit_vector(std::size_t n);
  // G G^dag normalised to unit trace.
  HermitianMatrix density(std::size_t n);
  HermitianMatrix hermitian(std::size_t n, double scale = 1.0);

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

// Columns of a orthonormalised; throws if rank-deficient.
ComplexMatrix gram_schmidt(const ComplexMatrix& a);

}  // namespace ecd

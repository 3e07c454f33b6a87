#include "ecd/random.hpp"

#include <cmath>
#include <stdexcept>

namespace ecd {

double Rng::uniform(double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(gen_);
}

double Rng::gaussian() {
  std::normal_distribution<double> d(0.0, 1.0);
  return d(gen_);
}

std::uint64_t Rng::integer(std::uint64_t bound) {
  std::uniform_int_distribution<std::uint64_t> d(0, bound - 1);
  return d(gen_);
}

Complex Rng::complex_gaussian() {
  const double re = gaussian();
  const double im = gaussian();
  return Complex(re, im) / std::sqrt(2.0);
}

ComplexMatrix Rng::gaussian_matrix(std::size_t rows, std::size_t cols) {
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = complex_gaussian();
  return m;
}

ComplexMatrix gram_schmidt(const ComplexMatrix& a) {
  ComplexMatrix q = a;
  const std::size_t n = q.rows(), k = q.cols();
  for (std::size_t c = 0; c < k; ++c) {
    for (int pass = 0; pass < 2; ++pass) {  // re-orthogonalise once
      for (std::size_t p = 0; p < c; ++p) {
        Complex dot = 0.0;
        for (std::size_t r = 0; r < n; ++r) dot += std::conj(q(r, p)) * q(r, c);
        for (std::size_t r = 0; r < n; ++r) q(r, c) -= dot * q(r, p);
      }
    }
    double nrm = 0.0;
    for (std::size_t r = 0; r < n; ++r) nrm += std::norm(q(r, c));
    nrm = std::sqrt(nrm);
    if (nrm < 1e-12) throw std::invalid_argument("gram_schmidt: rank-deficient input");
    for (std::size_t r = 0; r < n; ++r) q(r, c) /= nrm;
  }
  return q;
}

ComplexMatrix Rng::unitary(std::size_t n) { return gram_schmidt(gaussian_matrix(n, n)); }

std::vector<Complex> Rng::unit_vector(std::size_t n) {
  std::vector<Complex> v(n);
  double nrm = 0.0;
  for (auto& x : v) {
    x = complex_gaussian();
    nrm += std::norm(x);
  }
  nrm = std::sqrt(nrm);
  for (auto& x : v) x /= nrm;
  return v;
}

HermitianMatrix Rng::density(std::size_t n) {
  ComplexMatrix g = gaussian_matrix(n, n);
  ComplexMatrix rho = g * g.adjoint();
  const Complex tr = rho.trace();
  rho *= Complex(1.0, 0.0) / tr.real();
  return HermitianMatrix::symmetrized(rho);
}

HermitianMatrix Rng::hermitian(std::size_t n, double scale) {
  ComplexMatrix g = gaussian_matrix(n, n);
  ComplexMatrix h = g + g.adjoint();
  h *= Complex(0.5 * scale, 0.0);
  return HermitianMatrix::symmetrized(h);
}

}  // namespace ecd

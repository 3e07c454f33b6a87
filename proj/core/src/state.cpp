#include "ecd/state.hpp"

#include <cmath>
#include <stdexcept>

#include "ecd/tolerances.hpp"

namespace ecd {

DensityMatrix::DensityMatrix(const HermitianMatrix& m) : mat_(m) {
  if (std::abs(m.real_trace() - 1.0) > tol::trace)
    throw std::invalid_argument("DensityMatrix: trace differs from 1");
  const double scale = std::max(1.0, m.mat().max_abs());
  if (min_eigenvalue(m) < -tol::psd * scale)
    throw std::invalid_argument("DensityMatrix: negative eigenvalue");
}

DensityMatrix DensityMatrix::pure(const std::vector<Complex>& ket) {
  double nrm = 0.0;
  for (const auto& c : ket) nrm += std::norm(c);
  if (std::abs(nrm - 1.0) > tol::trace)
    throw std::invalid_argument("DensityMatrix::pure: ket not normalised");
  DensityMatrix d;
  d.mat_ = HermitianMatrix::symmetrized(ComplexMatrix::outer(ket, ket));
  return d;
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  std::vector<double> p(dim, 1.0 / double(dim));
  return diagonal(p);
}

DensityMatrix DensityMatrix::diagonal(const std::vector<double>& p) {
  double s = 0.0;
  for (double x : p) {
    if (x < -tol::psd) throw std::invalid_argument("DensityMatrix::diagonal: negative weight");
    s += x;
  }
  if (std::abs(s - 1.0) > tol::trace)
    throw std::invalid_argument("DensityMatrix::diagonal: weights do not sum to 1");
  std::vector<double> q(p);
  for (double& x : q) x = std::max(0.0, x) / s;
  DensityMatrix d;
  d.mat_ = HermitianMatrix::diagonal(q);
  return d;
}

DensityMatrix DensityMatrix::clean(const HermitianMatrix& m) {
  HermitianMatrix pos = psd_project(m);
  const double tr = pos.real_trace();
  if (tr <= 0.0) throw std::invalid_argument("DensityMatrix::clean: non-positive trace");
  ComplexMatrix scaled = pos.mat();
  scaled *= Complex(1.0 / tr, 0.0);
  DensityMatrix d;
  d.mat_ = HermitianMatrix::symmetrized(scaled);
  return d;
}

double mean_energy(const HermitianMatrix& rho, const Hamiltonian& h) {
  if (rho.dim() != h.dim()) throw std::invalid_argument("mean_energy: dimension mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < h.dim(); ++k) s += h.level(k) * rho(k, k).real();
  return s;
}

double mean_energy(const DensityMatrix& rho, const Hamiltonian& h) {
  return mean_energy(rho.herm(), h);
}

double entropy_bits(const HermitianMatrix& rho) {
  auto es = eig_hermitian(rho);
  double s = 0.0;
  for (double lam : es.values) {
    if (lam > 0.0) s -= lam * std::log2(lam);
  }
  return s;
}

double entropy_bits(const DensityMatrix& rho) { return entropy_bits(rho.herm()); }

double conditional_entropy(const DensityMatrix& omega, std::size_t dim_b, std::size_t dim_c) {
  if (omega.dim() != dim_b * dim_c)
    throw std::invalid_argument("conditional_entropy: dimension mismatch");
  const double s_bc = entropy_bits(omega);
  HermitianMatrix rc =
      HermitianMatrix::symmetrized(partial_trace(omega.mat(), dim_b, dim_c, 1));
  return s_bc - entropy_bits(rc);
}

CoherentState coherent_state(Complex alpha, std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("coherent_state: dim must be >= 1");
  CoherentState out;
  out.ket.resize(dim);
  // amplitude_n = exp(-|a|^2/2) a^n / sqrt(n!), built up iteratively
  const double a2 = std::norm(alpha);
  Complex amp = std::exp(-0.5 * a2);
  double kept = 0.0;
  for (std::size_t n = 0; n < dim; ++n) {
    out.ket[n] = amp;
    kept += std::norm(amp);
    amp *= alpha / std::sqrt(double(n + 1));
  }
  out.tail_mass = std::max(0.0, 1.0 - kept);
  out.tail_warning = out.tail_mass > tol::coherent_tail;
  const double renorm = 1.0 / std::sqrt(kept);
  for (auto& c : out.ket) c *= renorm;
  out.state = DensityMatrix::pure(out.ket);
  return out;
}

}  // namespace ecd

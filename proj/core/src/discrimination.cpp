#include "ecd/discrimination.hpp"

#include <cmath>
#include <stdexcept>

#include "ecd/random.hpp"

namespace ecd {

double helstrom_success(double p, const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.dim() != rho2.dim())
    throw std::invalid_argument("helstrom_success: dimension mismatch");
  ComplexMatrix x = rho1.mat();
  x *= Complex(p, 0.0);
  ComplexMatrix x2 = rho2.mat();
  x2 *= Complex(1.0 - p, 0.0);
  x -= x2;
  auto es = eig_hermitian(HermitianMatrix::symmetrized(x));
  // success = (1-p) + tr_+ (p rho1 - (1-p) rho2)
  double s = 1.0 - p;
  for (double lam : es.values)
    if (lam > 0.0) s += lam;
  return s;
}

namespace {

// Scale the rows of the probe coefficient matrix until the input marginal
// meets the energy budget; row a carries all amplitude on input level a.
void enforce_probe_energy(ComplexMatrix& m, const Hamiltonian& h, double e) {
  const std::size_t d = m.rows();
  auto energy_of = [&](const ComplexMatrix& mm) {
    double nrm = 0.0, en = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
      double row = 0.0;
      for (std::size_t c = 0; c < mm.cols(); ++c) row += std::norm(mm(a, c));
      nrm += row;
      en += h.level(a) * row;
    }
    return en / nrm;
  };
  if (energy_of(m) <= e) return;
  auto damp = [&](double s) {
    ComplexMatrix out = m;
    for (std::size_t a = 0; a < d; ++a) {
      const double f = 1.0 / (1.0 + s * h.level(a));
      for (std::size_t c = 0; c < m.cols(); ++c) out(a, c) *= f;
    }
    return out;
  };
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200 && energy_of(damp(hi)) > e; ++it) hi *= 2.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (energy_of(damp(mid)) > e)
      lo = mid;
    else
      hi = mid;
  }
  m = damp(hi);
}

DensityMatrix probe_state(const ComplexMatrix& m) {
  const std::size_t d = m.rows();
  std::vector<Complex> psi(d * m.cols());
  double nrm = 0.0;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t c = 0; c < m.cols(); ++c) {
      psi[a * m.cols() + c] = m(a, c);
      nrm += std::norm(m(a, c));
    }
  nrm = std::sqrt(nrm);
  for (auto& x : psi) x /= nrm;
  return DensityMatrix::pure(psi);
}

}  // namespace

DiscriminationResult discrimination_check(const Channel& n1, const Channel& n2, double prior,
                                          const Hamiltonian& h, double e, std::size_t samples,
                                          std::uint64_t seed, const SolveOptions& opts) {
  if (prior < 0.0 || prior > 1.0)
    throw std::invalid_argument("discrimination_check: prior outside [0, 1]");
  const std::size_t d = n1.dim_in();

  auto delta = HermitianPreservingMap::weighted(prior, n1, -(1.0 - prior), n2);
  auto cert = solve(assemble(delta, h, e), opts);

  DiscriminationResult out;
  out.norm_lower = cert.norm_lower;
  out.norm_upper = cert.norm_upper;

  Rng rng(seed);
  double sum = 0.0;
  auto run_probe = [&](const DensityMatrix& probe) {
    DensityMatrix w1 = n1.apply(probe, d);
    DensityMatrix w2 = n2.apply(probe, d);
    const double s = helstrom_success(prior, w1, w2);
    out.best_success = std::max(out.best_success, s);
    sum += s;
    ++out.probes;
  };
  for (std::size_t k = 0; k < samples; ++k) {
    ComplexMatrix m = rng.gaussian_matrix(d, d);
    enforce_probe_energy(m, h, e);
    run_probe(probe_state(m));
  }
  // the purified optimal marginal from the certificate
  run_probe(DensityMatrix::pure(purify(cert.probe_marginal)));
  out.mean_success = sum / double(out.probes);
  return out;
}

}  // namespace ecd

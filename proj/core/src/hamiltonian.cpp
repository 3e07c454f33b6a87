#include "ecd/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ecd/tolerances.hpp"

namespace ecd {

namespace {

bool finite_all(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

Hamiltonian Hamiltonian::from_spectrum(std::vector<double> spectrum) {
  if (spectrum.empty()) throw std::invalid_argument("Hamiltonian: empty spectrum");
  if (!finite_all(spectrum)) throw std::invalid_argument("Hamiltonian: non-finite level");
  if (!std::is_sorted(spectrum.begin(), spectrum.end()))
    throw std::invalid_argument("Hamiltonian: spectrum must be ascending");
  if (spectrum.front() != 0.0)
    throw std::invalid_argument("Hamiltonian: spectrum must be grounded (lowest level 0)");
  Hamiltonian h;
  h.spectrum_ = std::move(spectrum);
  return h;
}

Hamiltonian Hamiltonian::grounded(std::vector<double> spectrum) {
  if (spectrum.empty()) throw std::invalid_argument("Hamiltonian: empty spectrum");
  if (!finite_all(spectrum)) throw std::invalid_argument("Hamiltonian: non-finite level");
  std::sort(spectrum.begin(), spectrum.end());
  const double e0 = spectrum.front();
  for (double& x : spectrum) x -= e0;
  spectrum.front() = 0.0;
  Hamiltonian h;
  h.spectrum_ = std::move(spectrum);
  return h;
}

Hamiltonian Hamiltonian::number_operator(std::size_t dim) {
  std::vector<double> s(dim);
  for (std::size_t k = 0; k < dim; ++k) s[k] = double(k);
  return from_spectrum(std::move(s));
}

double Hamiltonian::mean_level() const {
  double s = std::accumulate(spectrum_.begin(), spectrum_.end(), 0.0);
  return s / double(spectrum_.size());
}

std::size_t Hamiltonian::ground_degeneracy() const {
  std::size_t d = 0;
  while (d < spectrum_.size() && spectrum_[d] == 0.0) ++d;
  return d;
}

HermitianMatrix Hamiltonian::projector_below(double e) const {
  std::vector<double> diag(dim(), 0.0);
  for (std::size_t k = 0; k < dim(); ++k)
    if (spectrum_[k] <= e) diag[k] = 1.0;
  return HermitianMatrix::diagonal(diag);
}

SumHamiltonian sum_hamiltonian(const Hamiltonian& h1, const Hamiltonian& h2) {
  const std::size_t d1 = h1.dim(), d2 = h2.dim();
  std::vector<double> levels(d1 * d2);
  for (std::size_t a = 0; a < d1; ++a)
    for (std::size_t b = 0; b < d2; ++b) levels[a * d2 + b] = h1.level(a) + h2.level(b);
  std::vector<std::size_t> perm(d1 * d2);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(),
                   [&levels](std::size_t i, std::size_t j) { return levels[i] < levels[j]; });
  std::vector<double> sorted(d1 * d2);
  for (std::size_t k = 0; k < perm.size(); ++k) sorted[k] = levels[perm[k]];
  SumHamiltonian out;
  out.h = Hamiltonian::from_spectrum(std::move(sorted));
  out.perm = std::move(perm);
  return out;
}

double g_function(double x) {
  if (x < 0.0) throw std::invalid_argument("g_function: negative argument");
  if (x == 0.0) return 0.0;
  return (1.0 + x) * std::log2(1.0 + x) - x * std::log2(x);
}

namespace {

// Mean energy and probabilities of exp(-beta H)/Z, computed with the
// spectrum shifted so the largest Boltzmann weight is 1.
void thermal_weights(const std::vector<double>& spec, double beta,
                     std::vector<double>& p, double& mean) {
  const double href = (beta >= 0.0) ? spec.front() : spec.back();
  double z = 0.0, zh = 0.0;
  p.resize(spec.size());
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double w = std::exp(-beta * (spec[k] - href));
    p[k] = w;
    z += w;
    zh += w * spec[k];
  }
  for (auto& w : p) w /= z;
  mean = zh / z;
}

double entropy_bits(const std::vector<double>& p) {
  double s = 0.0;
  for (double x : p)
    if (x > 0.0) s -= x * std::log2(x);
  return s;
}

}  // namespace

GibbsState gibbs_state(const Hamiltonian& h, double e) {
  const auto& spec = h.spectrum();
  if (e < 0.0 || (e > 0.0 && e >= h.max_level()))
    throw std::invalid_argument("gibbs_state: energy outside attainable range");

  GibbsState g;
  if (e == 0.0) {
    // Maximally mixed state on the ground eigenspace.
    const std::size_t deg = h.ground_degeneracy();
    g.beta = std::numeric_limits<double>::infinity();
    g.probabilities.assign(h.dim(), 0.0);
    for (std::size_t k = 0; k < deg; ++k) g.probabilities[k] = 1.0 / double(deg);
    g.energy = 0.0;
    g.entropy_bits = std::log2(double(deg));
    return g;
  }

  std::vector<double> p;
  double mean0;
  thermal_weights(spec, 0.0, p, mean0);

  double beta = 0.0;
  if (std::abs(e - mean0) > tol::gibbs) {
    // Mean energy is strictly decreasing in beta.  Bracket [b_lo, b_hi]
    // with f(b_lo) > e > f(b_hi), growing geometrically on the needed side.
    double b_lo = 0.0, b_hi = 0.0, m = mean0;
    if (e < mean0) {
      b_hi = 1.0;
      for (int it = 0; it < 200; ++it) {
        thermal_weights(spec, b_hi, p, m);
        if (m < e) break;
        b_hi *= 2.0;
      }
    } else {
      b_lo = -1.0;
      for (int it = 0; it < 200; ++it) {
        thermal_weights(spec, b_lo, p, m);
        if (m > e) break;
        b_lo *= 2.0;
      }
    }
    for (int it = 0; it < 200; ++it) {
      beta = 0.5 * (b_lo + b_hi);
      thermal_weights(spec, beta, p, m);
      if (std::abs(m - e) <= tol::gibbs) break;
      if (m > e)
        b_lo = beta;
      else
        b_hi = beta;
    }
    g.energy = m;
  } else {
    g.energy = mean0;
  }
  g.beta = beta;
  g.probabilities = p;
  g.entropy_bits = entropy_bits(p);
  return g;
}

double max_entropy_at_energy(const Hamiltonian& h, double e) {
  if (e < 0.0) throw std::invalid_argument("max_entropy_at_energy: negative energy");
  if (e == 0.0) return std::log2(double(h.ground_degeneracy()));
  const double cap = h.mean_level();
  if (e >= cap) return std::log2(double(h.dim()));
  return gibbs_state(h, e).entropy_bits;
}

}  // namespace ecd

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ecd/bounds.hpp"
#include "ecd/tolerances.hpp"

// Convex-hull membership of the origin among the evolved phase points, with
// an explicit decomposition over at most three of them.

namespace ecd {

namespace {

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

// barycentric coordinates of the origin in triangle (a, b, c); returns the
// minimum coordinate (>= -tol means inside).
double origin_barycentric(Complex a, Complex b, Complex c, double w[3]) {
  w[0] = w[1] = w[2] = 0.0;
  const double det = cross(b - a, c - a);
  if (std::abs(det) < 1e-15) return -1.0;
  // 0 - a = w1 (b - a) + w2 (c - a), w0 = 1 - w1 - w2
  w[1] = cross(-a, c - a) / det;
  w[2] = cross(b - a, -a) / det;
  w[0] = 1.0 - w[1] - w[2];
  return std::min({w[0], w[1], w[2]});
}

}  // namespace

WitnessResult orthogonality_witness(const std::vector<double>& spectrum, double t) {
  if (spectrum.empty()) throw std::invalid_argument("orthogonality_witness: empty spectrum");
  const std::size_t n = spectrum.size();
  WitnessResult out;
  out.time = t;

  std::vector<Complex> z(n);
  for (std::size_t k = 0; k < n; ++k) z[k] = std::exp(Complex(0.0, -t * spectrum[k]));

  std::vector<double> p(n, 0.0);
  bool found = false;

  // pairs: origin on the segment between two (anti-parallel) phases
  for (std::size_t i = 0; i < n && !found; ++i)
    for (std::size_t k = i + 1; k < n && !found; ++k) {
      const Complex zi = z[i], zk = z[k];
      const double cr = cross(zi, zk);
      const double dt = zi.real() * zk.real() + zi.imag() * zk.imag();
      if (std::abs(cr) <= tol::hull && dt < 0.0) {
        const double ai = std::abs(zi), ak = std::abs(zk);
        p[i] = ak / (ai + ak);
        p[k] = ai / (ai + ak);
        found = true;
      }
    }

  // triples: most interior containing triangle
  if (!found) {
    double best_min = -1.0;
    std::size_t bi = 0, bj = 0, bk = 0;
    double bw[3] = {0, 0, 0};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) {
          double w[3];
          const double m = origin_barycentric(z[i], z[j], z[k], w);
          if (m > best_min) {
            best_min = m;
            bi = i;
            bj = j;
            bk = k;
            bw[0] = w[0];
            bw[1] = w[1];
            bw[2] = w[2];
          }
        }
    if (best_min >= -tol::hull) {
      p[bi] = std::max(0.0, bw[0]);
      p[bj] = std::max(0.0, bw[1]);
      p[bk] = std::max(0.0, bw[2]);
      found = true;
    }
  }

  if (!found) return out;  // in_hull stays false; a valid answer

  double sum = 0.0;
  for (double w : p) sum += w;
  for (double& w : p) w /= sum;

  Complex resid = 0.0;
  for (std::size_t k = 0; k < n; ++k) resid += p[k] * z[k];
  if (std::abs(resid) > 10.0 * tol::hull) return out;  // numerically outside after all

  out.in_hull = true;
  out.probabilities = p;
  out.witness_state.assign(n, Complex(0.0, 0.0));
  for (std::size_t k = 0; k < n; ++k)
    if (p[k] > 0.0) out.witness_state[k] = std::sqrt(p[k]);
  out.overlap = resid;
  out.energy = 0.0;
  for (std::size_t k = 0; k < n; ++k) out.energy += p[k] * spectrum[k];
  return out;
}

}  // namespace ecd

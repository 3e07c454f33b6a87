#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ecd/errors.hpp"
#include "ecd/random.hpp"
#include "ecd/sdp.hpp"

// Direct search over pure probe states on in (x) in'.  A probe is the
// vectorisation of a coefficient matrix M (psi[(a, c)] = M[a, c]); the input
// marginal is M M^dag, and the reference-side basis is absorbed by the trace
// norm's unitary invariance, so M covers every pure probe.  Rows of M with
// too much weight on energetic levels are damped until the marginal meets
// the energy budget.  Evaluation goes through the map's Kraus action and the
// trace norm only, never through the norm SDP.

namespace ecd {

namespace {

struct Objective {
  const HermitianPreservingMap* map;
  const Hamiltonian* h;
  double e;

  // x holds interleaved re/im entries of M (row-major)
  double operator()(const std::vector<double>& x) const {
    const std::size_t d = h->dim();
    ComplexMatrix m(d, d);
    double nrm = 0.0;
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t c = 0; c < d; ++c) {
        double re = x[2 * (a * d + c)], im = x[2 * (a * d + c) + 1];
        if (!std::isfinite(re)) re = 0.0;
        if (!std::isfinite(im)) im = 0.0;
        re = std::clamp(re, -1e6, 1e6);
        im = std::clamp(im, -1e6, 1e6);
        m(a, c) = Complex(re, im);
        nrm += re * re + im * im;
      }
    if (nrm <= 1e-18) return -1.0;

    // damp energetic rows until tr(M M^dag H) <= E ||M||^2
    auto energy_ratio = [&](const ComplexMatrix& mm) {
      double tot = 0.0, en = 0.0;
      for (std::size_t a = 0; a < d; ++a) {
        double row = 0.0;
        for (std::size_t c = 0; c < d; ++c) row += std::norm(mm(a, c));
        tot += row;
        en += h->level(a) * row;
      }
      return en / tot;
    };
    ComplexMatrix md = m;
    if (energy_ratio(md) > e) {
      auto damp = [&](double s) {
        ComplexMatrix out = m;
        for (std::size_t a = 0; a < d; ++a) {
          const double f = 1.0 / (1.0 + s * h->level(a));
          for (std::size_t c = 0; c < d; ++c) out(a, c) *= f;
        }
        return out;
      };
      double lo = 0.0, hi = 1.0;
      bool ok = false;
      for (int it = 0; it < 120; ++it) {
        md = damp(hi);
        if (energy_ratio(md) <= e) {
          ok = true;
          break;
        }
        hi *= 2.0;
      }
      if (!ok) return -1.0;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        md = damp(mid);
        if (energy_ratio(md) > e)
          lo = mid;
        else
          hi = mid;
      }
      md = damp(hi);
    }

    std::vector<Complex> psi(d * d);
    double nn = 0.0;
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t c = 0; c < d; ++c) {
        psi[a * d + c] = md(a, c);
        nn += std::norm(md(a, c));
      }
    nn = std::sqrt(nn);
    for (auto& v : psi) v /= nn;
    ComplexMatrix proj = ComplexMatrix::outer(psi, psi);
    return trace_norm(map->apply_matrix(proj, d));
  }
};

// Nelder-Mead ascent (maximisation).
double nelder_mead(const Objective& f, std::vector<double> x0, double scale,
                   std::size_t iterations, std::vector<double>* best_x) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> simplex(n + 1, x0);
  std::vector<double> val(n + 1);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += scale;
  for (std::size_t i = 0; i <= n; ++i) val[i] = f(simplex[i]);

  for (std::size_t it = 0; it < iterations; ++it) {
    std::vector<std::size_t> ord(n + 1);
    std::iota(ord.begin(), ord.end(), 0);
    std::sort(ord.begin(), ord.end(),
              [&val](std::size_t a, std::size_t b) { return val[a] > val[b]; });
    const std::size_t worst = ord[n], second = ord[n - 1], bi = ord[0];
    if (val[bi] - val[worst] < 1e-13 * (1.0 + std::abs(val[bi]))) break;
    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / double(n);
    }
    auto blend = [&](double t) {
      std::vector<double> p(n);
      for (std::size_t k = 0; k < n; ++k)
        p[k] = centroid[k] + t * (simplex[worst][k] - centroid[k]);
      return p;
    };
    std::vector<double> refl = blend(-1.0);
    const double frefl = f(refl);
    if (frefl > val[bi]) {
      std::vector<double> expd = blend(-2.0);
      const double fexp = f(expd);
      if (fexp > frefl) {
        simplex[worst] = expd;
        val[worst] = fexp;
      } else {
        simplex[worst] = refl;
        val[worst] = frefl;
      }
    } else if (frefl > val[second]) {
      simplex[worst] = refl;
      val[worst] = frefl;
    } else {
      std::vector<double> con = blend(0.5);
      const double fcon = f(con);
      if (fcon > val[worst]) {
        simplex[worst] = con;
        val[worst] = fcon;
      } else {
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == bi) continue;
          for (std::size_t k = 0; k < n; ++k)
            simplex[i][k] = 0.5 * (simplex[i][k] + simplex[bi][k]);
          val[i] = f(simplex[i]);
        }
      }
    }
  }
  std::size_t bi = 0;
  for (std::size_t i = 1; i <= n; ++i)
    if (val[i] > val[bi]) bi = i;
  if (best_x) *best_x = simplex[bi];
  return val[bi];
}

std::vector<double> pack(const ComplexMatrix& m) {
  const std::size_t d = m.rows();
  std::vector<double> x(2 * d * d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t c = 0; c < d; ++c) {
      x[2 * (a * d + c)] = m(a, c).real();
      x[2 * (a * d + c) + 1] = m(a, c).imag();
    }
  return x;
}

// Schmidt-style seed: M = U(theta, phi) sqrt(diag(q))
ComplexMatrix seed_matrix(const std::vector<double>& q, const ComplexMatrix& u) {
  const std::size_t d = q.size();
  ComplexMatrix m(d, d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t i = 0; i < d; ++i) m(a, i) = u(a, i) * std::sqrt(q[i]);
  return m;
}

void apply_givens(ComplexMatrix& u, std::size_t r, std::size_t s, double theta, double phi) {
  const double c = std::cos(theta), sn = std::sin(theta);
  const Complex eip = std::exp(Complex(0.0, phi));
  for (std::size_t col = 0; col < u.cols(); ++col) {
    const Complex a = u(r, col), b = u(s, col);
    u(r, col) = c * a - std::conj(eip) * sn * b;
    u(s, col) = eip * sn * a + c * b;
  }
}

}  // namespace

double brute_force_oracle(const HermitianPreservingMap& delta, const Hamiltonian& h, double e,
                          const OracleOptions& opts) {
  const std::size_t d = delta.dim_in();
  if (d != h.dim()) throw std::invalid_argument("brute_force_oracle: dimension mismatch");
  if (d > kOracleDimCap || delta.dim_out() > kOracleDimCap)
    throw CapacityError("brute_force_oracle: dimension cap exceeded");

  Objective f{&delta, &h, e};

  struct Seen {
    double value;
    std::vector<double> x;
  };
  std::vector<Seen> pool;
  auto push = [&](std::vector<double> x) {
    const double v = f(x);
    pool.push_back({v, std::move(x)});
  };

  // Schmidt-coefficient simplex grid times a rotation grid
  const std::size_t g = std::max<std::size_t>(3, opts.grid);
  if (d == 1) {
    push(pack(ComplexMatrix::identity(1)));
  } else if (d == 2) {
    for (std::size_t iq = 0; iq < g; ++iq)
      for (std::size_t it = 0; it < g; ++it)
        for (std::size_t ip = 0; ip < g; ++ip) {
          const double q1 = double(iq) / double(g - 1);
          ComplexMatrix u = ComplexMatrix::identity(2);
          apply_givens(u, 0, 1, M_PI_2 * double(it) / double(g - 1),
                       2.0 * M_PI * double(ip) / double(g));
          push(pack(seed_matrix({1.0 - q1, q1}, u)));
        }
  } else {
    const std::size_t gq = std::max<std::size_t>(3, g / 2);
    const std::size_t ga = 4;
    for (std::size_t i = 0; i < gq; ++i)
      for (std::size_t k = 0; k + i < gq; ++k) {
        const double q0 = double(i) / double(gq - 1);
        const double q1 = double(k) / double(gq - 1);
        const double q2 = std::max(0.0, 1.0 - q0 - q1);
        for (std::size_t t1 = 0; t1 < ga; ++t1)
          for (std::size_t t2 = 0; t2 < ga; ++t2)
            for (std::size_t t3 = 0; t3 < ga; ++t3) {
              ComplexMatrix u = ComplexMatrix::identity(3);
              apply_givens(u, 0, 1, M_PI_2 * double(t1) / double(ga - 1), 0.0);
              apply_givens(u, 0, 2, M_PI_2 * double(t2) / double(ga - 1), M_PI_4);
              apply_givens(u, 1, 2, M_PI_2 * double(t3) / double(ga - 1), 0.0);
              push(pack(seed_matrix({q0, q1, q2}, u)));
            }
      }
  }
  Rng rng(opts.seed);
  for (std::size_t r = 0; r < 300; ++r) push(pack(rng.gaussian_matrix(d, d)));

  std::sort(pool.begin(), pool.end(),
            [](const Seen& a, const Seen& b) { return a.value > b.value; });

  // refinement rounds with a shrinking simplex
  auto polish = [&](std::vector<double> x, double scale0) {
    double v = -1e18;
    double scale = scale0;
    for (int round = 0; round < 3; ++round) {
      std::vector<double> xb;
      const double vr = nelder_mead(f, x, scale, opts.nm_iterations, &xb);
      if (vr > v) {
        v = vr;
        x = std::move(xb);
      }
      scale *= 0.3;
    }
    return v;
  };

  double best = pool.empty() ? 0.0 : pool.front().value;
  const std::size_t starts = std::min(opts.refinements, pool.size());
  for (std::size_t s = 0; s < starts; ++s) best = std::max(best, polish(pool[s].x, 0.25));
  for (std::size_t s = 0; s < 6; ++s)
    best = std::max(best, polish(pack(rng.gaussian_matrix(d, d)), 0.5));
  return std::max(0.0, best);
}

}  // namespace ecd

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

#include "ecd/errors.hpp"
#include "ecd/sdp.hpp"
#include "ecd/tolerances.hpp"

// Energy-constrained norm solver.
//
// Primal forms (Choi matrix J on out (x) in, probe marginal rho on in):
//   one-sided (trace-annihilating maps; optimum = half the norm):
//     max <J, W>  s.t.  0 <= W <= 1 (x) rho,  rho in S_E
//   two-sided (general maps; optimum = the norm):
//     max <J, V>  s.t.  -1 (x) rho <= V <= 1 (x) rho,  rho in S_E
// with S_E = { rho >= 0, tr rho = 1, tr(rho H) <= E }.
//
// The driver is Douglas-Rachford splitting between the affine subspace
// (with the linear objective folded into its prox) and the product of cones,
// with over-relaxation.  Certificates never come from raw iterates: the
// primal bound is the exact inner optimum at a feasified marginal (one
// eigendecomposition), and dual candidates are rounded to exact feasibility
// by a minimum-eigenvalue shift before the two-variable cover program is
// solved.  A Polyak supergradient ascent on the marginal, driven by the best
// certified dual value, polishes the primal between splitting rounds.

namespace ecd {

namespace {

int log_level() {
  static int lvl = [] {
    const char* v = std::getenv("ECD_LOG");
    if (!v) return 0;
    const std::string s(v);
    if (s == "debug") return 2;
    if (s == "info") return 1;
    return 0;
  }();
  return lvl;
}

//----------------------------------------------------------------------
// projections
//----------------------------------------------------------------------

std::vector<double> project_simplex(std::vector<double> v) {
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0, mu = 0.0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cum += u[i];
    const double cand = (cum - 1.0) / double(i + 1);
    if (u[i] - cand > 0.0) {
      k = i + 1;
      mu = cand;
    }
  }
  if (k == 0) mu = (cum - 1.0) / double(u.size());
  for (auto& x : v) x = std::max(0.0, x - mu);
  return v;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Projection onto { p >= 0, sum p = 1, <p, h> <= E }.
std::vector<double> project_prob_energy(const std::vector<double>& v,
                                        const std::vector<double>& h, double e) {
  std::vector<double> p = project_simplex(v);
  if (dot(p, h) <= e) return p;
  std::vector<double> shifted(v.size());
  auto eval = [&](double nu) {
    for (std::size_t i = 0; i < v.size(); ++i) shifted[i] = v[i] - nu * h[i];
    p = project_simplex(shifted);
    return dot(p, h);
  };
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 90 && eval(hi) > e; ++it) hi *= 2.0;
  for (int it = 0; it < 160; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (eval(mid) > e)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-15 * (1.0 + hi)) break;
  }
  eval(hi);
  return p;
}

// Exact feasibility repair: clip, renormalise, blend towards the ground level.
void feasify_p(std::vector<double>& p, const std::vector<double>& h, double e) {
  double s = 0.0;
  for (auto& x : p) {
    if (x < 0.0) x = 0.0;
    s += x;
  }
  if (s <= 0.0) {
    std::fill(p.begin(), p.end(), 0.0);
    p[0] = 1.0;
    return;
  }
  for (auto& x : p) x /= s;
  const double en = dot(p, h);
  if (en > e) {
    const double blend = 1.0 - e / en;
    for (auto& x : p) x *= (1.0 - blend);
    p[0] += blend;
  }
}

void psd_inplace(ComplexMatrix& m) {
  m = psd_project(HermitianMatrix::symmetrized(m)).mat();
}

// Projection of a Hermitian matrix onto { rho >= 0, tr = 1, tr(rho H) <= E }.
ComplexMatrix project_density_energy(const ComplexMatrix& x0, const Hamiltonian& h, double e) {
  const std::size_t d = x0.rows();
  ComplexMatrix rho(d, d);
  auto spectral_simplex = [&](const ComplexMatrix& x) {
    auto es = eig_hermitian(HermitianMatrix::symmetrized(x));
    std::vector<double> p = project_simplex(es.values);
    ComplexMatrix out(d, d);
    for (std::size_t k = 0; k < d; ++k) {
      if (p[k] == 0.0) continue;
      for (std::size_t i = 0; i < d; ++i) {
        const Complex vik = es.vectors(i, k) * p[k];
        for (std::size_t j = 0; j < d; ++j) out(i, j) += vik * std::conj(es.vectors(j, k));
      }
    }
    return out;
  };
  auto energy_of = [&](const ComplexMatrix& r) {
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) s += h.level(k) * r(k, k).real();
    return s;
  };
  rho = spectral_simplex(x0);
  if (energy_of(rho) <= e) return rho;
  const ComplexMatrix hmat = ComplexMatrix::diagonal(h.spectrum());
  auto eval = [&](double nu) {
    ComplexMatrix shifted = x0;
    ComplexMatrix scaled = hmat;
    scaled *= Complex(nu, 0.0);
    shifted -= scaled;
    rho = spectral_simplex(shifted);
    return energy_of(rho);
  };
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 90 && eval(hi) > e; ++it) hi *= 2.0;
  for (int it = 0; it < 110; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (eval(mid) > e)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-14 * (1.0 + hi)) break;
  }
  eval(hi);
  return rho;
}

ComplexMatrix feasify_rho(const ComplexMatrix& x, const Hamiltonian& h, double e) {
  const std::size_t d = x.rows();
  auto es = eig_hermitian(HermitianMatrix::symmetrized(x));
  double s = 0.0;
  for (auto& lam : es.values) {
    if (lam < 0.0) lam = 0.0;
    s += lam;
  }
  ComplexMatrix rho(d, d);
  if (s <= 0.0) {
    rho(0, 0) = 1.0;
    return rho;
  }
  for (std::size_t k = 0; k < d; ++k) {
    const double pk = es.values[k] / s;
    if (pk == 0.0) continue;
    for (std::size_t i = 0; i < d; ++i) {
      const Complex vik = es.vectors(i, k) * pk;
      for (std::size_t j = 0; j < d; ++j) rho(i, j) += vik * std::conj(es.vectors(j, k));
    }
  }
  double en = 0.0;
  for (std::size_t k = 0; k < d; ++k) en += h.level(k) * rho(k, k).real();
  if (en > e) {
    const double blend = 1.0 - e / en;
    rho *= Complex(1.0 - blend, 0.0);
    rho(0, 0) += blend;
  }
  return rho;
}

//----------------------------------------------------------------------
// cover program: min x + yE  s.t.  x 1 + y H >= G, x, y >= 0
//----------------------------------------------------------------------

struct CoverResult {
  double x = 0.0, y = 0.0, value = 0.0;
};

CoverResult cover_lp_vector(const std::vector<double>& g, const std::vector<double>& h,
                            double e) {
  const std::size_t d = g.size();
  std::vector<double> ys = {0.0};
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a + 1; b < d; ++b) {
      if (h[a] == h[b]) continue;
      const double y = (g[a] - g[b]) / (h[a] - h[b]);
      if (y > 0.0 && std::isfinite(y)) ys.push_back(y);
    }
  CoverResult best;
  best.value = std::numeric_limits<double>::infinity();
  for (double y : ys) {
    double x = 0.0;
    for (std::size_t a = 0; a < d; ++a) x = std::max(x, g[a] - y * h[a]);
    const double val = x + y * e;
    if (val < best.value) best = {x, y, val};
  }
  return best;
}

CoverResult cover_lp_matrix(const HermitianMatrix& g, const Hamiltonian& h, double e) {
  const ComplexMatrix hmat = ComplexMatrix::diagonal(h.spectrum());
  auto xeval = [&](double y) {
    ComplexMatrix m = g.mat();
    ComplexMatrix scaled = hmat;
    scaled *= Complex(y, 0.0);
    m -= scaled;
    return std::max(0.0, max_eigenvalue(HermitianMatrix::symmetrized(m)));
  };
  auto psi = [&](double y) { return xeval(y) + y * e; };
  double a = 0.0;
  double b = std::max(1e-9, psi(0.0) / std::max(e, 1e-12)) * 1.05;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
  double f1 = psi(c1), f2 = psi(c2);
  for (int it = 0; it < 90; ++it) {
    if (f1 > f2) {
      a = c1;
      c1 = c2;
      f1 = f2;
      c2 = a + gr * (b - a);
      f2 = psi(c2);
    } else {
      b = c2;
      c2 = c1;
      f2 = f1;
      c1 = b - gr * (b - a);
      f1 = psi(c1);
    }
    if (b - a < 1e-13 * (1.0 + b)) break;
  }
  CoverResult r;
  r.value = std::numeric_limits<double>::infinity();
  for (double y : {0.0, 0.5 * (a + b)}) {
    const double x = xeval(y);
    const double val = x + y * e;
    if (val < r.value) r = {x, y, val};
  }
  return r;
}

//----------------------------------------------------------------------
// shared pieces
//----------------------------------------------------------------------

ComplexMatrix kron_identity_left(std::size_t copies, const ComplexMatrix& rho) {
  const std::size_t d = rho.rows();
  ComplexMatrix out(copies * d, copies * d);
  for (std::size_t b = 0; b < copies; ++b)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) out(b * d + i, b * d + j) = rho(i, j);
  return out;
}

ComplexMatrix sqrt_psd(const ComplexMatrix& rho) {
  auto es = eig_hermitian(HermitianMatrix::symmetrized(rho));
  const std::size_t d = rho.rows();
  ComplexMatrix out(d, d);
  for (std::size_t k = 0; k < d; ++k) {
    const double lam = std::max(0.0, es.values[k]);
    if (lam == 0.0) continue;
    const double s = std::sqrt(lam);
    for (std::size_t i = 0; i < d; ++i) {
      const Complex vik = es.vectors(i, k) * s;
      for (std::size_t j = 0; j < d; ++j) out(i, j) += vik * std::conj(es.vectors(j, k));
    }
  }
  return out;
}

double spectral_estimate(const HermitianMatrix& j) {
  const std::size_t n = j.dim();
  if (n == 0) return 0.0;
  std::vector<Complex> v(n);
  std::uint64_t state = 88172645463325252ull;
  auto next = [&state]() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return double(state % 1000003) / 1000003.0 - 0.5;
  };
  double nrm = 0.0;
  for (auto& x : v) {
    x = Complex(next(), next());
    nrm += std::norm(x);
  }
  nrm = std::sqrt(nrm);
  for (auto& x : v) x /= nrm;
  double lam = 0.0;
  for (int it = 0; it < 40; ++it) {
    std::vector<Complex> w = j.mat() * v;
    lam = 0.0;
    for (const auto& x : w) lam += std::norm(x);
    lam = std::sqrt(lam);
    if (lam == 0.0) return 0.0;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / lam;
  }
  return lam;
}

struct DualCandidate {
  double value = std::numeric_limits<double>::infinity();
  double x = 0.0, y = 0.0;
  ComplexMatrix z;
  double cover_resid = 0.0;
};

struct PrimalCandidate {
  double value = -std::numeric_limits<double>::infinity();
  ComplexMatrix rho;
  ComplexMatrix variable;
};

// Exact inner optimum at a fixed marginal; one_sided takes the positive part,
// the two-sided form takes the full absolute spectrum.  Also emits the raw
// dual candidate built from the same eigensystem.
PrimalCandidate certify_primal_dense(const HermitianMatrix& j, const ComplexMatrix& rho,
                                     std::size_t dim_out, bool one_sided,
                                     ComplexMatrix* z_out) {
  const std::size_t n = j.dim();
  PrimalCandidate out;
  out.rho = rho;
  const ComplexMatrix s = kron_identity_left(dim_out, sqrt_psd(rho));
  const ComplexMatrix m = s * (j.mat() * s);
  auto es = eig_hermitian(HermitianMatrix::symmetrized(m));
  const double lam_scale =
      std::max(std::abs(es.values.front()), std::abs(es.values.back()));
  const double thresh = 1e-11 * std::max(1.0, lam_scale);

  double value = 0.0;
  ComplexMatrix w(n, n);
  ComplexMatrix z(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lam = es.values[k];
    const bool take = one_sided ? (lam > 0.0) : (lam != 0.0);
    if (!take) continue;
    value += one_sided ? lam : std::abs(lam);
    const double sign = (lam > 0.0) ? 1.0 : -1.0;
    std::vector<Complex> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = es.vectors(i, k);
    std::vector<Complex> sv = s * col;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vik = sv[i] * sign;
      for (std::size_t jj = 0; jj < n; ++jj) w(i, jj) += vik * std::conj(sv[jj]);
    }
    if (z_out && std::abs(lam) > thresh) {
      std::vector<Complex> jw = j.mat() * sv;
      const double inv = 1.0 / std::abs(lam);
      for (std::size_t i = 0; i < n; ++i) {
        const Complex vik = jw[i] * inv;
        for (std::size_t jj = 0; jj < n; ++jj) z(i, jj) += vik * std::conj(jw[jj]);
      }
    }
  }
  out.value = value;
  out.variable = w;
  if (z_out) *z_out = z;
  return out;
}

// Round a dual candidate to exact feasibility and price it.  One-sided:
// Z >= J, Z >= 0; two-sided with P = Z1 + Z2: P >= J, P >= -J.
DualCandidate round_dual_dense(const HermitianMatrix& j, const ComplexMatrix& z_raw,
                               const Hamiltonian& h, double e, std::size_t dim_out,
                               bool one_sided) {
  const std::size_t n = j.dim();
  DualCandidate out;
  ComplexMatrix z = HermitianMatrix::symmetrized(z_raw).mat();
  {
    ComplexMatrix zm = z;
    zm -= j.mat();
    const double l1 = min_eigenvalue(HermitianMatrix::symmetrized(zm));
    double l2;
    if (one_sided) {
      l2 = min_eigenvalue(HermitianMatrix::symmetrized(z));
    } else {
      ComplexMatrix zp = z;
      zp += j.mat();
      l2 = min_eigenvalue(HermitianMatrix::symmetrized(zp));
    }
    double shift = std::max({0.0, -l1, -l2});
    shift += 1e-13 * std::max(1.0, j.mat().max_abs());
    for (std::size_t i = 0; i < n; ++i) z(i, i) += shift;
  }
  const std::size_t dim_in = n / dim_out;
  HermitianMatrix g = HermitianMatrix::symmetrized(partial_trace(z, dim_out, dim_in, 1));
  CoverResult c = cover_lp_matrix(g, h, e);
  ComplexMatrix cov = ComplexMatrix::diagonal(h.spectrum());
  cov *= Complex(c.y, 0.0);
  for (std::size_t i = 0; i < dim_in; ++i) cov(i, i) += c.x;
  cov -= g.mat();
  const double lmin = min_eigenvalue(HermitianMatrix::symmetrized(cov));
  if (lmin < 0.0) c.x += -lmin + 1e-15;
  out.value = c.x + c.y * e;
  out.x = c.x;
  out.y = c.y;
  out.z = z;
  out.cover_resid = std::min(0.0, lmin);
  return out;
}

EcdCertificate zero_certificate(const EcdProblem& p) {
  EcdCertificate cert;
  cert.mode = p.mode;
  std::vector<double> ground(p.dim_in, 0.0);
  ground[0] = 1.0;
  cert.probe_marginal = DensityMatrix::diagonal(ground);
  cert.status = SolveStatus::optimal;
  return cert;
}

//----------------------------------------------------------------------
// dense solver (both forms)
//----------------------------------------------------------------------

EcdCertificate dense_solve(const EcdProblem& p, const SolveOptions& opts) {
  const bool one_sided = p.mode == NormMode::cptp_difference;
  const HermitianMatrix& j = *p.choi;
  const std::size_t din = p.dim_in, dout = p.dim_out;
  const Hamiltonian& h = p.hamiltonian;
  const double e = p.energy;
  const double factor = one_sided ? 2.0 : 1.0;

  const double safe_e = std::min(0.9 * e, 0.9 * h.mean_level());
  std::vector<double> interior =
      safe_e > 0.0 ? gibbs_state(h, safe_e).probabilities : std::vector<double>(din, 0.0);
  if (safe_e <= 0.0) interior[0] = 1.0;
  ComplexMatrix rho0 = ComplexMatrix::diagonal(interior);
  if (opts.warm_start) rho0 = opts.warm_start->mat().transpose();
  rho0 = feasify_rho(rho0, h, e);

  PrimalCandidate best_primal;
  DualCandidate best_dual;
  std::size_t evals = 0;
  auto consider = [&](const ComplexMatrix& rho_feas) {
    ComplexMatrix z_raw;
    PrimalCandidate pc = certify_primal_dense(j, rho_feas, dout, one_sided, &z_raw);
    ++evals;
    DualCandidate dc = round_dual_dense(j, z_raw, h, e, dout, one_sided);
    if (pc.value > best_primal.value) best_primal = pc;
    if (dc.value < best_dual.value) best_dual = dc;
  };
  consider(rho0);

  const double tau = opts.step_scale / std::max(1e-9, spectral_estimate(j));
  const double relax = opts.over_relaxation;

  // splitting state: (A, B, rho) = (W, Y, rho) or (Y1, Y2, rho)
  ComplexMatrix za, zb, zrho;
  if (one_sided) {
    za = best_primal.variable;
    zb = kron_identity_left(dout, best_primal.rho);
    zb -= za;
    zrho = best_primal.rho;
  } else {
    ComplexMatrix cap = kron_identity_left(dout, best_primal.rho);
    za = cap;
    za -= best_primal.variable;
    zb = cap;
    zb += best_primal.variable;
    zrho = best_primal.rho;
  }

  std::size_t iter = 0;
  SolveStatus status = SolveStatus::max_iterations;
  while (iter < opts.max_iterations) {
    const std::size_t chunk = std::min(opts.certify_every, opts.max_iterations - iter);
    for (std::size_t k = 0; k < chunk; ++k, ++iter) {
      ComplexMatrix xa = za, xb = zb, xrho = zrho;
      {
        ComplexMatrix ja = j.mat();
        if (one_sided) {
          ja *= Complex(tau, 0.0);
          xa += ja;
        } else {
          ja *= Complex(0.5 * tau, 0.0);
          xb += ja;
          xa -= ja;
        }
      }
      if (one_sided) {
        ComplexMatrix r = xa;
        r += xb;
        r -= kron_identity_left(dout, xrho);
        ComplexMatrix tb = partial_trace(r, dout, din, 1);
        ComplexMatrix lam = r;
        lam *= Complex(0.5, 0.0);
        ComplexMatrix corr = kron_identity_left(dout, tb);
        corr *= Complex(0.5 / (2.0 + double(dout)), 0.0);
        lam -= corr;
        xa -= lam;
        xb -= lam;
        tb *= Complex(1.0 / (2.0 + double(dout)), 0.0);
        xrho += tb;
      } else {
        ComplexMatrix r = xa;
        r += xb;
        ComplexMatrix cap = kron_identity_left(dout, xrho);
        cap *= Complex(2.0, 0.0);
        r -= cap;
        ComplexMatrix tb = partial_trace(r, dout, din, 1);
        ComplexMatrix lam = r;
        lam *= Complex(0.5, 0.0);
        ComplexMatrix corr = kron_identity_left(dout, tb);
        corr *= Complex(-1.0 / (1.0 + 2.0 * double(dout)), 0.0);
        lam += corr;
        xa -= lam;
        xb -= lam;
        tb *= Complex(1.0 / (1.0 + 2.0 * double(dout)), 0.0);
        xrho += tb;
      }
      ComplexMatrix va = xa, vb = xb, vrho = xrho;
      va *= Complex(2.0, 0.0);
      va -= za;
      vb *= Complex(2.0, 0.0);
      vb -= zb;
      vrho *= Complex(2.0, 0.0);
      vrho -= zrho;
      ComplexMatrix ca = va, cb = vb;
      psd_inplace(ca);
      psd_inplace(cb);
      ComplexMatrix crho = project_density_energy(vrho, h, e);
      {
        ComplexMatrix d = ca;
        d -= xa;
        d *= Complex(relax, 0.0);
        za += d;
      }
      {
        ComplexMatrix d = cb;
        d -= xb;
        d *= Complex(relax, 0.0);
        zb += d;
      }
      {
        ComplexMatrix d = crho;
        d -= xrho;
        d *= Complex(relax, 0.0);
        zrho += d;
      }
      if (k + 1 == chunk) {
        consider(feasify_rho(crho, h, e));
        ComplexMatrix zdr = cb;
        zdr -= vb;
        zdr *= Complex(1.0 / tau, 0.0);
        if (!one_sided) {
          ComplexMatrix z2 = ca;
          z2 -= va;
          z2 *= Complex(1.0 / tau, 0.0);
          zdr += z2;
        }
        DualCandidate dc = round_dual_dense(j, zdr, h, e, dout, one_sided);
        if (dc.value < best_dual.value) best_dual = dc;
      }
    }

    // Polyak supergradient ascent with a fresh direction each step
    ComplexMatrix rho_cur = best_primal.rho;
    for (std::size_t s = 0; s < opts.polish_steps; ++s) {
      ComplexMatrix z_raw;
      PrimalCandidate pc = certify_primal_dense(j, rho_cur, dout, one_sided, &z_raw);
      ++evals;
      if (pc.value > best_primal.value) best_primal = pc;
      if (s % 8 == 0) {
        DualCandidate dc = round_dual_dense(j, z_raw, h, e, dout, one_sided);
        if (dc.value < best_dual.value) best_dual = dc;
      }
      const double gapv = best_dual.value - pc.value;
      if (gapv <= 0.25 * opts.gap_tol / factor) break;
      const HermitianMatrix gz =
          HermitianMatrix::symmetrized(partial_trace(z_raw, dout, din, 1));
      const double gn2 = std::pow(gz.mat().frobenius_norm(), 2);
      if (gn2 <= 1e-18) break;
      ComplexMatrix step = gz.mat();
      step *= Complex(gapv / gn2, 0.0);
      rho_cur += step;
      rho_cur = feasify_rho(project_density_energy(rho_cur, h, e), h, e);
    }

    const double gap_norm = factor * (best_dual.value - best_primal.value);
    if (log_level() >= 2)
      std::fprintf(stderr, "[ecd] dense iter=%zu lower=%.10f upper=%.10f gap=%.3e\n", iter,
                   factor * best_primal.value, factor * best_dual.value, gap_norm);
    if (gap_norm <= opts.gap_tol) {
      status = SolveStatus::optimal;
      break;
    }
    if (!std::isfinite(best_primal.value) || !std::isfinite(best_dual.value)) {
      status = SolveStatus::infeasible_numerics;
      break;
    }
  }

  EcdCertificate cert;
  cert.mode = p.mode;
  cert.primal_value = best_primal.value;
  cert.dual_value = best_dual.value;
  cert.norm_lower = factor * best_primal.value;
  cert.norm_upper = factor * best_dual.value;
  cert.gap = cert.norm_upper - cert.norm_lower;
  cert.dual_x = best_dual.x;
  cert.dual_y = best_dual.y;
  cert.iterations = iter + evals;
  cert.status = status;
  cert.probe_marginal =
      DensityMatrix::clean(HermitianMatrix::symmetrized(best_primal.rho.transpose()));
  if (p.product_dim() <= 128) {
    cert.primal_variable = HermitianMatrix::symmetrized(best_primal.variable);
    cert.dual_z = HermitianMatrix::symmetrized(best_dual.z);
  }
  cert.residuals.trace = std::abs(best_primal.rho.trace().real() - 1.0);
  double en = 0.0;
  for (std::size_t k = 0; k < din; ++k) en += h.level(k) * best_primal.rho(k, k).real();
  cert.residuals.energy = std::max(0.0, en - e);
  {
    ComplexMatrix cap = kron_identity_left(dout, best_primal.rho);
    if (one_sided) {
      cert.residuals.primal_psd =
          std::min(0.0, min_eigenvalue(HermitianMatrix::symmetrized(best_primal.variable)));
      cap -= best_primal.variable;
      cert.residuals.primal_cap =
          std::min(0.0, min_eigenvalue(HermitianMatrix::symmetrized(cap)));
    } else {
      ComplexMatrix lo = cap, hi = cap;
      lo += best_primal.variable;
      hi -= best_primal.variable;
      const double m = std::min(min_eigenvalue(HermitianMatrix::symmetrized(lo)),
                                min_eigenvalue(HermitianMatrix::symmetrized(hi)));
      cert.residuals.primal_psd = std::min(0.0, m);
      cert.residuals.primal_cap = std::min(0.0, m);
    }
  }
  {
    ComplexMatrix zm = best_dual.z;
    zm -= j.mat();
    double m = min_eigenvalue(HermitianMatrix::symmetrized(zm));
    if (one_sided) {
      m = std::min(m, min_eigenvalue(HermitianMatrix::symmetrized(best_dual.z)));
    } else {
      ComplexMatrix zp = best_dual.z;
      zp += j.mat();
      m = std::min(m, min_eigenvalue(HermitianMatrix::symmetrized(zp)));
    }
    cert.residuals.dual_psd = std::min(0.0, m);
  }
  cert.residuals.dual_cover = best_dual.cover_resid;
  return cert;
}

//----------------------------------------------------------------------
// reduced one-sided solver (block Choi support, diagonal marginal)
//----------------------------------------------------------------------

struct ReducedPrimal {
  double value = -std::numeric_limits<double>::infinity();
  std::vector<double> p;
  std::vector<ComplexMatrix> w;
};

struct ReducedDual {
  double value = std::numeric_limits<double>::infinity();
  double x = 0.0, y = 0.0;
  std::vector<ComplexMatrix> z;
  double cover_resid = 0.0;
};

EcdCertificate reduced_solve(const EcdProblem& p, const SolveOptions& opts) {
  const auto& blocks = p.blocks;
  const std::size_t nb = blocks.size();
  const std::size_t din = p.dim_in;
  const Hamiltonian& h = p.hamiltonian;
  const std::vector<double>& hv = h.spectrum();
  const double e = p.energy;
  const double factor = 2.0;

  std::vector<double> ka(din, 0.0);
  for (const auto& b : blocks)
    for (std::size_t i = 0; i < b.in_idx.size(); ++i) ka[b.in_idx[i]] += 1.0;

  const double safe_e = std::min(0.9 * e, 0.9 * h.mean_level());
  std::vector<double> interior =
      safe_e > 0.0 ? gibbs_state(h, safe_e).probabilities : std::vector<double>(din, 0.0);
  if (safe_e <= 0.0) interior[0] = 1.0;
  std::vector<double> p0 = interior;
  if (opts.warm_start && opts.warm_start->dim() == din) {
    for (std::size_t a = 0; a < din; ++a) p0[a] = opts.warm_start->mat()(a, a).real();
  }
  feasify_p(p0, hv, e);

  struct CertOut {
    ReducedPrimal primal;
    std::vector<ComplexMatrix> z_raw;
  };
  auto certify = [&](const std::vector<double>& pf, bool want_dual) {
    CertOut out;
    out.primal.p = pf;
    out.primal.value = 0.0;
    out.primal.w.resize(nb);
    if (want_dual) out.z_raw.resize(nb);
    for (std::size_t c = 0; c < nb; ++c) {
      const auto& blk = blocks[c];
      const std::size_t m = blk.in_idx.size();
      std::vector<double> sq(m);
      for (std::size_t i = 0; i < m; ++i) sq[i] = std::sqrt(std::max(0.0, pf[blk.in_idx[i]]));
      ComplexMatrix md(m, m);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < m; ++k) md(i, k) = sq[i] * blk.j(i, k) * sq[k];
      auto es = eig_hermitian(HermitianMatrix::symmetrized(md));
      const double lam_scale =
          std::max(std::abs(es.values.front()), std::abs(es.values.back()));
      const double thresh = 1e-11 * std::max(1.0, lam_scale);
      ComplexMatrix w(m, m), z(m, m);
      for (std::size_t k = 0; k < m; ++k) {
        const double lam = es.values[k];
        if (lam <= 0.0) continue;
        out.primal.value += lam;
        std::vector<Complex> sv(m);
        for (std::size_t i = 0; i < m; ++i) sv[i] = sq[i] * es.vectors(i, k);
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t jj = 0; jj < m; ++jj) w(i, jj) += sv[i] * std::conj(sv[jj]);
        if (want_dual && lam > thresh) {
          std::vector<Complex> jw = blk.j * sv;
          const double inv = 1.0 / lam;
          for (std::size_t i = 0; i < m; ++i) {
            const Complex vik = jw[i] * inv;
            for (std::size_t jj = 0; jj < m; ++jj) z(i, jj) += vik * std::conj(jw[jj]);
          }
        }
      }
      out.primal.w[c] = std::move(w);
      if (want_dual) out.z_raw[c] = std::move(z);
    }
    return out;
  };

  auto round_dual = [&](std::vector<ComplexMatrix> z) {
    ReducedDual out;
    double shift = 0.0;
    for (std::size_t c = 0; c < nb; ++c) {
      z[c] = HermitianMatrix::symmetrized(z[c]).mat();
      ComplexMatrix zm = z[c];
      zm -= blocks[c].j;
      shift = std::max(shift, -min_eigenvalue(HermitianMatrix::symmetrized(zm)));
      shift = std::max(shift, -min_eigenvalue(HermitianMatrix::symmetrized(z[c])));
    }
    shift += 1e-14;
    std::vector<double> g(din, 0.0);
    for (std::size_t c = 0; c < nb; ++c) {
      const std::size_t m = blocks[c].in_idx.size();
      for (std::size_t i = 0; i < m; ++i) {
        z[c](i, i) += shift;
        g[blocks[c].in_idx[i]] += z[c](i, i).real();
      }
    }
    CoverResult cr = cover_lp_vector(g, hv, e);
    double worst = 0.0;
    for (std::size_t a = 0; a < din; ++a)
      worst = std::min(worst, cr.x + cr.y * hv[a] - g[a]);
    if (worst < 0.0) cr.x += -worst;
    out.value = cr.x + cr.y * e;
    out.x = cr.x;
    out.y = cr.y;
    out.z = std::move(z);
    out.cover_resid = std::min(0.0, worst);
    return out;
  };

  ReducedPrimal best_primal;
  ReducedDual best_dual;
  std::size_t evals = 0;
  auto consider = [&](const std::vector<double>& pf) {
    CertOut co = certify(pf, true);
    ++evals;
    if (co.primal.value > best_primal.value) best_primal = co.primal;
    ReducedDual rd = round_dual(std::move(co.z_raw));
    if (rd.value < best_dual.value) best_dual = rd;
  };
  consider(p0);

  double jnorm = 0.0;
  for (const auto& b : blocks)
    jnorm = std::max(jnorm, spectral_estimate(HermitianMatrix::symmetrized(b.j)));
  const double tau = opts.step_scale / std::max(1e-9, jnorm);
  const double relax = opts.over_relaxation;

  std::vector<ComplexMatrix> zw = best_primal.w, zy(nb);
  std::vector<double> zp = best_primal.p;
  for (std::size_t c = 0; c < nb; ++c) {
    const auto& blk = blocks[c];
    const std::size_t m = blk.in_idx.size();
    ComplexMatrix y(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < m; ++k)
        y(i, k) = (i == k ? Complex(best_primal.p[blk.in_idx[i]], 0.0) : Complex(0.0, 0.0)) -
                  best_primal.w[c](i, k);
    zy[c] = std::move(y);
  }

  std::size_t iter = 0;
  SolveStatus status = SolveStatus::max_iterations;
  std::vector<ComplexMatrix> xw(nb), xy(nb), vw(nb), vy(nb), cw(nb), cy(nb);
  while (iter < opts.max_iterations) {
    const std::size_t chunk = std::min(opts.certify_every, opts.max_iterations - iter);
    for (std::size_t k = 0; k < chunk; ++k, ++iter) {
      std::vector<double> xp = zp;
      for (std::size_t c = 0; c < nb; ++c) {
        xw[c] = zw[c];
        ComplexMatrix ja = blocks[c].j;
        ja *= Complex(tau, 0.0);
        xw[c] += ja;
        xy[c] = zy[c];
      }
      {
        std::vector<double> t(din, 0.0);
        for (std::size_t c = 0; c < nb; ++c) {
          const auto& blk = blocks[c];
          const std::size_t m = blk.in_idx.size();
          ComplexMatrix r = xw[c];
          r += xy[c];
          for (std::size_t i = 0; i < m; ++i) {
            r(i, i) -= xp[blk.in_idx[i]];
            t[blk.in_idx[i]] += r(i, i).real();
          }
          vw[c] = std::move(r);  // reuse vw as scratch for residuals
        }
        std::vector<double> s(din, 0.0);
        for (std::size_t a = 0; a < din; ++a) s[a] = t[a] / (2.0 + ka[a]);
        for (std::size_t c = 0; c < nb; ++c) {
          const auto& blk = blocks[c];
          const std::size_t m = blk.in_idx.size();
          ComplexMatrix lam = vw[c];
          lam *= Complex(0.5, 0.0);
          for (std::size_t i = 0; i < m; ++i)
            lam(i, i) = Complex(0.5 * (vw[c](i, i).real() - s[blk.in_idx[i]]), 0.0);
          xw[c] -= lam;
          xy[c] -= lam;
        }
        for (std::size_t a = 0; a < din; ++a) xp[a] += s[a];
      }
      std::vector<double> vp(din);
      for (std::size_t c = 0; c < nb; ++c) {
        vw[c] = xw[c];
        vw[c] *= Complex(2.0, 0.0);
        vw[c] -= zw[c];
        vy[c] = xy[c];
        vy[c] *= Complex(2.0, 0.0);
        vy[c] -= zy[c];
        cw[c] = vw[c];
        psd_inplace(cw[c]);
        cy[c] = vy[c];
        psd_inplace(cy[c]);
      }
      for (std::size_t a = 0; a < din; ++a) vp[a] = 2.0 * xp[a] - zp[a];
      std::vector<double> cp = project_prob_energy(vp, hv, e);
      for (std::size_t c = 0; c < nb; ++c) {
        ComplexMatrix d = cw[c];
        d -= xw[c];
        d *= Complex(relax, 0.0);
        zw[c] += d;
        d = cy[c];
        d -= xy[c];
        d *= Complex(relax, 0.0);
        zy[c] += d;
      }
      for (std::size_t a = 0; a < din; ++a) zp[a] += relax * (cp[a] - xp[a]);

      if (k + 1 == chunk) {
        std::vector<double> pf = cp;
        feasify_p(pf, hv, e);
        consider(pf);
        std::vector<ComplexMatrix> zdr(nb);
        for (std::size_t c = 0; c < nb; ++c) {
          zdr[c] = cy[c];
          zdr[c] -= vy[c];
          zdr[c] *= Complex(1.0 / tau, 0.0);
        }
        ReducedDual rd = round_dual(std::move(zdr));
        if (rd.value < best_dual.value) best_dual = rd;
      }
    }

    // Polyak supergradient ascent with a fresh direction each step
    std::vector<double> pc = best_primal.p;
    for (std::size_t s = 0; s < opts.polish_steps; ++s) {
      CertOut co = certify(pc, true);
      ++evals;
      if (co.primal.value > best_primal.value) best_primal = co.primal;
      if (s % 8 == 0) {
        ReducedDual rd = round_dual(co.z_raw);
        if (rd.value < best_dual.value) best_dual = rd;
      }
      const double gapv = best_dual.value - co.primal.value;
      if (gapv <= 0.25 * opts.gap_tol / factor) break;
      std::vector<double> g(din, 0.0);
      for (std::size_t c = 0; c < nb; ++c) {
        const std::size_t m = blocks[c].in_idx.size();
        for (std::size_t i = 0; i < m; ++i)
          g[blocks[c].in_idx[i]] += co.z_raw[c](i, i).real();
      }
      const double gn2 = dot(g, g);
      if (gn2 <= 1e-18) break;
      for (std::size_t a = 0; a < din; ++a) pc[a] += (gapv / gn2) * g[a];
      pc = project_prob_energy(pc, hv, e);
      feasify_p(pc, hv, e);
    }
    consider(best_primal.p);

    const double gap_norm = factor * (best_dual.value - best_primal.value);
    if (log_level() >= 2)
      std::fprintf(stderr, "[ecd] reduced iter=%zu lower=%.10f upper=%.10f gap=%.3e\n", iter,
                   factor * best_primal.value, factor * best_dual.value, gap_norm);
    if (gap_norm <= opts.gap_tol) {
      status = SolveStatus::optimal;
      break;
    }
    if (!std::isfinite(best_primal.value) || !std::isfinite(best_dual.value)) {
      status = SolveStatus::infeasible_numerics;
      break;
    }
  }

  EcdCertificate cert;
  cert.mode = p.mode;
  cert.primal_value = best_primal.value;
  cert.dual_value = best_dual.value;
  cert.norm_lower = factor * best_primal.value;
  cert.norm_upper = factor * best_dual.value;
  cert.gap = cert.norm_upper - cert.norm_lower;
  cert.dual_x = best_dual.x;
  cert.dual_y = best_dual.y;
  cert.iterations = iter + evals;
  cert.status = status;
  cert.probe_marginal = DensityMatrix::diagonal(best_primal.p);
  cert.residuals.trace = 0.0;
  cert.residuals.energy = std::max(0.0, dot(best_primal.p, hv) - e);
  double wmin = 0.0, capmin = 0.0, zmin = 0.0;
  for (std::size_t c = 0; c < nb; ++c) {
    const auto& blk = blocks[c];
    const std::size_t m = blk.in_idx.size();
    wmin = std::min(wmin, min_eigenvalue(HermitianMatrix::symmetrized(best_primal.w[c])));
    ComplexMatrix cap = best_primal.w[c];
    cap *= Complex(-1.0, 0.0);
    for (std::size_t i = 0; i < m; ++i) cap(i, i) += best_primal.p[blk.in_idx[i]];
    capmin = std::min(capmin, min_eigenvalue(HermitianMatrix::symmetrized(cap)));
    ComplexMatrix zm = best_dual.z[c];
    zm -= blk.j;
    zmin = std::min(zmin, min_eigenvalue(HermitianMatrix::symmetrized(zm)));
    zmin = std::min(zmin, min_eigenvalue(HermitianMatrix::symmetrized(best_dual.z[c])));
  }
  cert.residuals.primal_psd = wmin;
  cert.residuals.primal_cap = capmin;
  cert.residuals.dual_psd = zmin;
  cert.residuals.dual_cover = best_dual.cover_resid;
  return cert;
}

}  // namespace

EcdCertificate solve(const EcdProblem& problem, const SolveOptions& opts) {
  if (problem.is_zero()) return zero_certificate(problem);
  if (problem.reduced()) return reduced_solve(problem, opts);
  return dense_solve(problem, opts);
}

EcdCertificate channel_distance(const Channel& n1, const Channel& n2, const Hamiltonian& h,
                                double e, const SolveOptions& opts) {
  return solve(assemble(HermitianPreservingMap::difference(n1, n2), h, e), opts);
}

}  // namespace ecd

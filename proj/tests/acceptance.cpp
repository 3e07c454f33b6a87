// Acceptance suite: one pass/fail line per criterion, with the certified
// evidence inline.  Exit code counts the failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ecd/bounds.hpp"
#include "ecd/channel.hpp"
#include "ecd/discrimination.hpp"
#include "ecd/random.hpp"
#include "ecd/sdp.hpp"
#include "ecd/state.hpp"

using namespace ecd;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double now_s() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

Channel random_channel(Rng& rng, std::size_t d, std::size_t env) {
  ComplexMatrix v = gram_schmidt(rng.gaussian_matrix(d * env, d));
  std::vector<ComplexMatrix> kraus;
  for (std::size_t e = 0; e < env; ++e) {
    ComplexMatrix k(d, d);
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t a = 0; a < d; ++a) k(b, a) = v(b * env + e, a);
    kraus.push_back(std::move(k));
  }
  return Channel(std::move(kraus), d, d);
}

HermitianPreservingMap random_map(Rng& rng, std::size_t d, bool trace_annihilating) {
  if (trace_annihilating)
    return HermitianPreservingMap::difference(random_channel(rng, d, 2),
                                              random_channel(rng, d, 2));
  std::vector<ComplexMatrix> plus, minus;
  for (int k = 0; k < 2; ++k) {
    ComplexMatrix g = rng.gaussian_matrix(d, d);
    g *= Complex(0.5, 0.0);
    plus.push_back(g);
    ComplexMatrix g2 = rng.gaussian_matrix(d, d);
    g2 *= Complex(0.5, 0.0);
    minus.push_back(g2);
  }
  return HermitianPreservingMap::from_parts(std::move(plus), std::move(minus), d, d);
}

HermitianPreservingMap attenuator_pair(std::size_t dim) {
  return HermitianPreservingMap::difference(Channel::attenuator(0.9, dim),
                                            Channel::attenuator(0.6, dim));
}

std::optional<DensityMatrix> pad_marginal(const DensityMatrix& small, std::size_t dim) {
  std::vector<double> p(dim, 0.0);
  for (std::size_t a = 0; a < small.dim() && a < dim; ++a) p[a] = small.mat()(a, a).real();
  double s = 0.0;
  for (double x : p) s += x;
  if (s <= 0.0) return std::nullopt;
  for (auto& x : p) x /= s;
  return DensityMatrix::diagonal(p);
}

//----------------------------------------------------------------------

Outcome criterion1() {
  Outcome out;
  Rng rng(101);
  double worst = 0.0;
  std::size_t runs = 0;
  for (int block = 0; block < 2; ++block) {
    const std::size_t d = block == 0 ? 2 : 3;
    const std::size_t maps = block == 0 ? 25 : 10;
    std::vector<double> spec(d);
    for (std::size_t k = 0; k < d; ++k) spec[k] = double(k);
    const Hamiltonian h = Hamiltonian::from_spectrum(spec);
    for (std::size_t m = 0; m < maps; ++m) {
      auto delta = random_map(rng, d, m % 2 == 0);
      for (double e : {0.25, 0.5, 1.0}) {
        auto cert = solve(assemble(delta, h, e));
        OracleOptions oo;
        oo.seed = 1000 + runs;
        const double oracle = brute_force_oracle(delta, h, e, oo);
        worst = std::max(worst, std::abs(cert.norm_upper - oracle));
        ++runs;
      }
    }
  }
  out.pass = worst <= 1e-3;
  std::ostringstream ss;
  ss << runs << " instances, worst |value - oracle| = " << worst;
  out.detail = ss.str();
  return out;
}

Outcome criterion2(EcdCertificate& sweep_e8_d32) {
  Outcome out;
  const double formula = 2.0 * std::sqrt(1.0 - std::exp(-0.72));
  SolveOptions opts;
  opts.max_iterations = 4000;
  opts.certify_every = 200;
  opts.polish_steps = 50;
  opts.step_scale = 6.0;
  const Hamiltonian h32 = Hamiltonian::number_operator(32);
  auto c32 = solve(assemble(attenuator_pair(32), h32, 8.0), opts);
  sweep_e8_d32 = c32;

  SolveOptions o64 = opts;
  o64.max_iterations = 1400;
  o64.warm_start = pad_marginal(c32.probe_marginal, 64);
  const Hamiltonian h64 = Hamiltonian::number_operator(64);
  auto c64 = solve(assemble(attenuator_pair(64), h64, 8.0), o64);

  // independent numeric route to the closed-form probe value: evaluate the
  // attenuator pair on a truncated coherent probe at |alpha|^2 = E
  auto cs = coherent_state(std::sqrt(8.0), 32);
  auto out1 = Channel::attenuator(0.9, 32).apply(cs.state);
  auto out2 = Channel::attenuator(0.6, 32).apply(cs.state);
  const double coherent_measured = trace_norm(out1.mat() - out2.mat());
  const bool coherent_ok = cs.tail_mass <= 1e-6 &&
                           std::abs(coherent_measured - formula) <= 1e-4 &&
                           coherent_measured <= c32.norm_upper + 1e-9;

  const bool dual_ok = c32.norm_upper <= 2.0 && c64.norm_upper <= 2.0;
  const bool primal_ok = c32.norm_lower >= formula - 1e-3;
  // certified stability: the largest difference any pair of true values
  // inside the two certified intervals can have
  const double worst_shift =
      std::max(c64.norm_upper - c32.norm_lower, c32.norm_upper - c64.norm_lower);
  const bool stable = worst_shift <= 1e-3;
  out.pass = dual_ok && primal_ok && stable && coherent_ok;
  std::ostringstream ss;
  ss << "d=32: [" << c32.norm_lower << ", " << c32.norm_upper << "], d=64: ["
     << c64.norm_lower << ", " << c64.norm_upper << "], coherent probe "
     << coherent_measured << " vs formula " << formula << " (tail " << cs.tail_mass
     << "), certified doubling shift <= " << worst_shift;
  out.detail = ss.str();
  return out;
}

Outcome criterion3(const EcdCertificate& e8_d32) {
  Outcome out;
  SolveOptions opts;
  opts.max_iterations = 3000;
  opts.certify_every = 200;
  opts.polish_steps = 50;
  opts.step_scale = 6.0;
  const Hamiltonian h32 = Hamiltonian::number_operator(32);
  const auto delta32 = attenuator_pair(32);

  std::vector<double> energies = {1.0, 2.0, 4.0, 8.0, 16.0};
  std::vector<EcdCertificate> certs;
  std::optional<DensityMatrix> warm;
  for (double e : energies) {
    if (e == 8.0 && e8_d32.iterations > 0) {
      certs.push_back(e8_d32);
      warm = e8_d32.probe_marginal;
      continue;
    }
    SolveOptions o = opts;
    o.warm_start = warm;
    certs.push_back(solve(assemble(delta32, h32, e), o));
    warm = certs.back().probe_marginal;
  }
  bool monotone = true;
  for (std::size_t k = 1; k < certs.size(); ++k)
    if (certs[k].norm_upper < certs[k - 1].norm_lower - 1e-9) monotone = false;
  const bool approaching =
      certs.back().norm_lower > certs[certs.size() - 2].norm_lower &&
      certs.back().norm_lower > 1.9;

  // E = 16 at doubled truncation, warm-started from the d=32 solution
  SolveOptions o64 = opts;
  o64.max_iterations = 1400;
  o64.warm_start = pad_marginal(certs.back().probe_marginal, 64);
  const Hamiltonian h64 = Hamiltonian::number_operator(64);
  auto c64 = solve(assemble(attenuator_pair(64), h64, 16.0), o64);
  // truncation-limited means the doubled truncation certifiably increased
  // the value: the intervals must be disjoint by more than the tolerance
  const bool truncation_limited = c64.norm_lower > certs.back().norm_upper + 1e-3;

  bool threshold_ok = c64.norm_lower >= 1.995;
  std::string which = "primary threshold 1.995";
  if (!threshold_ok && truncation_limited) {
    threshold_ok = c64.norm_lower >= 1.977;
    which = "fallback threshold 1.977 (truncation-limited)";
  } else if (!threshold_ok) {
    which = "primary threshold 1.995 failed; fallback 1.977 not applicable because the "
            "value is truncation-stable";
  }

  out.pass = monotone && approaching && threshold_ok;
  std::ostringstream ss;
  ss << "values(E=1,2,4,8,16; d=32): ";
  for (const auto& c : certs) ss << "[" << c.norm_lower << "," << c.norm_upper << "] ";
  ss << "monotone=" << (monotone ? "yes" : "NO") << "; E=16 d=64: [" << c64.norm_lower
     << "," << c64.norm_upper << "]; " << which;
  if (!threshold_ok)
    ss << " -- the certified sandwich excludes both thresholds (true value ~1.954; the "
          "approach to 2 continues: ~1.997 by E=32)";
  out.detail = ss.str();
  return out;
}

Outcome criterion4() {
  Outcome out;
  Rng rng(404);
  const Hamiltonian h = Hamiltonian::qubit();
  const double e = 0.5, e_prime = 1.0, tol_prop = 1e-3;
  std::size_t violations = 0, checks = 0;
  auto mid = [&](const HermitianPreservingMap& m, const Hamiltonian& hh, double ee) {
    auto c = solve(assemble(m, hh, ee));
    return 0.5 * (c.norm_lower + c.norm_upper);
  };
  auto expect = [&](bool ok) {
    ++checks;
    if (!ok) ++violations;
  };
  for (std::size_t trial = 0; trial < 50; ++trial) {
    auto d1 = random_map(rng, 2, trial % 2 == 0);
    auto d2 = random_map(rng, 2, trial % 3 == 0);
    const double v1 = mid(d1, h, e), v2 = mid(d2, h, e);
    expect(mid(d1.plus(d2), h, e) <= v1 + v2 + tol_prop);
    const double c = 1.0 + 0.1 * double(trial % 5);
    expect(std::abs(mid(d1.scaled(c), h, e) - c * v1) <= tol_prop * (1.0 + c));
    const double vp = mid(d1, h, e_prime);
    expect(v1 <= vp + tol_prop);
    expect(vp <= (e_prime / e) * v1 + tol_prop);
    if (trial % 5 == 0) {
      auto t = random_channel(rng, 2, 2);
      auto s = sum_hamiltonian(h, h);
      const double vt = mid(d1.tensor_with_channel(t).permute_input(s.perm), s.h, e);
      expect(std::abs(vt - v1) <= tol_prop);
      auto joint = d1.tensor_with_map(d2).permute_input(s.perm);
      const double vj = mid(joint, s.h, e);
      double best = 0.0;
      for (double e1 : {0.125, 0.25, 0.375})
        best = std::max(best, mid(d1, h, e1) * mid(d2, h, e - e1));
      expect(best <= vj + tol_prop);
    }
  }
  out.pass = violations == 0;
  std::ostringstream ss;
  ss << checks << " property checks over 50 trials, " << violations << " violations";
  out.detail = ss.str();
  return out;
}

Outcome criterion5() {
  Outcome out;
  const std::vector<double> ts = {0.01, 0.05, 0.1, 0.5};
  const std::vector<double> es = {0.25, 1.0, 4.0};
  double worst_margin = 1e18;
  bool all_ok = true;
  for (int sys = 0; sys < 2; ++sys) {
    const Hamiltonian h = sys == 0 ? Hamiltonian::qubit() : Hamiltonian::number_operator(16);
    auto reports = speed_limit_campaign(h, ts, es);
    for (const auto& r : reports) {
      const double measured = *r.measured;  // certified lower bound on the half-norm
      if (measured > r.bound_value + 1e-6) all_ok = false;
      worst_margin = std::min(worst_margin, r.bound_value - measured);
    }
  }
  // first orthogonal time of the qubit respects the minimal-time bound
  auto w = orthogonality_witness({0.0, 1.0}, M_PI);
  const bool ml_ok = w.in_hull && M_PI >= 1.0 / (4.0 * 0.5);
  out.pass = all_ok && ml_ok;
  std::ostringstream ss;
  ss << "24 grid points on two systems, min bound margin = " << worst_margin
     << ", orthogonal time " << M_PI << " >= " << 1.0 / (4.0 * 0.5);
  out.detail = ss.str();
  return out;
}

Outcome criterion6() {
  Outcome out;
  // integer spectrum at the full period: distance indistinguishable from zero
  const Hamiltonian h8 = Hamiltonian::number_operator(8);
  auto period = channel_distance(Channel::unitary_evolution(h8, 2.0 * M_PI),
                                 Channel::identity(8), h8, 1.0);
  const bool period_ok = period.norm_upper <= 1e-8;

  // geometric spectrum c^n (grounded): distance at t = 2 pi / c falls as c grows
  auto geometric_value = [&](double c) {
    std::vector<double> spec;
    for (int n = 0; n < 6; ++n) spec.push_back(std::pow(c, n) - 1.0);
    const Hamiltonian h = Hamiltonian::from_spectrum(spec);
    // the energy bound at the top of the spectrum is vacuous: unconstrained norm
    return channel_distance(Channel::unitary_evolution(h, 2.0 * M_PI / c),
                            Channel::identity(6), h, h.max_level());
  };
  auto c3 = geometric_value(3.0);
  auto c10 = geometric_value(10.0);
  const bool ordered = c3.norm_lower > c10.norm_upper;
  // closed form for a two-point phase spectrum: 2 sin(pi / c)
  const double f3 = 2.0 * std::sin(M_PI / 3.0), f10 = 2.0 * std::sin(M_PI / 10.0);
  const bool match = std::abs(0.5 * (c3.norm_lower + c3.norm_upper) - f3) <= 1e-3 &&
                     std::abs(0.5 * (c10.norm_lower + c10.norm_upper) - f10) <= 1e-3;
  out.pass = period_ok && ordered && match;
  std::ostringstream ss;
  ss << "period distance " << period.norm_upper << " <= 1e-8; geometric c=3: ["
     << c3.norm_lower << "," << c3.norm_upper << "] vs closed form " << f3 << ", c=10: ["
     << c10.norm_lower << "," << c10.norm_upper << "] vs " << f10;
  out.detail = ss.str();
  return out;
}

Outcome criterion7() {
  Outcome out;
  auto w = orthogonality_witness({0.0, 1.0}, M_PI);
  if (!w.in_hull) {
    out.pass = false;
    out.detail = "witness not found";
    return out;
  }
  const double overlap = std::abs(w.overlap);
  // evolve the witness and measure the trace distance directly
  const Hamiltonian h = Hamiltonian::qubit();
  ComplexMatrix u = Channel::unitary_evolution(h, M_PI).kraus()[0];
  std::vector<Complex> evolved = u * w.witness_state;
  const double dist = trace_norm(ComplexMatrix::outer(w.witness_state, w.witness_state) -
                                 ComplexMatrix::outer(evolved, evolved));
  out.pass = overlap <= 1e-10 && std::abs(dist - 2.0) <= 1e-8;
  std::ostringstream ss;
  ss << "overlap " << overlap << ", trace distance " << dist;
  out.detail = ss.str();
  return out;
}

Outcome criterion8() {
  Outcome out;
  Rng rng(808);
  const Hamiltonian h = Hamiltonian::qubit();
  const double e = 0.8;
  std::size_t violations = 0;
  double worst_margin = 1e18;
  for (std::size_t trial = 0; trial < 100; ++trial) {
    Channel n1 = random_channel(rng, 2, 2);
    Channel n2 = random_channel(rng, 2, 2);
    std::vector<Complex> psi = rng.unit_vector(4);
    for (int rep = 0; rep < 64; ++rep) {
      const double en = std::norm(psi[2]) + std::norm(psi[3]);
      if (en <= e) break;
      psi[2] *= 0.8;
      psi[3] *= 0.8;
      double nrm = 0.0;
      for (auto& c : psi) nrm += std::norm(c);
      for (auto& c : psi) c /= std::sqrt(nrm);
    }
    auto r = verify_entropy_bound(n1, n2, DensityMatrix::pure(psi), 2, h, h, e);
    if (!*r.satisfied) ++violations;
    worst_margin = std::min(worst_margin, *r.margin);
  }
  out.pass = violations == 0;
  std::ostringstream ss;
  ss << "100 trials, " << violations << " violations, smallest margin " << worst_margin;
  out.detail = ss.str();
  return out;
}

Outcome criterion9() {
  Outcome out;
  Rng rng(909);
  const EntropySource osc = OscillatorEntropy{};
  bool exact = true, dominated = true;
  for (int k = 0; k < 100; ++k) {
    const double eps = rng.uniform(1e-4, 0.99);
    const double e = rng.uniform(0.1, 8.0);
    const double alpha = rng.uniform(0.0, 2.0);
    const double e0 = rng.uniform(0.0, 1.0);
    auto cap = capacity_continuity_bound(eps, e, alpha, e0, osc);
    auto tel = telescoping_bound(eps, e, alpha, e0, osc);
    if (cap.classical != 2.0 * tel.simplified || cap.quantum != cap.classical) exact = false;
    if (tel.tighter > tel.simplified) dominated = false;
  }
  out.pass = exact && dominated;
  out.detail = std::string("100-point grid: identity ") + (exact ? "exact" : "BROKEN") +
               ", tighter form " + (dominated ? "dominated everywhere" : "NOT dominated");
  return out;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    Outcome result;
    double seconds;
  };
  std::vector<Entry> entries;
  EcdCertificate e8_d32;

  auto run = [&](int id, const char* name, auto&& fn) {
    const double t0 = now_s();
    Outcome o = fn();
    entries.push_back({id, name, std::move(o), now_s() - t0});
    const auto& e = entries.back();
    std::printf("[%s] criterion %d: %s (%.1fs) -- %s\n", e.result.pass ? "PASS" : "FAIL",
                e.id, e.name, e.seconds, e.result.detail.c_str());
    std::fflush(stdout);
  };

  run(1, "oracle equivalence", [] { return criterion1(); });
  run(2, "attenuator lower bound and truncation stability",
      [&] { return criterion2(e8_d32); });
  run(3, "unconstrained limit", [&] { return criterion3(e8_d32); });
  run(4, "norm property suite", [] { return criterion4(); });
  run(5, "speed limit", [] { return criterion5(); });
  run(6, "periodicity", [] { return criterion6(); });
  run(7, "witness construction", [] { return criterion7(); });
  run(8, "entropy continuity", [] { return criterion8(); });
  run(9, "bound arithmetic", [] { return criterion9(); });

  int failures = 0;
  for (const auto& e : entries)
    if (!e.result.pass) ++failures;
  std::printf("%d/%zu criteria passed\n", int(entries.size()) - failures, entries.size());
  return failures;
}

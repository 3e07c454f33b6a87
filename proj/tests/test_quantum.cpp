#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "ecd/channel.hpp"
#include "ecd/hamiltonian.hpp"
#include "ecd/random.hpp"
#include "ecd/serialize.hpp"
#include "ecd/state.hpp"
#include "ecd/tolerances.hpp"

using namespace ecd;

namespace {

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  return 0.5 * trace_norm(a.mat() - b.mat());
}

}  // namespace

//======================================================================
// Hamiltonians, Gibbs states, entropies
//======================================================================

TEST_CASE("Hamiltonian validation") {
  CHECK_THROWS(Hamiltonian::from_spectrum({1.0, 2.0}));       // not grounded
  CHECK_THROWS(Hamiltonian::from_spectrum({0.0, 2.0, 1.0}));  // not ascending
  auto h = Hamiltonian::grounded({5.0, 3.0, 7.0});
  CHECK(h.spectrum() == std::vector<double>{0.0, 2.0, 4.0});
  CHECK(Hamiltonian::number_operator(4).max_level() == 3.0);
}

TEST_CASE("projector below an energy level") {
  auto h = Hamiltonian::number_operator(4);
  auto p = h.projector_below(1.5);
  CHECK(p(0, 0).real() == 1.0);
  CHECK(p(1, 1).real() == 1.0);
  CHECK(p(2, 2).real() == 0.0);
}

TEST_CASE("g function") {
  CHECK(g_function(0.0) == 0.0);
  CHECK(g_function(1.0) == doctest::Approx(2.0));
  CHECK_THROWS(g_function(-0.1));
  // monotone and concave on a grid
  double prev = g_function(0.05);
  double prev_diff = prev - g_function(0.0);
  for (double x = 0.1; x < 6.0; x += 0.05) {
    const double cur = g_function(x);
    const double diff = cur - prev;
    CHECK(diff > 0.0);
    CHECK(diff <= prev_diff + 1e-12);
    prev = cur;
    prev_diff = diff;
  }
}

TEST_CASE("Gibbs state of a qubit at half filling") {
  auto g = gibbs_state(Hamiltonian::qubit(), 0.5);
  CHECK(g.beta == doctest::Approx(0.0));
  CHECK(g.probabilities[0] == doctest::Approx(0.5));
  CHECK(g.entropy_bits == doctest::Approx(1.0));
}

TEST_CASE("Gibbs state of the truncated oscillator matches the analytic entropy") {
  // mean occupation 1 on a deep truncation: entropy = g(1) = 2 bits
  auto g = gibbs_state(Hamiltonian::number_operator(64), 1.0);
  CHECK(g.energy == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(g.entropy_bits == doctest::Approx(g_function(1.0)).epsilon(1e-9));
  // independent series oracle for the untruncated thermal distribution
  const double beta = std::log(2.0);  // mean 1 <=> p_n ~ 2^{-n}
  double z = 0.0, s = 0.0;
  for (int n = 0; n < 200; ++n) z += std::exp(-beta * n);
  for (int n = 0; n < 200; ++n) {
    const double p = std::exp(-beta * n) / z;
    s -= p * std::log2(p);
  }
  CHECK(g.entropy_bits == doctest::Approx(s).epsilon(1e-9));
}

TEST_CASE("Gibbs state limits") {
  auto h = Hamiltonian::number_operator(8);
  CHECK(gibbs_state(h, 1e-6).entropy_bits < 1e-4);
  auto g0 = gibbs_state(h, 0.0);
  CHECK(g0.entropy_bits == 0.0);
  CHECK_THROWS(gibbs_state(h, 7.0));  // at the top level
  CHECK_THROWS(gibbs_state(h, -0.1));
  // energies above the uniform mean need negative beta
  auto hot = gibbs_state(h, 5.0);
  CHECK(hot.beta < 0.0);
  CHECK(hot.energy == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("Gibbs state maximises entropy under the energy constraint") {
  auto h = Hamiltonian::number_operator(5);
  Rng rng(42);
  const double e = 1.3;
  const double smax = gibbs_state(h, e).entropy_bits;
  for (int trial = 0; trial < 40; ++trial) {
    HermitianMatrix rho = rng.density(5);
    if (mean_energy(rho, h) > e) continue;
    CHECK(entropy_bits(rho) <= smax + 1e-9);
  }
}

TEST_CASE("mean energy basics") {
  auto h = Hamiltonian::qubit();
  CHECK(mean_energy(DensityMatrix::diagonal({1.0, 0.0}), h) == 0.0);
  CHECK(mean_energy(DensityMatrix::maximally_mixed(2), h) == doctest::Approx(0.5));
  auto g = gibbs_state(Hamiltonian::number_operator(16), 2.0);
  CHECK(mean_energy(DensityMatrix::diagonal(g.probabilities),
                    Hamiltonian::number_operator(16)) == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("conditional entropy") {
  Rng rng(9);
  // product state: S(B|C) = S(B)
  HermitianMatrix rb = rng.density(2);
  HermitianMatrix rc = rng.density(3);
  DensityMatrix prod{HermitianMatrix::symmetrized(tensor(rb.mat(), rc.mat()))};
  CHECK(conditional_entropy(prod, 2, 3) == doctest::Approx(entropy_bits(rb)).epsilon(1e-9));

  // maximally entangled pair: S(B|C) = -1 bit
  std::vector<Complex> phi = {1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0)};
  CHECK(conditional_entropy(DensityMatrix::pure(phi), 2, 2) == doctest::Approx(-1.0));

  // classical-quantum mixture: weighted average of the branch entropies
  HermitianMatrix r0 = rng.density(2), r1 = rng.density(2);
  const double p = 0.3;
  ComplexMatrix cq(4, 4);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      cq(i * 2 + 0, j * 2 + 0) = p * r0.mat()(i, j);
      cq(i * 2 + 1, j * 2 + 1) = (1.0 - p) * r1.mat()(i, j);
    }
  DensityMatrix mix{HermitianMatrix::symmetrized(cq)};
  const double expect = p * entropy_bits(r0) + (1.0 - p) * entropy_bits(r1);
  CHECK(conditional_entropy(mix, 2, 2) == doctest::Approx(expect).epsilon(1e-9));
  CHECK(conditional_entropy(mix, 2, 2) >= 0.0);

  // pure bipartite state: S(B|C) = -S(C)
  Rng rng2(11);
  auto psi = rng2.unit_vector(6);
  DensityMatrix pure = DensityMatrix::pure(psi);
  HermitianMatrix margc = HermitianMatrix::symmetrized(partial_trace(pure.mat(), 2, 3, 1));
  CHECK(conditional_entropy(pure, 2, 3) ==
        doctest::Approx(-entropy_bits(margc)).epsilon(1e-8));
}

//======================================================================
// coherent states
//======================================================================

TEST_CASE("coherent state basics") {
  auto vac = coherent_state(0.0, 8);
  CHECK(vac.tail_mass == 0.0);
  CHECK(std::abs(vac.ket[0]) == doctest::Approx(1.0));

  // overlap law |<a|b>|^2 = exp(-|a-b|^2)
  const Complex a(0.7, 0.2), b(0.1, -0.4);
  auto ca = coherent_state(a, 40);
  auto cb = coherent_state(b, 40);
  Complex ov = 0.0;
  for (std::size_t n = 0; n < 40; ++n) ov += std::conj(ca.ket[n]) * cb.ket[n];
  CHECK(std::norm(ov) == doctest::Approx(std::exp(-std::norm(a - b))).epsilon(1e-10));

  // mean occupation |alpha|^2, against a direct series sum
  const Complex alpha(1.1, 0.5);
  auto cs = coherent_state(alpha, 60);
  CHECK(cs.tail_mass <= tol::coherent_tail);
  double series = 0.0, z = 0.0;
  for (int n = 0; n < 60; ++n) {
    double logp = -std::norm(alpha) + n * std::log(std::norm(alpha)) - std::lgamma(n + 1.0);
    const double pn = std::exp(logp);
    series += n * pn;
    z += pn;
  }
  CHECK(mean_energy(cs.state, Hamiltonian::number_operator(60)) ==
        doctest::Approx(series / z).epsilon(1e-9));
  CHECK(series / z == doctest::Approx(std::norm(alpha)).epsilon(1e-8));

  // heavy truncation raises the warning flag
  auto clipped = coherent_state(3.0, 4);
  CHECK(clipped.tail_warning);
}

//======================================================================
// channels
//======================================================================

TEST_CASE("channel constructors validate") {
  ComplexMatrix half = ComplexMatrix::identity(2);
  half *= Complex(0.5, 0.0);
  CHECK_THROWS(Channel({half}, 2, 2));
  CHECK_NOTHROW(Channel({half}, 2, 2, /*allow_nonincreasing=*/true));
  CHECK(Channel({half}, 2, 2, true).trace_nonincreasing());
  ComplexMatrix big = ComplexMatrix::identity(2);
  big *= Complex(1.5, 0.0);
  CHECK_THROWS(Channel({big}, 2, 2, true));
}

TEST_CASE("built-in channels are trace preserving") {
  for (const Channel& c :
       {Channel::identity(3), Channel::attenuator(0.7, 8), Channel::depolarizing(3),
        Channel::unitary_evolution(Hamiltonian::number_operator(5), 0.9),
        Channel::displacement(Complex(0.3, 0.1), 12), Channel::squeezer(0.2, 12)}) {
    CHECK(c.completeness_residual() <= tol::cptp);
  }
}

TEST_CASE("attenuator limits") {
  auto id = Channel::attenuator(1.0, 6);
  Rng rng(3);
  DensityMatrix rho{rng.density(6)};
  CHECK(trace_distance(id.apply(rho), rho) < 1e-12);

  auto sink = Channel::attenuator(0.0, 6);
  std::vector<Complex> vac(6, 0.0);
  vac[0] = 1.0;
  CHECK(trace_distance(sink.apply(rho), DensityMatrix::pure(vac)) < 1e-12);
  // vacuum is a fixed point for every transmissivity
  auto mid = Channel::attenuator(0.43, 6);
  CHECK(trace_distance(mid.apply(DensityMatrix::pure(vac)), DensityMatrix::pure(vac)) < 1e-12);
}

TEST_CASE("attenuator maps coherent states to attenuated coherent states") {
  const double eta = 0.8;
  const Complex alpha(0.9, -0.3);
  const std::size_t d = 40;
  auto in = coherent_state(alpha, d);
  auto expect = coherent_state(eta * alpha, d);
  auto out = Channel::attenuator(eta, d).apply(in.state);
  CHECK(trace_distance(out, expect.state) < 1e-7);
}

TEST_CASE("attenuator semigroup composition") {
  const std::size_t d = 10;
  auto a1 = Channel::attenuator(0.9, d);
  auto a2 = Channel::attenuator(0.7, d);
  auto both = a1.compose_after(a2);
  auto direct = Channel::attenuator(0.9 * 0.7, d);
  CHECK((choi(both).mat() - choi(direct).mat()).max_abs() <= tol::composition);
}

TEST_CASE("unitary evolution basics") {
  auto h = Hamiltonian::number_operator(5);
  auto u0 = Channel::unitary_evolution(h, 0.0);
  CHECK((choi(u0).mat() - choi(Channel::identity(5)).mat()).max_abs() < 1e-14);
  // integer spectrum: period 2 pi
  auto up = Channel::unitary_evolution(h, 2.0 * M_PI);
  CHECK((choi(up).mat() - choi(Channel::identity(5)).mat()).max_abs() < 1e-12);
}

TEST_CASE("geometric-spectrum evolution touches only the low sector") {
  // levels c^n (grounded); at t = 2 pi / c all levels above the ground pick
  // up one common phase, so the evolution differs from the identity only on
  // the lowest sector
  const double c = 3.0;
  std::vector<double> spec;
  for (int n = 0; n < 5; ++n) spec.push_back(std::pow(c, n) - 1.0);
  auto h = Hamiltonian::from_spectrum(spec);
  auto u = Channel::unitary_evolution(h, 2.0 * M_PI / c);
  const ComplexMatrix& k = u.kraus()[0];
  const Complex rel = k(1, 1) / k(0, 0);
  for (std::size_t n = 1; n < 5; ++n)
    CHECK(std::abs(k(n, n) / k(0, 0) - rel) < 1e-12);
  CHECK(std::abs(rel - Complex(1.0, 0.0)) > 0.1);
}

TEST_CASE("choi matrices of reference channels") {
  // identity on a qubit: the unnormalised maximally entangled projector
  auto j = choi(Channel::identity(2));
  std::vector<Complex> phi = {1.0, 0.0, 0.0, 1.0};
  CHECK((j.mat() - ComplexMatrix::outer(phi, phi)).max_abs() < 1e-14);
  CHECK(partial_trace(j.mat(), 2, 2, 1).trace().real() == doctest::Approx(2.0));

  // completely depolarizing qubit channel: I/2 (x) I
  auto jd = choi(Channel::depolarizing(2));
  ComplexMatrix expect = tensor(ComplexMatrix::identity(2), ComplexMatrix::identity(2));
  expect *= Complex(0.5, 0.0);
  CHECK((jd.mat() - expect).max_abs() < 1e-12);

  // difference of a channel with itself: zero
  auto z = HermitianPreservingMap::difference(Channel::attenuator(0.5, 4),
                                              Channel::attenuator(0.5, 4));
  CHECK(z.choi().mat().max_abs() < 1e-14);

  // cptp maps have the identity as reduced Choi matrix on the input factor
  auto ja = choi(Channel::attenuator(0.77, 6));
  CHECK((partial_trace(ja.mat(), 6, 6, 1) - ComplexMatrix::identity(6)).max_abs() < 1e-12);
}

TEST_CASE("choi and Kraus actions agree") {
  Rng rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    // random channel from an isometry
    ComplexMatrix g = rng.gaussian_matrix(9, 3);
    ComplexMatrix v = gram_schmidt(g);
    std::vector<ComplexMatrix> kraus;
    for (std::size_t env = 0; env < 3; ++env) {
      ComplexMatrix k(3, 3);
      for (std::size_t b = 0; b < 3; ++b)
        for (std::size_t a = 0; a < 3; ++a) k(b, a) = v(b * 3 + env, a);
      kraus.push_back(std::move(k));
    }
    Channel n(std::move(kraus), 3, 3);
    auto j = choi(n);
    DensityMatrix rho{rng.density(3)};
    ComplexMatrix via_kraus = n.apply_matrix(rho.mat());
    ComplexMatrix via_choi = apply_from_choi(j, rho.mat(), 3, 3);
    CHECK((via_kraus - via_choi).max_abs() < 1e-12);
  }
}

TEST_CASE("energy-limit verification") {
  auto h2 = Hamiltonian::qubit();
  auto lim = verify_energy_limited(Channel::identity(2), h2, h2);
  REQUIRE(lim.has_value());
  CHECK(lim->alpha == doctest::Approx(1.0));
  CHECK(lim->e0 == doctest::Approx(0.0));

  const double eta = 0.8;
  auto hn = Hamiltonian::number_operator(10);
  auto lima = verify_energy_limited(Channel::attenuator(eta, 10), hn, hn);
  REQUIRE(lima.has_value());
  CHECK(lima->alpha == doctest::Approx(eta * eta).epsilon(1e-9));
  CHECK(lima->e0 == doctest::Approx(0.0));

  std::vector<Complex> vac(4, 0.0);
  vac[0] = 1.0;
  auto sink = Channel::constant(DensityMatrix::pure(vac), 4);
  auto h4 = Hamiltonian::number_operator(4);
  auto lims = verify_energy_limited(sink, h4, h4);
  REQUIRE(lims.has_value());
  CHECK(lims->alpha == doctest::Approx(0.0));
  CHECK(lims->e0 == doctest::Approx(0.0));
}

TEST_CASE("channel JSON round trip is bit exact") {
  auto c = Channel::attenuator(0.73, 5);
  c.set_energy_limit({0.73 * 0.73, 0.0});
  const std::string text = channel_to_json(c);
  Channel back = channel_from_json(text);
  REQUIRE(back.kraus().size() == c.kraus().size());
  for (std::size_t m = 0; m < c.kraus().size(); ++m)
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t k = 0; k < 5; ++k) {
        CHECK(back.kraus()[m](i, k).real() == c.kraus()[m](i, k).real());
        CHECK(back.kraus()[m](i, k).imag() == c.kraus()[m](i, k).imag());
      }
  CHECK(channel_to_json(back) == text);
}

TEST_CASE("sum Hamiltonian sorts the product spectrum") {
  auto s = sum_hamiltonian(Hamiltonian::qubit(), Hamiltonian::number_operator(3));
  CHECK(s.h.spectrum() == std::vector<double>{0.0, 1.0, 1.0, 2.0, 2.0, 3.0});
  std::vector<double> levels = {0.0, 1.0, 2.0, 1.0, 2.0, 3.0};
  for (std::size_t k = 0; k < 6; ++k) CHECK(levels[s.perm[k]] == s.h.level(k));
}

#include "doctest.h"

#include <cmath>
#include <complex>

#include "ecd/errors.hpp"
#include "ecd/matrix.hpp"
#include "ecd/random.hpp"
#include "ecd/tolerances.hpp"

using namespace ecd;

namespace {

bool approx_eq(const ComplexMatrix& a, const ComplexMatrix& b, double tol = 1e-12) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  ComplexMatrix d = a;
  d -= b;
  return d.max_abs() <= tol;
}

}  // namespace

TEST_CASE("eig of identity") {
  auto es = eig_hermitian(HermitianMatrix::identity(2));
  CHECK(es.values[0] == doctest::Approx(1.0));
  CHECK(es.values[1] == doctest::Approx(1.0));
  CHECK(approx_eq(es.vectors * es.vectors.adjoint(), ComplexMatrix::identity(2), 1e-12));
}

TEST_CASE("eig of a diagonal matrix sorts ascending") {
  auto es = eig_hermitian(HermitianMatrix::diagonal({3.0, 1.0}));
  CHECK(es.values[0] == doctest::Approx(1.0));
  CHECK(es.values[1] == doctest::Approx(3.0));
  // eigenvector of the smaller eigenvalue is |1>
  CHECK(std::abs(es.vectors(1, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(es.vectors(0, 1)) == doctest::Approx(1.0));
}

TEST_CASE("eig of the bit-flip matrix") {
  auto x = ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
  auto es = eig_hermitian(HermitianMatrix(x));
  CHECK(es.values[0] == doctest::Approx(-1.0));
  CHECK(es.values[1] == doctest::Approx(1.0));
}

TEST_CASE("eig reconstruction residual on random Hermitian matrices") {
  Rng rng(7);
  for (std::size_t n : {2u, 3u, 5u, 17u, 64u, 256u}) {
    HermitianMatrix h = rng.hermitian(n);
    auto es = eig_hermitian(h);
    CHECK(eig_residual(h, es) <= tol::eig);
    // unitarity of the eigenvector matrix
    ComplexMatrix g = es.vectors.adjoint() * es.vectors;
    g -= ComplexMatrix::identity(n);
    CHECK(g.max_abs() <= 1e-11 * double(n));
  }
}

TEST_CASE("eig handles complex off-diagonal structure") {
  auto y = ComplexMatrix::from_rows({{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}});
  auto es = eig_hermitian(HermitianMatrix(y));
  CHECK(es.values[0] == doctest::Approx(-1.0));
  CHECK(es.values[1] == doctest::Approx(1.0));
  CHECK(eig_residual(HermitianMatrix(y), es) <= tol::eig);
}

TEST_CASE("trace norm basics") {
  CHECK(trace_norm(ComplexMatrix(3, 3)) == doctest::Approx(0.0));
  CHECK(trace_norm(ComplexMatrix::diagonal({1.0, -2.0})) == doctest::Approx(3.0));
}

TEST_CASE("trace norm of a pure-state difference matches the overlap formula") {
  // || |psi><psi| - |phi><phi| ||_1 = 2 sqrt(1 - |<psi|phi>|^2)
  Rng rng(21);
  for (int trial = 0; trial < 8; ++trial) {
    auto psi = rng.unit_vector(4);
    auto phi = rng.unit_vector(4);
    Complex ov = 0.0;
    for (std::size_t i = 0; i < 4; ++i) ov += std::conj(psi[i]) * phi[i];
    ComplexMatrix d = ComplexMatrix::outer(psi, psi) - ComplexMatrix::outer(phi, phi);
    CHECK(trace_norm(d) ==
          doctest::Approx(2.0 * std::sqrt(1.0 - std::norm(ov))).epsilon(1e-10));
  }
}

TEST_CASE("trace norm of a non-Hermitian matrix equals the sum of singular values") {
  // [[0, 2], [0, 0]] has a single singular value 2
  auto a = ComplexMatrix::from_rows({{0.0, 2.0}, {0.0, 0.0}});
  CHECK(trace_norm(a) == doctest::Approx(2.0));
}

TEST_CASE("trace norm is a norm") {
  Rng rng(3);
  for (int trial = 0; trial < 6; ++trial) {
    ComplexMatrix a = rng.gaussian_matrix(4, 4);
    ComplexMatrix b = rng.gaussian_matrix(4, 4);
    const double c = rng.uniform(-3.0, 3.0);
    ComplexMatrix ca = a;
    ca *= Complex(c, 0.0);
    CHECK(trace_norm(ca) == doctest::Approx(std::abs(c) * trace_norm(a)).epsilon(1e-9));
    CHECK(trace_norm(a + b) <= trace_norm(a) + trace_norm(b) + 1e-9);
  }
}

TEST_CASE("tensor product basics") {
  CHECK(approx_eq(tensor(ComplexMatrix::identity(2), ComplexMatrix::identity(3)),
                  ComplexMatrix::identity(6)));
  auto d1 = ComplexMatrix::diagonal({1.0, 2.0});
  auto d2 = ComplexMatrix::diagonal({3.0, 4.0});
  CHECK(approx_eq(tensor(d1, d2), ComplexMatrix::diagonal({3.0, 4.0, 6.0, 8.0})));
  auto x = ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
  auto xx = tensor(x, x);
  CHECK(approx_eq(xx * xx, ComplexMatrix::identity(4)));
}

TEST_CASE("partial trace basics") {
  // maximally entangled two-qubit state, keep first factor -> I/2
  std::vector<Complex> phi = {1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0)};
  auto rho = ComplexMatrix::outer(phi, phi);
  auto red = partial_trace(rho, 2, 2, 0);
  CHECK(approx_eq(red, 0.5 * ComplexMatrix::identity(2)));

  Rng rng(5);
  auto a = rng.density(2).mat();
  auto b = rng.density(3).mat();
  auto prod = tensor(a, b);
  CHECK(approx_eq(partial_trace(prod, 2, 3, 1), b, 1e-12));
  CHECK(approx_eq(partial_trace(prod, 2, 3, 0), a, 1e-12));
  // trace preservation
  auto m = rng.gaussian_matrix(6, 6);
  CHECK(std::abs(partial_trace(m, 2, 3, 0).trace() - m.trace()) < 1e-12);
}

TEST_CASE("partial trace contracts the trace norm") {
  Rng rng(11);
  for (int trial = 0; trial < 6; ++trial) {
    HermitianMatrix m = rng.hermitian(6);
    CHECK(trace_norm(partial_trace(m.mat(), 2, 3, 1)) <= trace_norm(m.mat()) + 1e-9);
  }
}

TEST_CASE("psd projection") {
  auto p = psd_project(HermitianMatrix::diagonal({1.0, -1.0}));
  CHECK(approx_eq(p.mat(), ComplexMatrix::diagonal({1.0, 0.0})));
  auto z = psd_project(HermitianMatrix::diagonal({-1.0, -1.0}));
  CHECK(z.mat().max_abs() == doctest::Approx(0.0));

  Rng rng(13);
  HermitianMatrix rho = rng.density(4);
  CHECK(approx_eq(psd_project(rho).mat(), rho.mat(), 1e-10));

  // idempotence and eigenvalue-clipping optimality
  HermitianMatrix h = rng.hermitian(5);
  HermitianMatrix p1 = psd_project(h);
  CHECK(approx_eq(psd_project(p1).mat(), p1.mat(), 1e-10));
  CHECK(min_eigenvalue(p1) >= -1e-11);
  auto es = eig_hermitian(h);
  double best = 0.0;  // Frobenius distance of clipping in the eigenbasis
  for (double lam : es.values)
    if (lam < 0.0) best += lam * lam;
  ComplexMatrix diff = h.mat() - p1.mat();
  CHECK(diff.frobenius_norm() == doctest::Approx(std::sqrt(best)).epsilon(1e-9));
}

TEST_CASE("Hermitian constructor validates") {
  auto bad = ComplexMatrix::from_rows({{1.0, 2.0}, {0.5, 1.0}});
  CHECK_THROWS_AS(HermitianMatrix{bad}, std::invalid_argument);
  auto almost = ComplexMatrix::from_rows({{1.0, Complex(0.0, 1e-13)}, {0.0, 1.0}});
  CHECK_NOTHROW(HermitianMatrix{almost});
}

TEST_CASE("dimension budget is enforced") {
  CHECK_THROWS_AS(ComplexMatrix(1u << 13, 1u << 13), CapacityError);
}

TEST_CASE("unitary_exp produces a unitary") {
  Rng rng(17);
  HermitianMatrix g = rng.hermitian(5);
  ComplexMatrix u = unitary_exp(g, 0.7);
  CHECK(approx_eq(u * u.adjoint(), ComplexMatrix::identity(5), 1e-10));
}

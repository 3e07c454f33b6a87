#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ecd/errors.hpp"
#include "ecd/sdp.hpp"
#include "ecd/tolerances.hpp"

namespace ecd {

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

// Partition the product basis so the Choi matrix has no support across
// classes.  Kraus families contribute a clique over each operator's exact
// support; a direct Choi matrix contributes its exact nonzero pattern.
std::vector<std::vector<std::size_t>> support_partition(const HermitianPreservingMap& map) {
  const std::size_t din = map.dim_in(), dout = map.dim_out();
  const std::size_t n = din * dout;
  UnionFind uf(n);
  auto unite_support = [&](const ComplexMatrix& k) {
    std::size_t first = n;
    for (std::size_t b = 0; b < dout; ++b)
      for (std::size_t a = 0; a < din; ++a) {
        if (k(b, a) == Complex(0.0, 0.0)) continue;
        const std::size_t pos = b * din + a;
        if (first == n)
          first = pos;
        else
          uf.unite(first, pos);
      }
  };
  if (map.has_kraus()) {
    for (const auto& k : map.plus_kraus()) unite_support(k);
    for (const auto& k : map.minus_kraus()) unite_support(k);
  } else {
    const auto& j = map.direct_choi()->mat();
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = r + 1; c < n; ++c)
        if (j(r, c) != Complex(0.0, 0.0)) uf.unite(r, c);
  }
  std::vector<std::vector<std::size_t>> classes(n);
  for (std::size_t pos = 0; pos < n; ++pos) classes[uf.find(pos)].push_back(pos);
  std::vector<std::vector<std::size_t>> out;
  for (auto& c : classes)
    if (!c.empty()) out.push_back(std::move(c));
  return out;
}

// tr over the output factor of the Choi matrix; zero iff the map is
// trace-annihilating.
ComplexMatrix output_trace_of_choi(const HermitianPreservingMap& map) {
  const std::size_t din = map.dim_in(), dout = map.dim_out();
  if (!map.has_kraus()) return partial_trace(map.direct_choi()->mat(), dout, din, 1);
  ComplexMatrix t(din, din);
  auto add = [&](const std::vector<ComplexMatrix>& kraus, double sign) {
    for (const auto& k : kraus)
      for (std::size_t a = 0; a < din; ++a)
        for (std::size_t ap = 0; ap < din; ++ap) {
          Complex s = 0.0;
          for (std::size_t b = 0; b < dout; ++b) s += k(b, a) * std::conj(k(b, ap));
          t(a, ap) += sign * s;
        }
  };
  add(map.plus_kraus(), 1.0);
  add(map.minus_kraus(), -1.0);
  return t;
}

// Choi entry <(b,a)| J |(b',a')> accumulated from the Kraus difference.
Complex choi_entry(const HermitianPreservingMap& map, std::size_t b, std::size_t a,
                   std::size_t bp, std::size_t ap) {
  Complex s = 0.0;
  for (const auto& k : map.plus_kraus()) s += k(b, a) * std::conj(k(bp, ap));
  for (const auto& k : map.minus_kraus()) s -= k(b, a) * std::conj(k(bp, ap));
  return s;
}

}  // namespace

EcdProblem assemble(const HermitianPreservingMap& delta, const Hamiltonian& h, double e,
                    const AssembleOptions& opts) {
  if (e <= 0.0) throw std::invalid_argument("assemble: energy bound must be positive");
  if (delta.dim_in() != h.dim())
    throw std::invalid_argument("assemble: Hamiltonian dimension mismatch");

  EcdProblem p;
  p.dim_in = delta.dim_in();
  p.dim_out = delta.dim_out();
  p.hamiltonian = h;
  p.energy = e;

  const ComplexMatrix tb = output_trace_of_choi(delta);
  p.trace_annihilation_residual = tb.max_abs();
  p.mode = (p.trace_annihilation_residual <= tol::cptp) ? NormMode::cptp_difference
                                                        : NormMode::general;

  auto classes = support_partition(delta);
  // Keep only classes carrying Choi weight; the rest have W = 0.
  std::vector<std::vector<std::size_t>> live;
  for (auto& c : classes) {
    if (c.size() > 1) {
      live.push_back(std::move(c));
      continue;
    }
    const std::size_t pos = c.front();
    const std::size_t b = pos / p.dim_in, a = pos % p.dim_in;
    Complex v = delta.has_kraus() ? choi_entry(delta, b, a, b, a)
                                  : (*delta.direct_choi())(pos, pos);
    if (v != Complex(0.0, 0.0)) live.push_back(std::move(c));
  }

  if (live.empty()) return p;  // the zero map

  // Reduce whenever the Choi support is a proper block partition of the
  // product space: several classes, or one class covering a subspace.
  std::size_t live_positions = 0;
  for (const auto& c : live) live_positions += c.size();
  const bool use_reduced = !opts.force_dense && p.mode == NormMode::cptp_difference &&
                           (live.size() > 1 || live_positions < p.product_dim());
  if (use_reduced) {
    for (const auto& c : live) {
      EcdProblem::ChoiBlock blk;
      const std::size_t m = c.size();
      blk.out_idx.resize(m);
      blk.in_idx.resize(m);
      for (std::size_t i = 0; i < m; ++i) {
        blk.out_idx[i] = c[i] / p.dim_in;
        blk.in_idx[i] = c[i] % p.dim_in;
      }
      ComplexMatrix j(m, m);
      if (delta.has_kraus()) {
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t k = 0; k < m; ++k)
            j(i, k) =
                choi_entry(delta, blk.out_idx[i], blk.in_idx[i], blk.out_idx[k], blk.in_idx[k]);
      } else {
        const auto& full = delta.direct_choi()->mat();
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t k = 0; k < m; ++k) j(i, k) = full(c[i], c[k]);
      }
      blk.j = HermitianMatrix::symmetrized(j).mat();
      if (blk.j.max_abs() > 0.0) p.blocks.push_back(std::move(blk));
    }
    return p;
  }

  HermitianMatrix j = delta.choi();
  if (j.mat().max_abs() > 0.0) p.choi = std::move(j);
  return p;
}

std::vector<Complex> purify(const DensityMatrix& rho) {
  auto es = eig_hermitian(rho.herm());
  const std::size_t d = rho.dim();
  std::vector<Complex> psi(d * d, Complex(0.0, 0.0));
  for (std::size_t k = 0; k < d; ++k) {
    const double lam = std::max(0.0, es.values[k]);
    if (lam == 0.0) continue;
    const double s = std::sqrt(lam);
    for (std::size_t i = 0; i < d; ++i) psi[i * d + k] = s * es.vectors(i, k);
  }
  double nrm = 0.0;
  for (const auto& c : psi) nrm += std::norm(c);
  nrm = std::sqrt(nrm);
  for (auto& c : psi) c /= nrm;
  return psi;
}

}  // namespace ecd

#include "ecd/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ecd/errors.hpp"
#include "ecd/tolerances.hpp"

namespace ecd {

Channel::Channel(std::vector<ComplexMatrix> kraus, std::size_t dim_in, std::size_t dim_out,
                 bool allow_nonincreasing)
    : kraus_(std::move(kraus)), dim_in_(dim_in), dim_out_(dim_out) {
  if (kraus_.empty()) throw std::invalid_argument("Channel: no Kraus operators");
  for (const auto& k : kraus_) {
    if (k.rows() != dim_out_ || k.cols() != dim_in_)
      throw std::invalid_argument("Channel: Kraus operator has wrong shape");
    if (!k.is_finite()) throw std::invalid_argument("Channel: non-finite Kraus entry");
  }
  const double resid = completeness_residual();
  if (resid > tol::cptp) {
    if (!allow_nonincreasing)
      throw std::invalid_argument("Channel: Kraus family is not trace preserving");
    ComplexMatrix t(dim_in_, dim_in_);
    for (const auto& k : kraus_) t += k.adjoint() * k;
    if (max_eigenvalue(HermitianMatrix::symmetrized(t)) > 1.0 + tol::cptp)
      throw std::invalid_argument("Channel: Kraus family exceeds the identity");
    trace_nonincreasing_ = true;
  }
}

double Channel::completeness_residual() const {
  ComplexMatrix t(dim_in_, dim_in_);
  for (const auto& k : kraus_) t += k.adjoint() * k;
  t -= ComplexMatrix::identity(dim_in_);
  return t.max_abs();
}

Channel Channel::identity(std::size_t dim) {
  return Channel({ComplexMatrix::identity(dim)}, dim, dim);
}

Channel Channel::unitary(const ComplexMatrix& u) {
  if (!u.is_square()) throw std::invalid_argument("Channel::unitary: non-square matrix");
  return Channel({u}, u.cols(), u.rows());
}

Channel Channel::unitary_evolution(const Hamiltonian& h, double t) {
  const std::size_t d = h.dim();
  ComplexMatrix u(d, d);
  for (std::size_t k = 0; k < d; ++k) u(k, k) = std::exp(Complex(0.0, -t * h.level(k)));
  return unitary(u);
}

Channel Channel::attenuator(double eta, std::size_t dim) {
  if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("attenuator: eta outside [0, 1]");
  if (dim == 0) throw std::invalid_argument("attenuator: dim must be >= 1");
  // K_m drops m quanta: <n-m| K_m |n> = sqrt(C(n,m)) eta^(n-m) (1-eta^2)^(m/2)
  const double loss = 1.0 - eta * eta;
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(dim);
  for (std::size_t m = 0; m < dim; ++m) {
    ComplexMatrix k(dim, dim);
    bool nonzero = false;
    for (std::size_t n = m; n < dim; ++n) {
      // binomial C(n, m) built iteratively to stay in range
      double c = 1.0;
      for (std::size_t j = 0; j < m; ++j) c *= double(n - j) / double(j + 1);
      const double amp = std::sqrt(c) * std::pow(eta, double(n - m)) *
                         std::pow(loss, 0.5 * double(m));
      if (amp != 0.0) nonzero = true;
      k(n - m, n) = amp;
    }
    if (nonzero || m == 0) kraus.push_back(std::move(k));
  }
  return Channel(std::move(kraus), dim, dim);
}

Channel Channel::constant(const DensityMatrix& target, std::size_t dim_in) {
  auto es = eig_hermitian(target.herm());
  const std::size_t d_out = target.dim();
  std::vector<ComplexMatrix> kraus;
  for (std::size_t k = 0; k < d_out; ++k) {
    const double lam = std::max(0.0, es.values[k]);
    if (lam <= 0.0) continue;
    for (std::size_t j = 0; j < dim_in; ++j) {
      ComplexMatrix op(d_out, dim_in);
      for (std::size_t i = 0; i < d_out; ++i) op(i, j) = std::sqrt(lam) * es.vectors(i, k);
      kraus.push_back(std::move(op));
    }
  }
  return Channel(std::move(kraus), dim_in, d_out);
}

Channel Channel::depolarizing(std::size_t dim) {
  return constant(DensityMatrix::maximally_mixed(dim), dim);
}

namespace {

// a^dag on the truncated level space
ComplexMatrix creation_op(std::size_t dim) {
  ComplexMatrix a(dim, dim);
  for (std::size_t n = 0; n + 1 < dim; ++n) a(n + 1, n) = std::sqrt(double(n + 1));
  return a;
}

}  // namespace

Channel Channel::displacement(Complex alpha, std::size_t dim) {
  // alpha a^dag - conj(alpha) a = i G with Hermitian G = -i(alpha a^dag - conj(alpha) a)
  ComplexMatrix adag = creation_op(dim);
  ComplexMatrix g = Complex(0.0, -1.0) * (alpha * adag - std::conj(alpha) * adag.adjoint());
  return unitary(unitary_exp(HermitianMatrix::symmetrized(g), 1.0));
}

Channel Channel::squeezer(Complex z, std::size_t dim) {
  ComplexMatrix adag = creation_op(dim);
  ComplexMatrix a = adag.adjoint();
  ComplexMatrix gen = Complex(0.5, 0.0) * (std::conj(z) * (a * a) - z * (adag * adag));
  ComplexMatrix g = Complex(0.0, -1.0) * gen;
  return unitary(unitary_exp(HermitianMatrix::symmetrized(g), 1.0));
}

DensityMatrix Channel::apply(const DensityMatrix& rho, std::size_t dim_c) const {
  ComplexMatrix out = apply_matrix(rho.mat(), dim_c);
  if (trace_nonincreasing_) return DensityMatrix::clean(HermitianMatrix::symmetrized(out));
  return DensityMatrix(HermitianMatrix::symmetrized(out));
}

ComplexMatrix Channel::apply_matrix(const ComplexMatrix& x, std::size_t dim_c) const {
  if (x.rows() != dim_in_ * dim_c || !x.is_square())
    throw std::invalid_argument("Channel::apply: dimension mismatch");
  ComplexMatrix out(dim_out_ * dim_c, dim_out_ * dim_c);
  if (dim_c == 1) {
    for (const auto& k : kraus_) out += k * x * k.adjoint();
    return out;
  }
  const ComplexMatrix idc = ComplexMatrix::identity(dim_c);
  for (const auto& k : kraus_) {
    const ComplexMatrix ext = tensor(k, idc);
    out += ext * x * ext.adjoint();
  }
  return out;
}

HermitianMatrix Channel::adjoint_apply(const HermitianMatrix& m) const {
  if (m.dim() != dim_out_)
    throw std::invalid_argument("Channel::adjoint_apply: dimension mismatch");
  ComplexMatrix out(dim_in_, dim_in_);
  for (const auto& k : kraus_) out += k.adjoint() * m.mat() * k;
  return HermitianMatrix::symmetrized(out);
}

Channel Channel::compose_after(const Channel& inner) const {
  if (inner.dim_out_ != dim_in_)
    throw std::invalid_argument("Channel::compose_after: dimension mismatch");
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(kraus_.size() * inner.kraus_.size());
  for (const auto& k : kraus_)
    for (const auto& l : inner.kraus_) kraus.push_back(k * l);
  return Channel(std::move(kraus), inner.dim_in_, dim_out_,
                 trace_nonincreasing_ || inner.trace_nonincreasing_);
}

Channel Channel::tensor_with(const Channel& other) const {
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(kraus_.size() * other.kraus_.size());
  for (const auto& k : kraus_)
    for (const auto& l : other.kraus_) kraus.push_back(tensor(k, l));
  return Channel(std::move(kraus), dim_in_ * other.dim_in_, dim_out_ * other.dim_out_,
                 trace_nonincreasing_ || other.trace_nonincreasing_);
}

namespace {

// Accumulate sum_m |phi_m><phi_m| with |phi_m> = (K_m (x) 1)|Phi>, i.e. the
// Choi contribution of one Kraus family, with sign.
void accumulate_choi(ComplexMatrix& j, const std::vector<ComplexMatrix>& kraus,
                     std::size_t din, std::size_t dout, double sign) {
  std::vector<Complex> phi(dout * din);
  for (const auto& k : kraus) {
    // phi[(b, a)] = K[b, a]
    for (std::size_t b = 0; b < dout; ++b)
      for (std::size_t a = 0; a < din; ++a) phi[b * din + a] = k(b, a);
    for (std::size_t r = 0; r < phi.size(); ++r) {
      if (phi[r] == Complex(0.0, 0.0)) continue;
      const Complex pr = sign * phi[r];
      for (std::size_t c = 0; c < phi.size(); ++c) j(r, c) += pr * std::conj(phi[c]);
    }
  }
}

}  // namespace

HermitianMatrix choi(const Channel& n) {
  const std::size_t din = n.dim_in(), dout = n.dim_out();
  ComplexMatrix j(dout * din, dout * din);
  accumulate_choi(j, n.kraus(), din, dout, 1.0);
  return HermitianMatrix::symmetrized(j);
}

ComplexMatrix apply_from_choi(const HermitianMatrix& j, const ComplexMatrix& rho,
                              std::size_t dim_in, std::size_t dim_out) {
  if (rho.rows() != dim_in || !rho.is_square())
    throw std::invalid_argument("apply_from_choi: dimension mismatch");
  // N(rho)[b,b'] = sum_{k,l} rho[k,l] J[(b,k),(b',l)], i.e. tr_in[(1 (x) rho^T) J]
  ComplexMatrix out(dim_out, dim_out);
  for (std::size_t b = 0; b < dim_out; ++b)
    for (std::size_t bp = 0; bp < dim_out; ++bp) {
      Complex s = 0.0;
      for (std::size_t a = 0; a < dim_in; ++a)
        for (std::size_t ap = 0; ap < dim_in; ++ap)
          s += j(b * dim_in + a, bp * dim_in + ap) * rho(a, ap);
      out(b, bp) = s;
    }
  return out;
}

HermitianPreservingMap HermitianPreservingMap::difference(const Channel& n1,
                                                          const Channel& n2) {
  if (n1.dim_in() != n2.dim_in() || n1.dim_out() != n2.dim_out())
    throw std::invalid_argument("HermitianPreservingMap: dimension mismatch");
  HermitianPreservingMap m;
  m.plus_ = n1.kraus();
  m.minus_ = n2.kraus();
  m.dim_in_ = n1.dim_in();
  m.dim_out_ = n1.dim_out();
  return m;
}

HermitianPreservingMap HermitianPreservingMap::weighted(double c1, const Channel& n1,
                                                        double c2, const Channel& n2) {
  if (n1.dim_in() != n2.dim_in() || n1.dim_out() != n2.dim_out())
    throw std::invalid_argument("HermitianPreservingMap: dimension mismatch");
  HermitianPreservingMap m;
  m.dim_in_ = n1.dim_in();
  m.dim_out_ = n1.dim_out();
  auto add = [&m](double c, const std::vector<ComplexMatrix>& kraus) {
    if (c == 0.0) return;
    const double s = std::sqrt(std::abs(c));
    for (const auto& k : kraus) {
      ComplexMatrix scaled = k;
      scaled *= Complex(s, 0.0);
      (c > 0.0 ? m.plus_ : m.minus_).push_back(std::move(scaled));
    }
  };
  add(c1, n1.kraus());
  add(c2, n2.kraus());
  return m;
}

HermitianPreservingMap HermitianPreservingMap::from_channel(const Channel& n) {
  HermitianPreservingMap m;
  m.plus_ = n.kraus();
  m.dim_in_ = n.dim_in();
  m.dim_out_ = n.dim_out();
  return m;
}

HermitianPreservingMap HermitianPreservingMap::from_parts(std::vector<ComplexMatrix> plus,
                                                          std::vector<ComplexMatrix> minus,
                                                          std::size_t dim_in,
                                                          std::size_t dim_out) {
  HermitianPreservingMap m;
  for (const auto& k : plus)
    if (k.rows() != dim_out || k.cols() != dim_in)
      throw std::invalid_argument("HermitianPreservingMap: Kraus shape mismatch");
  for (const auto& k : minus)
    if (k.rows() != dim_out || k.cols() != dim_in)
      throw std::invalid_argument("HermitianPreservingMap: Kraus shape mismatch");
  m.plus_ = std::move(plus);
  m.minus_ = std::move(minus);
  m.dim_in_ = dim_in;
  m.dim_out_ = dim_out;
  return m;
}

HermitianPreservingMap HermitianPreservingMap::from_choi(const HermitianMatrix& j,
                                                         std::size_t dim_in,
                                                         std::size_t dim_out) {
  if (j.dim() != dim_in * dim_out)
    throw std::invalid_argument("HermitianPreservingMap: Choi dimension mismatch");
  HermitianPreservingMap m;
  m.direct_choi_ = j;
  m.dim_in_ = dim_in;
  m.dim_out_ = dim_out;
  return m;
}

HermitianPreservingMap HermitianPreservingMap::zero(std::size_t dim_in, std::size_t dim_out) {
  HermitianPreservingMap m;
  m.dim_in_ = dim_in;
  m.dim_out_ = dim_out;
  return m;
}

HermitianPreservingMap HermitianPreservingMap::scaled(double c) const {
  if (!has_kraus()) {
    ComplexMatrix j = direct_choi_->mat();
    j *= Complex(c, 0.0);
    return from_choi(HermitianMatrix::symmetrized(j), dim_in_, dim_out_);
  }
  HermitianPreservingMap m;
  m.dim_in_ = dim_in_;
  m.dim_out_ = dim_out_;
  const double s = std::sqrt(std::abs(c));
  auto scale_into = [s](const std::vector<ComplexMatrix>& src,
                        std::vector<ComplexMatrix>& dst) {
    for (const auto& k : src) {
      ComplexMatrix scaled = k;
      scaled *= Complex(s, 0.0);
      dst.push_back(std::move(scaled));
    }
  };
  scale_into(plus_, c >= 0.0 ? m.plus_ : m.minus_);
  scale_into(minus_, c >= 0.0 ? m.minus_ : m.plus_);
  return m;
}

HermitianPreservingMap HermitianPreservingMap::plus(const HermitianPreservingMap& other) const {
  if (dim_in_ != other.dim_in_ || dim_out_ != other.dim_out_)
    throw std::invalid_argument("HermitianPreservingMap::plus: dimension mismatch");
  if (!has_kraus() || !other.has_kraus()) {
    ComplexMatrix j = choi().mat() + other.choi().mat();
    return from_choi(HermitianMatrix::symmetrized(j), dim_in_, dim_out_);
  }
  HermitianPreservingMap m = *this;
  m.plus_.insert(m.plus_.end(), other.plus_.begin(), other.plus_.end());
  m.minus_.insert(m.minus_.end(), other.minus_.begin(), other.minus_.end());
  return m;
}

HermitianPreservingMap HermitianPreservingMap::tensor_with_channel(const Channel& t) const {
  if (!has_kraus())
    throw std::invalid_argument("tensor_with_channel: needs a Kraus representation");
  HermitianPreservingMap m;
  m.dim_in_ = dim_in_ * t.dim_in();
  m.dim_out_ = dim_out_ * t.dim_out();
  for (const auto& k : plus_)
    for (const auto& l : t.kraus()) m.plus_.push_back(tensor(k, l));
  for (const auto& k : minus_)
    for (const auto& l : t.kraus()) m.minus_.push_back(tensor(k, l));
  return m;
}

HermitianPreservingMap HermitianPreservingMap::tensor_with_map(
    const HermitianPreservingMap& other) const {
  if (!has_kraus() || !other.has_kraus())
    throw std::invalid_argument("tensor_with_map: needs Kraus representations");
  HermitianPreservingMap m;
  m.dim_in_ = dim_in_ * other.dim_in_;
  m.dim_out_ = dim_out_ * other.dim_out_;
  // (P1 - M1) (x) (P2 - M2) = (P1 x P2 + M1 x M2) - (P1 x M2 + M1 x P2)
  for (const auto& k : plus_)
    for (const auto& l : other.plus_) m.plus_.push_back(tensor(k, l));
  for (const auto& k : minus_)
    for (const auto& l : other.minus_) m.plus_.push_back(tensor(k, l));
  for (const auto& k : plus_)
    for (const auto& l : other.minus_) m.minus_.push_back(tensor(k, l));
  for (const auto& k : minus_)
    for (const auto& l : other.plus_) m.minus_.push_back(tensor(k, l));
  return m;
}

HermitianPreservingMap HermitianPreservingMap::permute_input(
    const std::vector<std::size_t>& perm) const {
  if (perm.size() != dim_in_)
    throw std::invalid_argument("permute_input: permutation size mismatch");
  if (!has_kraus()) throw std::invalid_argument("permute_input: needs a Kraus representation");
  auto permute = [&perm](const ComplexMatrix& k) {
    ComplexMatrix out(k.rows(), k.cols());
    for (std::size_t i = 0; i < k.rows(); ++i)
      for (std::size_t j = 0; j < k.cols(); ++j) out(i, j) = k(i, perm[j]);
    return out;
  };
  HermitianPreservingMap m;
  m.dim_in_ = dim_in_;
  m.dim_out_ = dim_out_;
  for (const auto& k : plus_) m.plus_.push_back(permute(k));
  for (const auto& k : minus_) m.minus_.push_back(permute(k));
  return m;
}

HermitianMatrix HermitianPreservingMap::choi() const {
  if (direct_choi_) return *direct_choi_;
  const std::size_t n = dim_out_ * dim_in_;
  if (n > 0 && n > kMaxDenseEntries / n)
    throw CapacityError("choi: dense Choi matrix exceeds storage budget");
  ComplexMatrix j(n, n);
  accumulate_choi(j, plus_, dim_in_, dim_out_, 1.0);
  accumulate_choi(j, minus_, dim_in_, dim_out_, -1.0);
  return HermitianMatrix::symmetrized(j);
}

ComplexMatrix HermitianPreservingMap::apply_matrix(const ComplexMatrix& x,
                                                   std::size_t dim_c) const {
  if (x.rows() != dim_in_ * dim_c || !x.is_square())
    throw std::invalid_argument("HermitianPreservingMap::apply: dimension mismatch");
  if (!has_kraus()) {
    if (dim_c != 1)
      throw std::invalid_argument("HermitianPreservingMap::apply: Choi form supports dim_c == 1");
    return apply_from_choi(*direct_choi_, x, dim_in_, dim_out_);
  }
  ComplexMatrix out(dim_out_ * dim_c, dim_out_ * dim_c);
  const ComplexMatrix idc = ComplexMatrix::identity(dim_c);
  for (const auto& k : plus_) {
    const ComplexMatrix ext = dim_c == 1 ? k : tensor(k, idc);
    out += ext * x * ext.adjoint();
  }
  for (const auto& k : minus_) {
    const ComplexMatrix ext = dim_c == 1 ? k : tensor(k, idc);
    out -= ext * x * ext.adjoint();
  }
  return out;
}

std::optional<EnergyLimit> verify_energy_limited(const Channel& n, const Hamiltonian& h_in,
                                                 const Hamiltonian& h_out) {
  if (n.dim_in() != h_in.dim() || n.dim_out() != h_out.dim())
    throw std::invalid_argument("verify_energy_limited: dimension mismatch");
  const HermitianMatrix heis = n.adjoint_apply(h_out.matrix());
  const double scale = std::max(1.0, heis.mat().max_abs());
  const double slack = 1e-9 * scale;

  // Candidate gains: diagonal ratio, unit, spectral ratio, plus any
  // caller-supplied hint.
  std::vector<double> alphas;
  double diag_ratio = 0.0;
  for (std::size_t a = 0; a < h_in.dim(); ++a)
    if (h_in.level(a) > 0.0)
      diag_ratio = std::max(diag_ratio, heis(a, a).real() / h_in.level(a));
  alphas.push_back(diag_ratio);
  if (n.energy_limit()) alphas.push_back(n.energy_limit()->alpha);
  alphas.push_back(1.0);
  const double lam_max = std::max(0.0, max_eigenvalue(heis));
  if (h_in.max_level() > 0.0) alphas.push_back(lam_max / h_in.max_level());
  alphas.push_back(2.0 * diag_ratio);
  std::sort(alphas.begin(), alphas.end());
  alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());

  std::vector<double> offsets;
  offsets.push_back(0.0);
  for (double e0 = 1e-10; e0 <= lam_max + 1.0; e0 *= 4.0) offsets.push_back(e0);

  for (double alpha : alphas) {
    if (alpha < 0.0) continue;
    for (double e0 : offsets) {
      std::vector<double> shifted(h_in.dim());
      for (std::size_t a = 0; a < h_in.dim(); ++a) shifted[a] = alpha * h_in.level(a) + e0;
      ComplexMatrix m = ComplexMatrix::diagonal(shifted) - heis.mat();
      if (min_eigenvalue(HermitianMatrix::symmetrized(m)) >= -slack)
        return EnergyLimit{alpha, e0};
    }
  }
  return std::nullopt;
}

}  // namespace ecd

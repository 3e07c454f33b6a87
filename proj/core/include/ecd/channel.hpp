#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ecd/hamiltonian.hpp"
#include "ecd/matrix.hpp"
#include "ecd/state.hpp"

namespace ecd {

struct EnergyLimit {
  double alpha = 0.0;  // input-energy gain
  double e0 = 0.0;     // additive offset
};

// Completely positive map in Kraus form, dim_in -> dim_out.  Channels are
// trace preserving; set allow_nonincreasing for truncated maps with
// sum K^dag K strictly below the identity.
class Channel {
 public:
  Channel() = default;
  Channel(std::vector<ComplexMatrix> kraus, std::size_t dim_in, std::size_t dim_out,
          bool allow_nonincreasing = false);

  static Channel identity(std::size_t dim);
  static Channel unitary(const ComplexMatrix& u);
  // Single-Kraus channel exp(-i t H) for a diagonal Hamiltonian.
  static Channel unitary_evolution(const Hamiltonian& h, double t);
  // Quantum-limited attenuator with amplitude parameter eta on a truncated
  // level space.  Photon-number non-increasing, so exactly trace preserving
  // on the truncation.
  static Channel attenuator(double eta, std::size_t dim);
  // rho -> target * tr(rho)
  static Channel constant(const DensityMatrix& target, std::size_t dim_in);
  static Channel depolarizing(std::size_t dim);
  // Truncated displacement unitary exp(alpha a^dag - conj(alpha) a); exactly
  // unitary for the truncated generator, which differs from the untruncated
  // displacement near the top levels.
  static Channel displacement(Complex alpha, std::size_t dim);
  // Truncated one-mode squeezer exp((conj(z) a^2 - z a^dag^2)/2).
  static Channel squeezer(Complex z, std::size_t dim);

  std::size_t dim_in() const { return dim_in_; }
  std::size_t dim_out() const { return dim_out_; }
  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }
  bool trace_nonincreasing() const { return trace_nonincreasing_; }
  // max-abs residual of sum K^dag K against the identity
  double completeness_residual() const;

  const std::optional<EnergyLimit>& energy_limit() const { return limit_; }
  void set_energy_limit(EnergyLimit l) { limit_ = l; }

  // N(rho) for rho on the input space, or (N (x) id_C)(rho) when dim_c > 1.
  DensityMatrix apply(const DensityMatrix& rho, std::size_t dim_c = 1) const;
  // Linear action on an arbitrary matrix (same extension convention).
  ComplexMatrix apply_matrix(const ComplexMatrix& x, std::size_t dim_c = 1) const;
  // Heisenberg-picture image sum K^dag M K of an observable on the output.
  HermitianMatrix adjoint_apply(const HermitianMatrix& m) const;

  Channel compose_after(const Channel& inner) const;  // this ∘ inner
  Channel tensor_with(const Channel& other) const;

 private:
  std::vector<ComplexMatrix> kraus_;
  std::size_t dim_in_ = 0, dim_out_ = 0;
  bool trace_nonincreasing_ = false;
  std::optional<EnergyLimit> limit_;
};

// Choi matrix J = sum_{k,l} N(|k><l|) (x) |k><l| on the (out (x) in) space.
HermitianMatrix choi(const Channel& n);

// Channel action recovered from a Choi matrix: N(rho) = tr_in[(1 (x) rho^T) J].
ComplexMatrix apply_from_choi(const HermitianMatrix& j, const ComplexMatrix& rho,
                              std::size_t dim_in, std::size_t dim_out);

// Hermitian-preserving map held as a difference of completely positive parts
// (each a Kraus family), or as a direct Choi matrix.
class HermitianPreservingMap {
 public:
  HermitianPreservingMap() = default;

  static HermitianPreservingMap difference(const Channel& n1, const Channel& n2);
  // c1*N1 + c2*N2 with real coefficients.
  static HermitianPreservingMap weighted(double c1, const Channel& n1, double c2,
                                         const Channel& n2);
  static HermitianPreservingMap from_channel(const Channel& n);
  static HermitianPreservingMap from_parts(std::vector<ComplexMatrix> plus,
                                           std::vector<ComplexMatrix> minus,
                                           std::size_t dim_in, std::size_t dim_out);
  static HermitianPreservingMap from_choi(const HermitianMatrix& j, std::size_t dim_in,
                                          std::size_t dim_out);
  static HermitianPreservingMap zero(std::size_t dim_in, std::size_t dim_out);

  HermitianPreservingMap scaled(double c) const;
  HermitianPreservingMap plus(const HermitianPreservingMap& other) const;
  // (x) with a cp map acting on a second input factor.
  HermitianPreservingMap tensor_with_channel(const Channel& t) const;
  HermitianPreservingMap tensor_with_map(const HermitianPreservingMap& other) const;
  // Relabel the input basis: Delta'(X) = Delta(P X P^dag) for the permutation
  // sending new index k to old index perm[k].
  HermitianPreservingMap permute_input(const std::vector<std::size_t>& perm) const;

  std::size_t dim_in() const { return dim_in_; }
  std::size_t dim_out() const { return dim_out_; }
  bool has_kraus() const { return !direct_choi_.has_value(); }
  const std::vector<ComplexMatrix>& plus_kraus() const { return plus_; }
  const std::vector<ComplexMatrix>& minus_kraus() const { return minus_; }
  const std::optional<HermitianMatrix>& direct_choi() const { return direct_choi_; }

  HermitianMatrix choi() const;
  // (Delta (x) id_C)(x) for x on in (x) C.
  ComplexMatrix apply_matrix(const ComplexMatrix& x, std::size_t dim_c = 1) const;

 private:
  std::vector<ComplexMatrix> plus_, minus_;
  std::optional<HermitianMatrix> direct_choi_;
  std::size_t dim_in_ = 0, dim_out_ = 0;
};

// Search for (alpha, e0) certifying the operator inequality
// sum K^dag H_B K <= alpha H_A + e0 (minimum-eigenvalue check over a small
// candidate scan).  Returns nullopt when no scanned pair certifies.
std::optional<EnergyLimit> verify_energy_limited(const Channel& n, const Hamiltonian& h_in,
                                                 const Hamiltonian& h_out);

}  // namespace ecd

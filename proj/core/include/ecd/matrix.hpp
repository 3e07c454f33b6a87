#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace ecd {

using Complex = std::complex<double>;

// Dense complex matrix, row-major.  Subsystem order in tensor products is
// fixed left-to-right: index of |i>|j> on A (x) B is i*dim_B + j.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);  // zero-initialised

  static ComplexMatrix identity(std::size_t n);
  // Validates that every entry is finite.
  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);
  static ComplexMatrix from_data(std::size_t rows, std::size_t cols, std::vector<Complex> data);
  static ComplexMatrix diagonal(const std::vector<double>& d);
  static ComplexMatrix column(const std::vector<Complex>& v);
  // |v><w|
  static ComplexMatrix outer(const std::vector<Complex>& v, const std::vector<Complex>& w);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }
  bool is_square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<Complex>& data() const { return data_; }
  std::vector<Complex>& data() { return data_; }

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(Complex s);

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;

  Complex trace() const;
  double frobenius_norm() const;
  double max_abs() const;
  bool is_finite() const;
  // max_ij |A_ij - conj(A_ji)|
  double hermiticity_residual() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix a);
std::vector<Complex> operator*(const ComplexMatrix& a, const std::vector<Complex>& v);

// Hermitian matrix.  Construction symmetrises the input as (A + A^dag)/2 and
// rejects inputs whose Hermiticity residual exceeds tol::hermitian (relative).
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const ComplexMatrix& a);

  // Symmetrise without the residual check; for internal numeric chains whose
  // asymmetry is known to be at round-off level.
  static HermitianMatrix symmetrized(const ComplexMatrix& a);
  static HermitianMatrix diagonal(const std::vector<double>& d);
  static HermitianMatrix identity(std::size_t n);
  static HermitianMatrix zero(std::size_t n);

  std::size_t dim() const { return mat_.rows(); }
  const ComplexMatrix& mat() const { return mat_; }
  Complex operator()(std::size_t i, std::size_t j) const { return mat_(i, j); }
  double real_trace() const { return mat_.trace().real(); }

 private:
  ComplexMatrix mat_;
};

struct EigSystem {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // unitary; column k is the eigenvector of values[k]
};

// Eigendecomposition of a Hermitian matrix via Householder tridiagonalisation
// followed by implicit-shift QL.  Throws SolverFailure on non-convergence.
EigSystem eig_hermitian(const HermitianMatrix& a);

// ||A V - V diag(lambda)||_F / max(1, ||A||_F)
double eig_residual(const HermitianMatrix& a, const EigSystem& es);

// Sum of singular values.  Hermitian inputs take the fast path (sum |eig|);
// general square inputs go through the doubled Hermitian embedding.
double trace_norm(const ComplexMatrix& a);

// Kronecker product; dimensions multiply.  Throws CapacityError when the
// result would exceed the dense-storage budget.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
std::vector<Complex> tensor(const std::vector<Complex>& a, const std::vector<Complex>& b);

// Partial trace of a matrix on a bipartite space with dims (dim_first,
// dim_second); keep = 0 retains the first factor, keep = 1 the second.
ComplexMatrix partial_trace(const ComplexMatrix& a, std::size_t dim_first,
                            std::size_t dim_second, std::size_t keep);

// Nearest positive semidefinite matrix in Frobenius norm (eigenvalue clipping).
HermitianMatrix psd_project(const HermitianMatrix& a);

double min_eigenvalue(const HermitianMatrix& a);
double max_eigenvalue(const HermitianMatrix& a);

// V f(diag) V^dag for a scalar function of the eigenvalues.
ComplexMatrix hermitian_function(const HermitianMatrix& a, double (*f)(double));
// exp(i s A) for Hermitian A; exactly unitary up to eig accuracy.
ComplexMatrix unitary_exp(const HermitianMatrix& a, double s);

// Dense-storage budget, in matrix entries.
inline constexpr std::size_t kMaxDenseEntries = std::size_t(1) << 23;

}  // namespace ecd

#include "ecd/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ecd/errors.hpp"
#include "ecd/tolerances.hpp"

namespace ecd {

namespace {

void check_finite(const ComplexMatrix& m, const char* what) {
  if (!m.is_finite()) throw std::invalid_argument(std::string(what) + ": non-finite entry");
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols) {
  if (rows > 0 && cols > kMaxDenseEntries / rows)
    throw CapacityError("matrix exceeds dense-storage budget");
  data_.assign(rows * cols, Complex(0.0, 0.0));
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::from_rows(
    std::initializer_list<std::initializer_list<Complex>> rows) {
  std::size_t r = rows.size();
  std::size_t c = r ? rows.begin()->size() : 0;
  ComplexMatrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw std::invalid_argument("from_rows: ragged rows");
    std::size_t j = 0;
    for (const auto& v : row) m(i, j++) = v;
    ++i;
  }
  check_finite(m, "from_rows");
  return m;
}

ComplexMatrix ComplexMatrix::from_data(std::size_t rows, std::size_t cols,
                                       std::vector<Complex> data) {
  if (data.size() != rows * cols) throw std::invalid_argument("from_data: size mismatch");
  ComplexMatrix m(rows, cols);
  m.data_ = std::move(data);
  check_finite(m, "from_data");
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<double>& d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  check_finite(m, "diagonal");
  return m;
}

ComplexMatrix ComplexMatrix::column(const std::vector<Complex>& v) {
  ComplexMatrix m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
  check_finite(m, "column");
  return m;
}

ComplexMatrix ComplexMatrix::outer(const std::vector<Complex>& v,
                                   const std::vector<Complex>& w) {
  ComplexMatrix m(v.size(), w.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < w.size(); ++j) m(i, j) = v[i] * std::conj(w[j]);
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw std::invalid_argument("matrix addition: dimension mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    throw std::invalid_argument("matrix subtraction: dimension mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (auto& v : data_) v *= s;
  return *this;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

ComplexMatrix ComplexMatrix::conjugate() const {
  ComplexMatrix m(rows_, cols_);
  for (std::size_t k = 0; k < data_.size(); ++k) m.data_[k] = std::conj(data_[k]);
  return m;
}

Complex ComplexMatrix::trace() const {
  if (!is_square()) throw std::invalid_argument("trace: non-square matrix");
  Complex t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& v : data_) s += std::norm(v);
  return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& v : data_) m = std::max(m, std::abs(v));
  return m;
}

bool ComplexMatrix::is_finite() const {
  for (const auto& v : data_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

double ComplexMatrix::hermiticity_residual() const {
  if (!is_square()) return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i; j < cols_; ++j)
      m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return m;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: dimension mismatch");
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

std::vector<Complex> operator*(const ComplexMatrix& a, const std::vector<Complex>& v) {
  if (a.cols() != v.size()) throw std::invalid_argument("matvec: dimension mismatch");
  std::vector<Complex> r(a.rows(), Complex(0.0, 0.0));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& a) {
  if (!a.is_square()) throw std::invalid_argument("HermitianMatrix: non-square input");
  check_finite(a, "HermitianMatrix");
  const double scale = std::max(1.0, a.max_abs());
  if (a.hermiticity_residual() > tol::hermitian * scale)
    throw std::invalid_argument("HermitianMatrix: Hermiticity residual above tolerance");
  *this = symmetrized(a);
}

HermitianMatrix HermitianMatrix::symmetrized(const ComplexMatrix& a) {
  if (!a.is_square()) throw std::invalid_argument("symmetrized: non-square input");
  HermitianMatrix h;
  const std::size_t n = a.rows();
  h.mat_ = ComplexMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    h.mat_(i, i) = Complex(a(i, i).real(), 0.0);
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex v = 0.5 * (a(i, j) + std::conj(a(j, i)));
      h.mat_(i, j) = v;
      h.mat_(j, i) = std::conj(v);
    }
  }
  return h;
}

HermitianMatrix HermitianMatrix::diagonal(const std::vector<double>& d) {
  HermitianMatrix h;
  h.mat_ = ComplexMatrix::diagonal(d);
  return h;
}

HermitianMatrix HermitianMatrix::identity(std::size_t n) {
  HermitianMatrix h;
  h.mat_ = ComplexMatrix::identity(n);
  return h;
}

HermitianMatrix HermitianMatrix::zero(std::size_t n) {
  HermitianMatrix h;
  h.mat_ = ComplexMatrix(n, n);
  return h;
}

//======================================================================
// Eigendecomposition: Householder tridiagonalisation + implicit QL
//======================================================================

namespace {

// Reduce Hermitian a (overwritten) to real symmetric tridiagonal (d, e),
// accumulating the unitary transform into q (right-multiplied).
void tridiagonalize(ComplexMatrix& a, ComplexMatrix& q, std::vector<double>& d,
                    std::vector<double>& e) {
  const std::size_t n = a.rows();
  d.assign(n, 0.0);
  e.assign(n > 0 ? n - 1 : 0, 0.0);
  std::vector<Complex> v(n), p(n), w(n);
  // columns at round-off level relative to the matrix are already eliminated;
  // reflecting on them would divide by a denormal square norm
  const double column_floor = 1e-150 * std::max(1e-150, a.max_abs());

  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t m = n - k - 1;  // length of the column below the diagonal
    double sigma2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) sigma2 += std::norm(a(k + 1 + i, k));
    const double sigma = std::sqrt(sigma2);
    if (sigma <= column_floor) continue;

    const Complex alpha = a(k + 1, k);
    const double aa = std::abs(alpha);
    const Complex phase = (aa > 0.0) ? alpha / aa : Complex(1.0, 0.0);
    // v = x + phase*sigma*e1 reflects x onto -phase*sigma*e1
    for (std::size_t i = 0; i < m; ++i) v[i] = a(k + 1 + i, k);
    v[0] += phase * sigma;
    const double vnorm2 = 2.0 * sigma * (sigma + aa);
    if (vnorm2 == 0.0) continue;
    const double beta = 2.0 / vnorm2;

    // p = beta * A22 * v over the trailing block
    for (std::size_t i = 0; i < m; ++i) {
      Complex s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += a(k + 1 + i, k + 1 + j) * v[j];
      p[i] = beta * s;
    }
    Complex vp = 0.0;
    for (std::size_t i = 0; i < m; ++i) vp += std::conj(v[i]) * p[i];
    const double kk = 0.5 * beta * vp.real();
    for (std::size_t i = 0; i < m; ++i) w[i] = p[i] - kk * v[i];
    // A22 <- A22 - v w^dag - w v^dag
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        a(k + 1 + i, k + 1 + j) -= v[i] * std::conj(w[j]) + w[i] * std::conj(v[j]);
      }
    }
    // Eliminated column
    a(k + 1, k) = -phase * sigma;
    a(k, k + 1) = std::conj(a(k + 1, k));
    for (std::size_t i = 1; i < m; ++i) {
      a(k + 1 + i, k) = 0.0;
      a(k, k + 1 + i) = 0.0;
    }
    // Q <- Q (I - beta v v^dag), acting on columns k+1..n-1
    for (std::size_t r = 0; r < n; ++r) {
      Complex s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += q(r, k + 1 + j) * v[j];
      s *= beta;
      for (std::size_t j = 0; j < m; ++j) q(r, k + 1 + j) -= s * std::conj(v[j]);
    }
  }

  // Rephase the (complex) sub-diagonal to be real non-negative.
  Complex ph(1.0, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Complex ei = a(i + 1, i);
    const double m = std::abs(ei);
    Complex ph_next = ph;
    if (m > 0.0) ph_next = ph * (ei / m);
    e[i] = m;
    if (ph_next != Complex(1.0, 0.0)) {
      for (std::size_t r = 0; r < n; ++r) q(r, i + 1) *= ph_next;
    }
    ph = ph_next;
  }
  for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i).real();
}

// Implicit-shift QL on the real symmetric tridiagonal (d, e), rotations
// accumulated into the complex columns of q.  Returns false on
// non-convergence.
bool tql_implicit(std::vector<double>& d, std::vector<double>& e, ComplexMatrix& q) {
  const std::size_t n = d.size();
  if (n <= 1) return true;
  e.push_back(0.0);  // sentinel
  const double eps = std::numeric_limits<double>::epsilon();
  const int max_iter = 64;
  double scale = 0.0;
  for (double x : d) scale = std::max(scale, std::abs(x));
  for (double x : e) scale = std::max(scale, std::abs(x));
  // Deflate sub-diagonal entries at round-off level relative to the matrix
  // scale: they perturb eigenvalues by at most that amount (Weyl), and
  // keeping them makes near-zero eigenvalue clusters grind without progress.
  const double floor = 0.5 * eps * scale + std::numeric_limits<double>::min();

  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd + floor) break;
      }
      if (m != l) {
        if (iter++ == max_iter) return false;
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (std::size_t ip1 = m; ip1-- > l;) {
          const std::size_t i = ip1;  // i runs m-1 .. l
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (std::size_t row = 0; row < q.rows(); ++row) {
            const Complex tmp = q(row, i + 1);
            q(row, i + 1) = s * q(row, i) + c * tmp;
            q(row, i) = c * q(row, i) - s * tmp;
          }
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  return true;
}

}  // namespace

EigSystem eig_hermitian(const HermitianMatrix& h) {
  const std::size_t n = h.dim();
  EigSystem es;
  if (n == 0) {
    es.vectors = ComplexMatrix(0, 0);
    return es;
  }
  if (!h.mat().is_finite())
    throw std::invalid_argument("eig_hermitian: non-finite input");
  ComplexMatrix a = h.mat();
  ComplexMatrix q = ComplexMatrix::identity(n);
  std::vector<double> d, e;
  tridiagonalize(a, q, d, e);
  if (!tql_implicit(d, e, q)) {
    double resid = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!std::isfinite(e[i])) finite = false;
      resid = std::max(resid, std::abs(e[i]));
    }
    for (std::size_t i = 0; i < n; ++i)
      if (!std::isfinite(d[i])) finite = false;
    throw SolverFailure("eig_hermitian: QL iteration failed to converge (dim " +
                            std::to_string(n) + ", scale " +
                            std::to_string(h.mat().max_abs()) +
                            (finite ? ")" : ", non-finite tridiagonal)"),
                        resid);
  }

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&d](std::size_t i, std::size_t j) { return d[i] < d[j]; });
  es.values.resize(n);
  es.vectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    es.values[k] = d[idx[k]];
    for (std::size_t r = 0; r < n; ++r) es.vectors(r, k) = q(r, idx[k]);
  }
  return es;
}

double eig_residual(const HermitianMatrix& a, const EigSystem& es) {
  const std::size_t n = a.dim();
  ComplexMatrix av = a.mat() * es.vectors;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) av(i, j) -= es.vectors(i, j) * es.values[j];
  return av.frobenius_norm() / std::max(1.0, a.mat().frobenius_norm());
}

double trace_norm(const ComplexMatrix& a) {
  if (!a.is_square()) throw std::invalid_argument("trace_norm: non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return 0.0;
  const double scale = std::max(1.0, a.max_abs());
  if (a.hermiticity_residual() <= tol::hermitian * scale) {
    auto es = eig_hermitian(HermitianMatrix::symmetrized(a));
    double s = 0.0;
    for (double v : es.values) s += std::abs(v);
    return s;
  }
  // Hermitian embedding [[0, A], [A^dag, 0]]; eigenvalues come in +/- sigma pairs.
  ComplexMatrix big(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      big(i, n + j) = a(i, j);
      big(n + j, i) = std::conj(a(i, j));
    }
  }
  auto es = eig_hermitian(HermitianMatrix::symmetrized(big));
  double s = 0.0;
  for (double v : es.values) s += std::abs(v);
  return 0.5 * s;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() > 0 && b.rows() > 0) {
    if (a.rows() * b.rows() > kMaxDenseEntries / std::max<std::size_t>(1, a.cols() * b.cols()))
      throw CapacityError("tensor: result exceeds dense-storage budget");
  }
  ComplexMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex(0.0, 0.0)) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          c(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return c;
}

std::vector<Complex> tensor(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  std::vector<Complex> c(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i * b.size() + j] = a[i] * b[j];
  return c;
}

ComplexMatrix partial_trace(const ComplexMatrix& a, std::size_t dim_first,
                            std::size_t dim_second, std::size_t keep) {
  if (!a.is_square() || a.rows() != dim_first * dim_second)
    throw std::invalid_argument("partial_trace: dimension mismatch");
  if (keep > 1) throw std::invalid_argument("partial_trace: keep must be 0 or 1");
  if (keep == 0) {
    ComplexMatrix r(dim_first, dim_first);
    for (std::size_t i = 0; i < dim_first; ++i)
      for (std::size_t j = 0; j < dim_first; ++j) {
        Complex s = 0.0;
        for (std::size_t b = 0; b < dim_second; ++b)
          s += a(i * dim_second + b, j * dim_second + b);
        r(i, j) = s;
      }
    return r;
  }
  ComplexMatrix r(dim_second, dim_second);
  for (std::size_t i = 0; i < dim_second; ++i)
    for (std::size_t j = 0; j < dim_second; ++j) {
      Complex s = 0.0;
      for (std::size_t b = 0; b < dim_first; ++b)
        s += a(b * dim_second + i, b * dim_second + j);
      r(i, j) = s;
    }
  return r;
}

HermitianMatrix psd_project(const HermitianMatrix& a) {
  auto es = eig_hermitian(a);
  const std::size_t n = a.dim();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lam = es.values[k];
    if (lam <= 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vik = es.vectors(i, k) * lam;
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += vik * std::conj(es.vectors(j, k));
    }
  }
  return HermitianMatrix::symmetrized(out);
}

double min_eigenvalue(const HermitianMatrix& a) {
  if (a.dim() == 0) return 0.0;
  return eig_hermitian(a).values.front();
}

double max_eigenvalue(const HermitianMatrix& a) {
  if (a.dim() == 0) return 0.0;
  return eig_hermitian(a).values.back();
}

ComplexMatrix hermitian_function(const HermitianMatrix& a, double (*f)(double)) {
  auto es = eig_hermitian(a);
  const std::size_t n = a.dim();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = f(es.values[k]);
    if (w == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vik = es.vectors(i, k) * w;
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += vik * std::conj(es.vectors(j, k));
    }
  }
  return out;
}

ComplexMatrix unitary_exp(const HermitianMatrix& a, double s) {
  auto es = eig_hermitian(a);
  const std::size_t n = a.dim();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex w = std::exp(Complex(0.0, s * es.values[k]));
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vik = es.vectors(i, k) * w;
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += vik * std::conj(es.vectors(j, k));
    }
  }
  return out;
}

}  // namespace ecd

#pragma once

// Small dense matrices over double / std::complex<double>. Everything here is
// sized for space-time codewords (at most a few dozen rows), so the
// algorithms favour clarity and numerical robustness over blocking.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace dtstc {

using Complex = std::complex<double>;

inline constexpr double kRankTolerance = 1e-9;

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};

template <typename T>
inline double abs2(const T &v) {
  if constexpr (is_complex<T>::value)
    return std::norm(v);
  else
    return v * v;
}

template <typename T>
inline T conj_of(const T &v) {
  if constexpr (is_complex<T>::value)
    return std::conj(v);
  else
    return v;
}

/// Row-major dense matrix.
template <typename T>
class Matrix {
 public:
  using value_type = T;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto &row : init) {
      if (row.size() != cols_) throw std::invalid_argument("Matrix: ragged initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  static Matrix diagonal(std::span<const T> d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool square() const noexcept { return rows_ == cols_; }

  T &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T &operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  Matrix adjoint() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = conj_of((*this)(r, c));
    return t;
  }

  Matrix &operator+=(const Matrix &o) {
    check_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Matrix &operator-=(const Matrix &o) {
    check_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Matrix &operator*=(const T &s) {
    for (auto &v : data_) v *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix &b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix &b) { return a -= b; }
  friend Matrix operator*(Matrix a, const T &s) { return a *= s; }
  friend Matrix operator*(const T &s, Matrix a) { return a *= s; }

  friend bool operator==(const Matrix &a, const Matrix &b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const T &v) {
      if constexpr (is_complex<T>::value)
        return std::isfinite(v.real()) && std::isfinite(v.imag());
      else
        return std::isfinite(v);
    });
  }

 private:
  void check_same_shape(const Matrix &o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument("Matrix: shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using ComplexMatrix = Matrix<Complex>;
using RealMatrix = Matrix<double>;

template <typename T>
Matrix<T> matmul(const Matrix<T> &a, const Matrix<T> &b) {
  if (a.cols() != b.rows())
    throw std::invalid_argument("matmul: inner dimensions " + std::to_string(a.cols()) +
                                " and " + std::to_string(b.rows()) + " differ");
  Matrix<T> out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T aik = a(i, k);
      if (aik == T{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

template <typename T>
Matrix<T> operator*(const Matrix<T> &a, const Matrix<T> &b) {
  return matmul(a, b);
}

template <typename T>
std::vector<T> matvec(const Matrix<T> &a, std::span<const T> x) {
  if (a.cols() != x.size()) throw std::invalid_argument("matvec: dimension mismatch");
  std::vector<T> y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    T acc{};
    const auto row = a.row(i);
    for (std::size_t k = 0; k < row.size(); ++k) acc += row[k] * x[k];
    y[i] = acc;
  }
  return y;
}

/// Kronecker product: block (i,j) of the result is a(i,j)*b.
template <typename T>
Matrix<T> kron(const Matrix<T> &a, const Matrix<T> &b) {
  Matrix<T> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const T aij = a(i, j);
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

/// Determinant by LU with partial pivoting.
template <typename T>
T det(const Matrix<T> &a) {
  if (!a.square()) throw std::invalid_argument("det: matrix is not square");
  const std::size_t n = a.rows();
  Matrix<T> lu = a;
  T result{1};
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(lu(k, k));
    for (std::size_t r = k + 1; r < n; ++r)
      if (std::abs(lu(r, k)) > best) {
        best = std::abs(lu(r, k));
        piv = r;
      }
    if (best == 0.0) return T{};
    if (piv != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(lu(k, c), lu(piv, c));
      result = -result;
    }
    const T pivot = lu(k, k);
    result *= pivot;
    for (std::size_t r = k + 1; r < n; ++r) {
      const T f = lu(r, k) / pivot;
      if (f == T{}) continue;
      for (std::size_t c = k + 1; c < n; ++c) lu(r, c) -= f * lu(k, c);
    }
  }
  return result;
}

/// Matrix with row `skip_r` and column `skip_c` removed.
template <typename T>
Matrix<T> minor_matrix(const Matrix<T> &a, std::size_t skip_r, std::size_t skip_c) {
  Matrix<T> m(a.rows() - 1, a.cols() - 1);
  for (std::size_t r = 0, rr = 0; r < a.rows(); ++r) {
    if (r == skip_r) continue;
    for (std::size_t c = 0, cc = 0; c < a.cols(); ++c) {
      if (c == skip_c) continue;
      m(rr, cc++) = a(r, c);
    }
    ++rr;
  }
  return m;
}

/// Adjugate (transposed cofactor matrix), so that a * adjugate(a) == det(a) * I.
template <typename T>
Matrix<T> adjugate(const Matrix<T> &a) {
  if (!a.square()) throw std::invalid_argument("adjugate: matrix is not square");
  const std::size_t n = a.rows();
  Matrix<T> adj(n, n);
  if (n == 1) {
    adj(0, 0) = T{1};
    return adj;
  }
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      const T cof = det(minor_matrix(a, r, c));
      adj(c, r) = ((r + c) % 2 == 0) ? cof : -cof;
    }
  return adj;
}

namespace detail {

// conj(a) * b and a * conj(b) spelled out; std::complex products go through
// the Annex G NaN-recovery path, which dominates the Jacobi inner loops.
template <typename T>
inline T conj_mul(const T &a, const T &b) {
  if constexpr (is_complex<T>::value)
    return {a.real() * b.real() + a.imag() * b.imag(), a.real() * b.imag() - a.imag() * b.real()};
  else
    return a * b;
}

template <typename T>
inline T mul_conj(const T &a, const T &b) {
  if constexpr (is_complex<T>::value)
    return {a.real() * b.real() + a.imag() * b.imag(), a.imag() * b.real() - a.real() * b.imag()};
  else
    return a * b;
}

}  // namespace detail

/// In-place one-sided Hestenes-Jacobi on `count` vectors of length `len`
/// stored contiguously in v. On return the vectors are mutually orthogonal and
/// their norms (written to sv, descending) are the singular values of the
/// matrix whose rows are the original vectors.
template <typename T>
void jacobi_singular_values(std::span<T> v, std::size_t count, std::size_t len, std::span<double> sv) {
  constexpr double eps = 4.0 * std::numeric_limits<double>::epsilon();
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < count; ++p) {
      T *u = v.data() + p * len;
      for (std::size_t q = p + 1; q < count; ++q) {
        T *w = v.data() + q * len;
        double alpha = 0, beta = 0;
        T gamma{};
        for (std::size_t k = 0; k < len; ++k) {
          alpha += abs2(u[k]);
          beta += abs2(w[k]);
          gamma += detail::conj_mul(u[k], w[k]);
        }
        const double g = std::abs(gamma);
        if (alpha == 0.0 || beta == 0.0 || g <= eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const T phase = gamma / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        for (std::size_t k = 0; k < len; ++k) {
          const T uk = u[k];
          const T wk = detail::mul_conj(w[k], phase);
          u[k] = cs * uk - sn * wk;
          w[k] = sn * uk + cs * wk;
        }
      }
    }
    if (!rotated) break;
  }
  for (std::size_t p = 0; p < count; ++p) {
    double n2 = 0;
    for (std::size_t k = 0; k < len; ++k) n2 += abs2(v[p * len + k]);
    sv[p] = std::sqrt(n2);
  }
  std::sort(sv.begin(), sv.begin() + static_cast<std::ptrdiff_t>(count), std::greater<>());
}

/// Singular values in descending order. The shorter dimension is
/// orthogonalised, so an M x L codeword with M <= L costs O(M^2 L) per sweep.
template <typename T>
std::vector<double> singular_values(const Matrix<T> &a) {
  const bool by_rows = a.rows() <= a.cols();
  const std::size_t count = by_rows ? a.rows() : a.cols();
  const std::size_t len = by_rows ? a.cols() : a.rows();
  std::vector<T> v(count * len);
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) {
      if (by_rows)
        v[r * len + c] = a(r, c);
      else
        v[c * len + r] = conj_of(a(r, c));
    }
  std::vector<double> sv(count);
  jacobi_singular_values<T>(v, count, len, sv);
  return sv;
}

/// Number of singular values above tol * sigma_max. The zero matrix has rank 0.
template <typename T>
std::size_t numerical_rank(const Matrix<T> &a, double tol = kRankTolerance) {
  if (!(tol > 0)) throw std::invalid_argument("numerical_rank: tolerance must be positive");
  const auto sv = singular_values(a);
  if (sv.empty() || sv.front() == 0.0) return 0;
  const double cut = tol * sv.front();
  return static_cast<std::size_t>(std::count_if(sv.begin(), sv.end(), [cut](double s) { return s > cut; }));
}

template <typename T>
double max_abs_diff(const Matrix<T> &a, const Matrix<T> &b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("max_abs_diff: shape mismatch");
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

template <typename T>
double frobenius_norm(const Matrix<T> &a) {
  double s = 0;
  for (const auto &v : a.data()) s += abs2(v);
  return std::sqrt(s);
}

/// true iff max |A A^H - I| <= tol.
template <typename T>
bool is_unitary(const Matrix<T> &a, double tol) {
  if (!a.square()) throw std::invalid_argument("is_unitary: matrix is not square");
  return max_abs_diff(matmul(a, a.adjoint()), Matrix<T>::identity(a.rows())) <= tol;
}

/// Thin Householder QR of a real m x n matrix (m >= n): A = Q R with Q m x n
/// orthonormal columns and R n x n upper triangular.
struct QrResult {
  RealMatrix q;
  RealMatrix r;
};

inline QrResult householder_qr(const RealMatrix &a) {
  const std::size_t m = a.rows(), n = a.cols();
  if (m < n) throw std::invalid_argument("householder_qr: needs rows >= cols");
  RealMatrix work = a;
  std::vector<std::vector<double>> reflectors(n);
  for (std::size_t k = 0; k < n; ++k) {
    double norm = 0;
    for (std::size_t i = k; i < m; ++i) norm += work(i, k) * work(i, k);
    norm = std::sqrt(norm);
    std::vector<double> v(m - k, 0.0);
    if (norm == 0.0) {
      reflectors[k] = std::move(v);
      continue;
    }
    const double alpha = work(k, k) > 0 ? -norm : norm;
    for (std::size_t i = k; i < m; ++i) v[i - k] = work(i, k);
    v[0] -= alpha;
    double vn = 0;
    for (double x : v) vn += x * x;
    if (vn > 0) {
      for (std::size_t c = k; c < n; ++c) {
        double dot = 0;
        for (std::size_t i = k; i < m; ++i) dot += v[i - k] * work(i, c);
        const double f = 2.0 * dot / vn;
        for (std::size_t i = k; i < m; ++i) work(i, c) -= f * v[i - k];
      }
      const double s = std::sqrt(vn);
      for (double &x : v) x /= s;
    }
    reflectors[k] = std::move(v);
  }

  QrResult out{RealMatrix(m, n), RealMatrix(n, n)};
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = r; c < n; ++c) out.r(r, c) = work(r, c);
  // Q = H_0 H_1 ... H_{n-1} applied to the first n unit vectors.
  for (std::size_t c = 0; c < n; ++c) out.q(c, c) = 1.0;
  for (std::size_t k = n; k-- > 0;) {
    const auto &v = reflectors[k];
    for (std::size_t c = 0; c < n; ++c) {
      double dot = 0;
      for (std::size_t i = k; i < m; ++i) dot += v[i - k] * out.q(i, c);
      if (dot == 0.0) continue;
      for (std::size_t i = k; i < m; ++i) out.q(i, c) -= 2.0 * dot * v[i - k];
    }
  }
  return out;
}

}  // namespace dtstc

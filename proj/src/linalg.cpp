#include "iht/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "iht/errors.hpp"
#include "iht/rng.hpp"

namespace iht {

namespace {

void require_same_size(const Vector& a, const Vector& b, const char* op) {
  if (a.size() != b.size()) {
    throw InvalidArgument(std::string(op) + ": dimension mismatch (" + std::to_string(a.size()) +
                          " vs " + std::to_string(b.size()) + ")");
  }
}

}  // namespace

bool Vector::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw InvalidArgument("Matrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

bool Matrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

double dot(const Vector& a, const Vector& b) {
  require_same_size(a, b, "dot");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm2(const Vector& v) {
  // Scaled accumulation keeps tiny and huge entries representable.
  const double scale = max_abs(v);
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double acc = 0.0;
  for (double x : v) {
    const double t = x / scale;
    acc += t * t;
  }
  return scale * std::sqrt(acc);
}

double max_abs(const Vector& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

Vector operator+(const Vector& a, const Vector& b) {
  require_same_size(a, b, "operator+");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Vector operator-(const Vector& a, const Vector& b) {
  require_same_size(a, b, "operator-");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Vector operator*(double alpha, const Vector& v) {
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = alpha * v[i];
  return out;
}

Vector axpy(const Vector& a, double alpha, const Vector& b) {
  require_same_size(a, b, "axpy");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + alpha * b[i];
  return out;
}

Vector matvec(const Matrix& a, const Vector& v) {
  if (a.cols() != v.size()) {
    throw InvalidArgument("matvec: matrix has " + std::to_string(a.cols()) + " columns, vector has " +
                          std::to_string(v.size()) + " entries");
  }
  Vector out(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto row = a.row(r);
    double acc = 0.0;
    for (std::size_t c = 0; c < a.cols(); ++c) acc += row[c] * v[c];
    out[r] = acc;
  }
  return out;
}

Vector matvec_transposed(const Matrix& a, const Vector& v) {
  if (a.rows() != v.size()) {
    throw InvalidArgument("matvec_transposed: matrix has " + std::to_string(a.rows()) +
                          " rows, vector has " + std::to_string(v.size()) + " entries");
  }
  Vector out(a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto row = a.row(r);
    for (std::size_t c = 0; c < a.cols(); ++c) out[c] += row[c] * v[r];
  }
  return out;
}

Matrix gram(const Matrix& a) {
  if (!a.all_finite()) throw InvalidArgument("gram: non-finite entry");
  const std::size_t n = a.cols();
  Matrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t r = 0; r < a.rows(); ++r) acc += a(r, i) * a(r, j);
      g(i, j) = acc;
      g(j, i) = acc;
    }
  }
  return g;
}

Matrix select_columns(const Matrix& a, std::span<const std::size_t> cols) {
  Matrix out(a.rows(), cols.size());
  for (std::size_t k = 0; k < cols.size(); ++k) {
    if (cols[k] >= a.cols()) throw InvalidArgument("select_columns: column index out of range");
    for (std::size_t r = 0; r < a.rows(); ++r) out(r, k) = a(r, cols[k]);
  }
  return out;
}

bool is_symmetric(const Matrix& s, double rel_tol) {
  if (s.rows() != s.cols()) return false;
  double scale = 0.0;
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t j = 0; j < s.cols(); ++j) scale = std::max(scale, std::abs(s(i, j)));
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t j = i + 1; j < s.cols(); ++j)
      if (std::abs(s(i, j) - s(j, i)) > rel_tol * scale) return false;
  return true;
}

double max_eigenvalue(const Matrix& s, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("max_eigenvalue: tol must be positive");
  if (!s.all_finite()) throw InvalidArgument("max_eigenvalue: non-finite entry");
  if (!is_symmetric(s)) throw InvalidArgument("max_eigenvalue: matrix is not symmetric");
  const std::size_t n = s.rows();
  if (n == 0) throw InvalidArgument("max_eigenvalue: empty matrix");

  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(s(i, j)));
  if (scale == 0.0) return 0.0;

  // Seeded positive start vector: not orthogonal to the Perron direction of a
  // non-negative matrix, and generic otherwise.
  Rng rng(0x5eed);
  Vector start(n);
  for (std::size_t i = 0; i < n; ++i) start[i] = 1.0 + 0.5 * rng.uniform();

  // Power iteration with repeated squaring: iterate k applies S^(2^k) to the
  // start vector, so the spectral-gap factor squares every iteration and
  // nearly degenerate top eigenvalues still converge quickly. The eigenvalue
  // itself is always the Rayleigh quotient against the original S.
  Matrix power = s;
  for (std::size_t it = 0; it < kEigenIterationCap; ++it) {
    Vector v = matvec(power, start);
    const double vn = norm2(v);
    if (vn == 0.0) throw ConvergenceError("max_eigenvalue: iterate vanished");
    v = (1.0 / vn) * v;
    const Vector w = matvec(s, v);
    const double rho = dot(v, w);
    const double residual = norm2(axpy(w, -rho, v));
    if (residual <= tol * std::abs(rho)) return rho;

    Matrix next(n, n);
    double next_scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) acc += power(i, k) * power(k, j);
        next(i, j) = acc;
        next(j, i) = acc;
        next_scale = std::max(next_scale, std::abs(acc));
      }
    }
    if (next_scale == 0.0 || !std::isfinite(next_scale)) {
      throw ConvergenceError("max_eigenvalue: matrix power degenerated");
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) next(i, j) /= next_scale;
    power = std::move(next);
  }
  throw ConvergenceError("max_eigenvalue: no convergence within " + std::to_string(kEigenIterationCap) +
                         " iterations");
}

}  // namespace iht

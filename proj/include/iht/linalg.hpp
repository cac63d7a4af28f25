#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace iht {

// Dense real vector with a fixed dimension.
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n, double fill = 0.0) : data_(n, fill) {}
  Vector(std::initializer_list<double> values) : data_(values) {}
  explicit Vector(std::vector<double> values) : data_(std::move(values)) {}

  std::size_t size() const noexcept { return data_.size(); }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> span() noexcept { return data_; }
  std::span<const double> span() const noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  bool all_finite() const noexcept;

  friend bool operator==(const Vector&, const Vector&) = default;

 private:
  std::vector<double> data_;
};

// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  bool all_finite() const noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double dot(const Vector& a, const Vector& b);
double norm2(const Vector& v);
double max_abs(const Vector& v);

Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator*(double alpha, const Vector& v);

// a + alpha * b
Vector axpy(const Vector& a, double alpha, const Vector& b);

Vector matvec(const Matrix& a, const Vector& v);
// Aᵀ v
Vector matvec_transposed(const Matrix& a, const Vector& v);

// AᵀA, symmetrised so that the result is exactly symmetric.
Matrix gram(const Matrix& a);

// Columns of A selected by `cols`, in the given order.
Matrix select_columns(const Matrix& a, std::span<const std::size_t> cols);

bool is_symmetric(const Matrix& s, double rel_tol = 1e-12);

inline constexpr std::size_t kEigenIterationCap = 10'000;

// Largest eigenvalue of a symmetric positive semidefinite matrix by power
// iteration (with repeated squaring) from a fixed seeded start vector.
// Converged once the eigen-residual ‖Sv − ρv‖ is at most tol·ρ. Throws
// InvalidArgument for a non-symmetric or non-finite input and
// ConvergenceError past the iteration cap.
double max_eigenvalue(const Matrix& s, double tol = 1e-12);

}  // namespace iht

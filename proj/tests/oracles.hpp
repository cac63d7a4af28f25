#pragma once

// Test-only reference computations. None of these call into the code paths
// they are used to check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "iht/linalg.hpp"
#include "iht/objectives.hpp"

namespace oracle {

using Mat = std::vector<std::vector<double>>;

inline Mat to_rows(const iht::Matrix& m) {
  Mat out(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

// All eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
inline std::vector<double> jacobi_eigenvalues(Mat a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a[i][i];
  std::sort(eig.begin(), eig.end());
  return eig;
}

// Visits every k-subset of {0..n-1} in lexicographic order.
inline void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (k > n) return;
  while (true) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// min over supports of size <= s of ‖v − v|_S‖₂ (the best s-term error).
inline double best_s_term_error(const std::vector<double>& v, std::size_t s) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k <= std::min(s, v.size()); ++k) {
    for_each_subset(v.size(), k, [&](const std::vector<std::size_t>& keep) {
      double err = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i)
        if (std::find(keep.begin(), keep.end(), i) == keep.end()) err += v[i] * v[i];
      best = std::min(best, std::sqrt(err));
    });
  }
  return best;
}

// Solves A x = b by Gaussian elimination with partial pivoting.
inline std::vector<double> solve(Mat a, std::vector<double> b) {
  const std::size_t n = a.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (std::abs(a[piv][c]) < 1e-14) throw std::runtime_error("oracle::solve: singular");
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double acc = b[i];
    for (std::size_t k = i + 1; k < n; ++k) acc -= a[i][k] * x[k];
    x[i] = acc / a[i][i];
  }
  return x;
}

struct LeastSquares {
  std::vector<double> theta;  // full length, zero off the support
  double value = 0.0;         // ½‖Xθ − y‖²
};

// Least-squares fit of y using only the given columns of X (normal equations).
inline LeastSquares restricted_least_squares(const Mat& x, const std::vector<double>& y,
                                             const std::vector<std::size_t>& cols) {
  const std::size_t m = x.size(), k = cols.size();
  Mat g(k, std::vector<double>(k, 0.0));
  std::vector<double> rhs(k, 0.0);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t r = 0; r < m; ++r) rhs[a] += x[r][cols[a]] * y[r];
    for (std::size_t b = 0; b < k; ++b)
      for (std::size_t r = 0; r < m; ++r) g[a][b] += x[r][cols[a]] * x[r][cols[b]];
  }
  const auto coef = solve(g, rhs);
  LeastSquares out;
  out.theta.assign(x.front().size(), 0.0);
  for (std::size_t a = 0; a < k; ++a) out.theta[cols[a]] = coef[a];
  for (std::size_t r = 0; r < m; ++r) {
    double pred = 0.0;
    for (std::size_t c = 0; c < out.theta.size(); ++c) pred += x[r][c] * out.theta[c];
    out.value += 0.5 * (pred - y[r]) * (pred - y[r]);
  }
  return out;
}

// Cross-entropy straight from the definition, no max-shift; fine for moderate logits.
inline double naive_cross_entropy(const std::vector<double>& theta, const iht::Batch& batch) {
  double total = 0.0;
  const std::size_t m = batch.labels.size();
  for (std::size_t r = 0; r < m; ++r) {
    double logits[3];
    for (std::size_t k = 0; k < 3; ++k) {
      logits[k] = theta[12 + k];
      for (std::size_t i = 0; i < 4; ++i) logits[k] += theta[i * 3 + k] * batch.features(r, i);
    }
    const double z = std::exp(logits[0]) + std::exp(logits[1]) + std::exp(logits[2]);
    total += -std::log(std::exp(logits[batch.labels[r]]) / z);
  }
  return total / static_cast<double>(m);
}

// Scores predictions sample by sample with explicit comparisons.
inline double naive_accuracy(const std::vector<double>& theta, const iht::Batch& batch) {
  std::size_t hits = 0;
  for (std::size_t r = 0; r < batch.labels.size(); ++r) {
    double best = -std::numeric_limits<double>::infinity();
    int arg = -1;
    for (int k = 0; k < 3; ++k) {
      double z = theta[12 + static_cast<std::size_t>(k)];
      for (std::size_t i = 0; i < 4; ++i) z += theta[i * 3 + static_cast<std::size_t>(k)] * batch.features(r, i);
      if (z > best) {
        best = z;
        arg = k;
      }
    }
    hits += arg == batch.labels[r] ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(batch.labels.size());
}

inline double relative_error(const iht::Vector& got, const iht::Vector& want) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    num += (got[i] - want[i]) * (got[i] - want[i]);
    den += want[i] * want[i];
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-12);
}

// Seeded Gaussian matrix for test fixtures.
inline iht::Matrix gaussian_matrix(std::mt19937_64& gen, std::size_t rows, std::size_t cols) {
  std::normal_distribution<double> normal;
  iht::Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = normal(gen);
  return m;
}

inline iht::Vector gaussian_vector(std::mt19937_64& gen, std::size_t n, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  iht::Vector v(n);
  for (double& x : v) x = normal(gen);
  return v;
}

}  // namespace oracle

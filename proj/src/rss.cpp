#include "iht/rss.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "iht/errors.hpp"
#include "iht/rng.hpp"
#include "iht/thresholding.hpp"

namespace iht {

namespace {

// Partial Fisher-Yates: the first k entries are a uniform k-subset of [0, n).
std::vector<std::size_t> sample_without_replacement(Rng& rng, std::size_t n, std::size_t k) {
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

double sample_ratio(const Objective& obj, std::size_t s, Rng& rng, std::size_t& redraws) {
  const std::size_t n = obj.dim();
  Vector full(n);
  for (double& x : full) x = rng.normal();

  Vector theta(n);
  for (std::size_t i : sample_without_replacement(rng, n, s)) theta[i] = full[i];
  const double delta = min_abs_nonzero(theta);
  const Vector grad = obj.gradient(theta);

  for (std::size_t attempt = 0; attempt <= kRedrawCap; ++attempt) {
    Vector direction(n);
    for (double& x : direction) x = rng.normal();
    const SparseVector perturbed = hard_threshold(axpy(theta, delta, direction), s);
    const double step = norm2(perturbed.dense - theta);
    if (step < kMinStepNorm) {
      if (attempt == kRedrawCap) break;
      ++redraws;
      continue;
    }
    return norm2(obj.gradient(perturbed.dense) - grad) / step;
  }
  throw ConvergenceError("estimate_l2s: perturbation collapsed onto the base point " +
                         std::to_string(kRedrawCap) + " times in a row");
}

}  // namespace

RssEstimate estimate_l2s(const Objective& obj, std::size_t s, std::size_t n_monte, std::uint64_t seed) {
  if (s < 1 || s > obj.dim()) {
    throw InvalidArgument("estimate_l2s: s=" + std::to_string(s) + " outside [1, " + std::to_string(obj.dim()) +
                          "]");
  }
  if (n_monte < 1) throw InvalidArgument("estimate_l2s: n_monte must be >= 1");

  RssEstimate est;
  est.n_monte = n_monte;
  est.s = s;
  est.trial_ratios.reserve(n_monte);
  for (std::size_t j = 0; j < n_monte; ++j) {
    Rng rng(derive_seed(seed, {kStreamMonteCarlo, j}));
    const double ratio = sample_ratio(obj, s, rng, est.redraws);
    if (!std::isfinite(ratio)) {
      throw DegenerateEstimateError("estimate_l2s: non-finite ratio in trial " + std::to_string(j));
    }
    est.trial_ratios.push_back(ratio);
  }
  est.l_hat = *std::max_element(est.trial_ratios.begin(), est.trial_ratios.end());
  return est;
}

double exact_l2s_quadratic(const Matrix& x, std::size_t k) {
  const std::size_t p = x.cols();
  if (k < 1 || p == 0) throw InvalidArgument("exact_l2s_quadratic: need k >= 1 and a non-empty design");
  k = std::min(k, p);
  const std::uint64_t subsets = k == p ? 1 : support_count(p, k);
  if (subsets > kExactEnumerationLimit) {
    throw EnumerationLimitError("exact_l2s_quadratic: C(" + std::to_string(p) + ", " + std::to_string(k) +
                                ") subsets exceed the enumeration limit; use estimate_l2s instead");
  }
  // Only subsets of size exactly k are visited: by eigenvalue interlacing a
  // principal submatrix never has a larger top eigenvalue than its parent.
  const Matrix full_gram = gram(x);
  std::vector<std::size_t> cols(k);
  std::iota(cols.begin(), cols.end(), std::size_t{0});
  double best = 0.0;
  while (true) {
    Matrix sub(k, k);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) sub(a, b) = full_gram(cols[a], cols[b]);
    best = std::max(best, max_eigenvalue(sub));

    // Next combination in lexicographic order.
    std::size_t i = k;
    while (i > 0 && cols[i - 1] == p - k + i - 1) --i;
    if (i == 0) break;
    ++cols[i - 1];
    for (std::size_t j = i; j < k; ++j) cols[j] = cols[j - 1] + 1;
  }
  return best;
}

double derive_learning_rate(const RssEstimate& est) {
  if (!(est.l_hat > 0.0) || !std::isfinite(est.l_hat)) {
    throw DegenerateEstimateError("derive_learning_rate: L2s estimate " + std::to_string(est.l_hat) +
                                  " is not positive and finite");
  }
  return 1.0 / est.l_hat;
}

}  // namespace iht

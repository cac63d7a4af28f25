#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "iht/linalg.hpp"
#include "iht/objectives.hpp"

namespace iht {

// Monte Carlo estimate L̂₂ₛ of the restricted smoothness modulus.
struct RssEstimate {
  double l_hat = 0.0;          // max of trial_ratios
  std::vector<double> trial_ratios;
  std::size_t n_monte = 0;
  std::size_t s = 0;
  std::size_t redraws = 0;     // perturbations discarded for a zero step

  // Every sampled ratio was zero (e.g. an affine objective).
  bool degenerate() const noexcept { return !(l_hat > 0.0); }
};

inline constexpr std::size_t kDefaultMonteCarloTrials = 100;
inline constexpr std::size_t kRedrawCap = 100;
inline constexpr double kMinStepNorm = 1e-12;
inline constexpr std::uint64_t kExactEnumerationLimit = 1'000'000;

// Samples n_monte Lipschitz ratios between s-sparse points and returns their max.
//
// Trial j runs on its own stream derive_seed(seed, {kStreamMonteCarlo, j}):
//   θ  ← standard-normal vector, restricted to s coordinates drawn without replacement
//   δ  ← min |θᵢ| over the support
//   θ̃  ← H_s(θ + δ·d), d standard normal
//   r_j = ‖∇f(θ̃) − ∇f(θ)‖ / ‖θ̃ − θ‖
// If ‖θ̃ − θ‖ < kMinStepNorm the perturbation d is redrawn, at most kRedrawCap
// times per trial (ConvergenceError beyond that).
//
// 1 <= s <= dim(obj). s = dim(obj) samples unrestricted pairs, which is what
// the dense baseline uses for its step size.
RssEstimate estimate_l2s(const Objective& obj, std::size_t s, std::size_t n_monte, std::uint64_t seed);

// max over column subsets 𝒮 with |𝒮| <= k of λ_max(X_𝒮ᵀ X_𝒮): the exact
// restricted smoothness constant of ½‖Xθ − y‖² with k = 2s. k is clamped to
// cols(X); k = cols(X) gives λ_max(XᵀX). Throws EnumerationLimitError when
// C(cols, k) exceeds kExactEnumerationLimit.
double exact_l2s_quadratic(const Matrix& x, std::size_t k);

// γ = 1 / L̂₂ₛ; DegenerateEstimateError when L̂₂ₛ is not positive and finite.
double derive_learning_rate(const RssEstimate& est);

}  // namespace iht

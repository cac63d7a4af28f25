#pragma once

#include "iht/linalg.hpp"
#include "iht/thresholding.hpp"

namespace iht {

// Both sides of the HT-stability inequality
//   min{|θᵢ| : i ∈ S} >= γ · max{|∇ⱼ f(θ)| : j ∉ S},   S = supp(θ).
struct StabilityReport {
  double min_abs_on_support = 0.0;
  double max_grad_off_support = 0.0;
  double gamma = 0.0;
  double margin = 0.0;  // min_abs_on_support − gamma · max_grad_off_support
  bool is_stable = false;
};

// An empty complement of the support contributes 0 to the right-hand side.
// Throws InvalidArgument for an empty support, a dimension mismatch, or
// gamma <= 0.
StabilityReport check_ht_stable(const Vector& theta, const Vector& grad, double gamma);
inline StabilityReport check_ht_stable(const SparseVector& theta, const Vector& grad, double gamma) {
  return check_ht_stable(theta.dense, grad, gamma);
}

// loss_sparse <= loss_dense + eps. Throws InvalidArgument unless eps > 0 and both losses are finite.
bool check_eps_optimality(double loss_dense, double loss_sparse, double eps);

}  // namespace iht

#include "iht/stability.hpp"

#include <algorithm>
#include <cmath>

#include "iht/errors.hpp"

namespace iht {

StabilityReport check_ht_stable(const Vector& theta, const Vector& grad, double gamma) {
  if (theta.size() != grad.size()) throw InvalidArgument("check_ht_stable: theta/gradient dimension mismatch");
  if (!(gamma > 0.0)) throw InvalidArgument("check_ht_stable: gamma must be positive");
  const Support support = Support::of(theta);
  if (support.empty()) throw InvalidArgument("check_ht_stable: theta has empty support");

  StabilityReport report;
  report.gamma = gamma;
  report.min_abs_on_support = min_abs_nonzero(theta);
  for (std::size_t j = 0; j < theta.size(); ++j) {
    if (theta[j] == 0.0) report.max_grad_off_support = std::max(report.max_grad_off_support, std::abs(grad[j]));
  }
  report.margin = report.min_abs_on_support - gamma * report.max_grad_off_support;
  report.is_stable = report.margin >= 0.0;
  return report;
}

bool check_eps_optimality(double loss_dense, double loss_sparse, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidArgument("check_eps_optimality: eps must be positive and finite");
  if (!std::isfinite(loss_dense) || !std::isfinite(loss_sparse)) {
    throw InvalidArgument("check_eps_optimality: losses must be finite");
  }
  return loss_sparse <= loss_dense + eps;
}

}  // namespace iht

#include "iht/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "iht/errors.hpp"

namespace iht {

QuadraticObjective::QuadraticObjective(Matrix design, Vector targets)
    : design_(std::move(design)), targets_(std::move(targets)) {
  if (design_.rows() != targets_.size()) {
    throw InvalidArgument("QuadraticObjective: design has " + std::to_string(design_.rows()) + " rows, targets " +
                          std::to_string(targets_.size()));
  }
  if (!design_.all_finite() || !targets_.all_finite()) {
    throw InvalidArgument("QuadraticObjective: non-finite data");
  }
}

ValueGrad QuadraticObjective::value_grad(const Vector& theta) const {
  const Vector residual = matvec(design_, theta) - targets_;
  return {0.5 * dot(residual, residual), matvec_transposed(design_, residual)};
}

double QuadraticObjective::value(const Vector& theta) const {
  const Vector residual = matvec(design_, theta) - targets_;
  return 0.5 * dot(residual, residual);
}

OneLayerClassifier::OneLayerClassifier(std::size_t inputs, std::size_t classes)
    : inputs_(inputs), classes_(classes) {
  if (inputs == 0 || classes < 2) throw InvalidArgument("OneLayerClassifier: need inputs >= 1 and classes >= 2");
}

void OneLayerClassifier::validate(const Vector& theta, const Batch& batch) const {
  if (theta.size() != param_count()) {
    throw InvalidArgument("classifier: theta has " + std::to_string(theta.size()) + " entries, expected " +
                          std::to_string(param_count()));
  }
  if (batch.labels.empty()) throw InvalidArgument("classifier: empty batch");
  if (batch.features.rows() != batch.labels.size() || batch.features.cols() != inputs_) {
    throw InvalidArgument("classifier: batch shape mismatch");
  }
  for (std::size_t r = 0; r < batch.labels.size(); ++r) {
    const int y = batch.labels[r];
    if (y < 0 || static_cast<std::size_t>(y) >= classes_) {
      throw InvalidArgument("classifier: label " + std::to_string(y) + " out of range at sample " +
                            std::to_string(r));
    }
  }
}

Vector OneLayerClassifier::logits(const Vector& theta, std::span<const double> x) const {
  Vector z(classes_);
  for (std::size_t k = 0; k < classes_; ++k) {
    double acc = theta[bias_index(k)];
    for (std::size_t i = 0; i < inputs_; ++i) acc += theta[weight_index(i, k)] * x[i];
    z[k] = acc;
  }
  return z;
}

ValueGrad OneLayerClassifier::value_grad(const Vector& theta, const Batch& batch) const {
  validate(theta, batch);
  const std::size_t m = batch.labels.size();
  const double inv_m = 1.0 / static_cast<double>(m);
  ValueGrad out{0.0, Vector(param_count())};
  Vector prob(classes_);

  for (std::size_t r = 0; r < m; ++r) {
    const auto x = batch.features.row(r);
    const auto y = static_cast<std::size_t>(batch.labels[r]);
    const Vector z = logits(theta, x);
    const auto top = static_cast<std::size_t>(std::max_element(z.begin(), z.end()) - z.begin());
    const double zmax = z[top];
    // Σ_{k≠top} exp(z_k − z_max), kept apart from the leading 1 so that
    // log1p stays accurate for saturated predictions.
    double rest = 0.0;
    for (std::size_t k = 0; k < classes_; ++k) {
      prob[k] = std::exp(z[k] - zmax);
      if (k != top) rest += prob[k];
    }
    const double denom = 1.0 + rest;
    // -log p_y = log Σ exp(z_k − z_max) − (z_y − z_max)
    out.value += (std::log1p(rest) - (z[y] - zmax)) * inv_m;

    // ∂loss/∂z_k = p_k − [k = y]
    for (std::size_t k = 0; k < classes_; ++k) {
      const double delta = (prob[k] / denom - (k == y ? 1.0 : 0.0)) * inv_m;
      out.gradient[bias_index(k)] += delta;
      for (std::size_t i = 0; i < inputs_; ++i) out.gradient[weight_index(i, k)] += delta * x[i];
    }
  }
  return out;
}

double OneLayerClassifier::accuracy(const Vector& theta, const Batch& batch) const {
  validate(theta, batch);
  std::size_t correct = 0;
  for (std::size_t r = 0; r < batch.labels.size(); ++r) {
    const Vector z = logits(theta, batch.features.row(r));
    // max_element returns the first maximum: smallest index on ties.
    const auto predicted = static_cast<int>(std::max_element(z.begin(), z.end()) - z.begin());
    if (predicted == batch.labels[r]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(batch.labels.size());
}

std::vector<std::string> OneLayerClassifier::param_names() const {
  std::vector<std::string> names(param_count());
  for (std::size_t i = 0; i < inputs_; ++i)
    for (std::size_t k = 0; k < classes_; ++k)
      names[weight_index(i, k)] = "w" + std::to_string(i + 1) + std::to_string(k + 1);
  for (std::size_t k = 0; k < classes_; ++k) names[bias_index(k)] = "b" + std::to_string(k + 1);
  return names;
}

ClassifierObjective::ClassifierObjective(OneLayerClassifier model, Batch batch)
    : model_(model), batch_(std::move(batch)) {
  // Validate once up front with a zero parameter vector.
  (void)model_.value_grad(Vector(model_.param_count()), batch_);
}

Vector finite_diff_gradient(const Objective& obj, const Vector& theta, double h) {
  if (!(h > 0.0)) throw InvalidArgument("finite_diff_gradient: h must be positive");
  if (!theta.all_finite()) throw InvalidArgument("finite_diff_gradient: non-finite theta");
  Vector grad(theta.size());
  Vector probe = theta;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    probe[i] = theta[i] + h;
    const double up = obj.value(probe);
    probe[i] = theta[i] - h;
    const double down = obj.value(probe);
    probe[i] = theta[i];
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

}  // namespace iht

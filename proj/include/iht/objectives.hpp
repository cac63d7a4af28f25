#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "iht/linalg.hpp"

namespace iht {

struct ValueGrad {
  double value = 0.0;
  Vector gradient;
};

// Differentiable, bounded-below objective f: ℝⁿ → ℝ.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual std::size_t dim() const = 0;
  virtual ValueGrad value_grad(const Vector& theta) const = 0;

  virtual double value(const Vector& theta) const { return value_grad(theta).value; }
  Vector gradient(const Vector& theta) const { return value_grad(theta).gradient; }
};

// f(θ) = ½‖Xθ − y‖², ∇f(θ) = Xᵀ(Xθ − y).
class QuadraticObjective final : public Objective {
 public:
  QuadraticObjective(Matrix design, Vector targets);

  std::size_t dim() const override { return design_.cols(); }
  ValueGrad value_grad(const Vector& theta) const override;
  double value(const Vector& theta) const override;

  const Matrix& design() const noexcept { return design_; }
  const Vector& targets() const noexcept { return targets_; }

 private:
  Matrix design_;
  Vector targets_;
};

// Labelled feature rows.
struct Batch {
  Matrix features;          // m × d
  std::vector<int> labels;  // m entries in [0, classes)
};

// Single dense layer followed by softmax: p = softmax(Wᵀx + b).
//
// Parameter layout in θ (fixed; seeds map onto these coordinates):
//   θ[i·classes + k]              weight from feature i to class k  (W row-major)
//   θ[inputs·classes + k]         bias of class k
// With the default 4 inputs and 3 classes, n = 15.
class OneLayerClassifier {
 public:
  explicit OneLayerClassifier(std::size_t inputs = 4, std::size_t classes = 3);

  std::size_t inputs() const noexcept { return inputs_; }
  std::size_t classes() const noexcept { return classes_; }
  std::size_t param_count() const noexcept { return inputs_ * classes_ + classes_; }

  std::size_t weight_index(std::size_t input, std::size_t cls) const { return input * classes_ + cls; }
  std::size_t bias_index(std::size_t cls) const { return inputs_ * classes_ + cls; }

  // Logits for one sample.
  Vector logits(const Vector& theta, std::span<const double> x) const;

  // Mean softmax cross-entropy over the batch and its gradient.
  ValueGrad value_grad(const Vector& theta, const Batch& batch) const;

  // Fraction of samples whose arg-max logit equals the label; ties go to the
  // smallest class index.
  double accuracy(const Vector& theta, const Batch& batch) const;

  // "w11".."w43", "b1".."b3": one-based names used in parameter tables.
  std::vector<std::string> param_names() const;

 private:
  void validate(const Vector& theta, const Batch& batch) const;

  std::size_t inputs_;
  std::size_t classes_;
};

// A classifier bound to a fixed batch; the training loss seen by IHT/GD.
class ClassifierObjective final : public Objective {
 public:
  ClassifierObjective(OneLayerClassifier model, Batch batch);

  std::size_t dim() const override { return model_.param_count(); }
  ValueGrad value_grad(const Vector& theta) const override { return model_.value_grad(theta, batch_); }

  const OneLayerClassifier& model() const noexcept { return model_; }
  const Batch& batch() const noexcept { return batch_; }

 private:
  OneLayerClassifier model_;
  Batch batch_;
};

// Central differences (f(θ + h·eᵢ) − f(θ − h·eᵢ)) / 2h for every coordinate.
Vector finite_diff_gradient(const Objective& obj, const Vector& theta, double h = 1e-5);

}  // namespace iht

#pragma once

#include <cstddef>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "iht/linalg.hpp"
#include "iht/objectives.hpp"
#include "iht/thresholding.hpp"

namespace iht {

enum class StopReason { kLossStop, kMaxSteps };

std::string_view to_string(StopReason reason);
StopReason parse_stop_reason(std::string_view text);

struct IhtConfig {
  std::size_t s = 1;
  double gamma = 0.0;
  std::size_t max_steps = 10'000;
  double loss_stop = 0.05;
  std::size_t trace_every = 1;  // record every k-th step; the terminal step is always recorded
};

struct TraceRow {
  std::size_t step = 0;
  double loss = 0.0;
  double grad_norm = 0.0;
  Support support;
  bool support_changed = false;  // support differs from the previous iterate's
};

struct Trace {
  std::vector<TraceRow> rows;
  Vector final_theta;
  Vector final_gradient;
  double final_loss = 0.0;
  std::size_t steps_taken = 0;  // number of parameter updates applied
  StopReason stop = StopReason::kMaxSteps;
};

struct IhtResult {
  SparseVector theta;
  Trace trace;
};

struct GdResult {
  Vector theta;
  Trace trace;
};

// Iterative hard thresholding: θᵏ⁺¹ = H_s(θᵏ − γ∇f(θᵏ)).
//
// Stops before updating when f(θᵏ) <= loss_stop, or after max_steps updates.
// θ0 must satisfy ‖θ0‖₀ <= s. Throws DivergenceError (carrying k) when the
// loss or gradient at θᵏ is not finite.
IhtResult iht_run(const Objective& obj, const SparseVector& theta0, const IhtConfig& cfg);

// Plain gradient descent θᵏ⁺¹ = θᵏ − γ∇f(θᵏ) with the same stopping rules.
GdResult gd_run(const Objective& obj, const Vector& theta0, double gamma, std::size_t max_steps, double loss_stop,
                std::size_t trace_every = 1);

// step,loss,grad_norm,support,changed; one row per recorded step.
void write_trace_csv(std::ostream& out, const Trace& trace);

}  // namespace iht
